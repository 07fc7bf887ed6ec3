// metrics.hpp -- figures of merit over run results: delay CDF and
// percentiles, divergence from the ideal benchmark, stability verdicts.
#ifndef ALOHA_METRICS_HPP
#define ALOHA_METRICS_HPP

#include <span>
#include <string>
#include <vector>

#include "aloha/engine.hpp"

namespace aloha {

/// Empirical distribution of access delay pooled over replications.
struct DelayCdf {
    std::vector<std::int64_t> grid;    // sorted distinct delay values
    std::vector<double> cum_fraction;  // nondecreasing, ends at 1
};

DelayCdf delay_cdf(std::span<const RunResult> results);

/// Smallest grid delay whose cumulative fraction reaches the given
/// fraction; fraction must lie strictly inside (0, 1).
double percentile_delay(const DelayCdf& cdf, double fraction);

/// Mean delay over all pooled records.
double mean_delay(std::span<const RunResult> results);

struct DivergenceReport {
    std::string scheme;
    double mean_delay = 0.0;        // D
    double ideal_mean_delay = 0.0;  // D*
    double divergence_pct = 0.0;    // (D - D*)/D* * 100
    std::int64_t n_reps = 0;
    double std_error = 0.0;  // of divergence_pct, from paired per-rep means
};

/// Normalized divergence of a scheme against the ideal benchmark; expects
/// paired replications (same seeds) for the standard error to be sharp.
DivergenceReport divergence(std::span<const RunResult> scheme_results,
                            std::span<const RunResult> ideal_results,
                            const std::string& scheme_name = "");

enum class Verdict { Bounded, Unbounded };
const char* to_string(Verdict v);

struct StabilityVerdict {
    double rate = 0.0;
    Verdict verdict = Verdict::Bounded;
    std::int64_t final_backlog = 0;
    double backlog_slope = 0.0; // devices/slot, least squares over last half
};

/// Unbounded iff the final backlog exceeds backlog_threshold AND the
/// least-squares backlog slope over the last half of the run exceeds
/// slope_threshold; requires the run to carry a backlog trace.
StabilityVerdict stability_verdict(const RunResult& result, double rate,
                                   double backlog_threshold = 1000.0,
                                   double slope_threshold = 0.01);

} // namespace aloha

#endif // ALOHA_METRICS_HPP
