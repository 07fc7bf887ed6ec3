// io.hpp -- deterministic CSV/JSON serialization of results. All CSVs carry
// a header row, comma separators, '.' decimals, and LF terminators.
#ifndef ALOHA_IO_HPP
#define ALOHA_IO_HPP

#include <filesystem>
#include <fstream>
#include <span>
#include <string>

#include "aloha/drift.hpp"
#include "aloha/engine.hpp"
#include "aloha/metrics.hpp"

namespace aloha {

/// Shortest-round decimal with up to 12 significant digits.
std::string format_double(double value);

/// Opens for binary writing, throwing std::runtime_error on failure.
std::ofstream open_output(const std::filesystem::path& path);

void write_delays_csv(std::ostream& os, std::span<const RunResult> results);
void write_trace_csv(std::ostream& os, const RunResult& result);
void write_schedule_csv(std::ostream& os, const ArrivalSchedule& schedule);
void write_cdf_csv(std::ostream& os, const DelayCdf& cdf);

struct DriftCurveRow {
    double rho;
    double delta;
    std::string scheme;
    std::string nu;  // empty when not applicable
    std::string eta;
};
void write_drift_csv(std::ostream& os, std::span<const DriftCurveRow> rows);

struct DivergenceRow {
    DivergenceReport report;
    std::int64_t n_devices;
};
void write_divergence_csv(std::ostream& os, std::span<const DivergenceRow> rows);

struct StabilityRow {
    std::string scheme;
    StabilityVerdict verdict;
};
void write_stability_csv(std::ostream& os, std::span<const StabilityRow> rows);

/// Ordered-key JSON summary of one scenario run set, dumped with trailing
/// newline; byte-stable for identical inputs.
std::string run_summary_json(const ScenarioConfig& config, std::int64_t n_reps,
                             std::span<const RunResult> results);

std::string proposition1_report_json(std::span<const Proposition1Report> reports);

} // namespace aloha

#endif // ALOHA_IO_HPP
