#include "aloha/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aloha {

DelayCdf delay_cdf(std::span<const RunResult> results)
{
    std::vector<std::int64_t> delays;
    for (const auto& r : results)
        for (const auto& d : r.delays)
            delays.push_back(d.delay_slots);
    if (delays.empty())
        throw std::invalid_argument("delay_cdf requires at least one delay record");
    std::sort(delays.begin(), delays.end());

    DelayCdf cdf;
    const double total = static_cast<double>(delays.size());
    std::size_t i = 0;
    while (i < delays.size()) {
        std::size_t j = i;
        while (j < delays.size() && delays[j] == delays[i])
            ++j;
        cdf.grid.push_back(delays[i]);
        cdf.cum_fraction.push_back(static_cast<double>(j) / total);
        i = j;
    }
    return cdf;
}

double percentile_delay(const DelayCdf& cdf, double fraction)
{
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw std::invalid_argument("fraction must lie in (0, 1)");
    if (cdf.grid.empty())
        throw std::invalid_argument("empty CDF");
    for (std::size_t i = 0; i < cdf.grid.size(); ++i)
        if (cdf.cum_fraction[i] >= fraction - 1e-12)
            return static_cast<double>(cdf.grid[i]);
    return static_cast<double>(cdf.grid.back());
}

double mean_delay(std::span<const RunResult> results)
{
    std::int64_t sum = 0;
    std::int64_t count = 0;
    for (const auto& r : results)
        for (const auto& d : r.delays) {
            sum += d.delay_slots;
            ++count;
        }
    if (count == 0)
        throw std::invalid_argument("mean_delay requires at least one delay record");
    return static_cast<double>(sum) / static_cast<double>(count);
}

namespace {

double replication_mean(const RunResult& r)
{
    if (r.delays.empty())
        throw std::invalid_argument("replication carries no delay records");
    std::int64_t sum = 0;
    for (const auto& d : r.delays)
        sum += d.delay_slots;
    return static_cast<double>(sum) / static_cast<double>(r.delays.size());
}

} // namespace

DivergenceReport divergence(std::span<const RunResult> scheme_results,
                            std::span<const RunResult> ideal_results,
                            const std::string& scheme_name)
{
    if (scheme_results.empty() || ideal_results.empty())
        throw std::invalid_argument("divergence requires nonempty result sets");

    DivergenceReport report;
    report.scheme = scheme_name;
    report.mean_delay = mean_delay(scheme_results);
    report.ideal_mean_delay = mean_delay(ideal_results);
    report.divergence_pct =
        (report.mean_delay - report.ideal_mean_delay) / report.ideal_mean_delay * 100.0;
    report.n_reps = static_cast<std::int64_t>(scheme_results.size());

    const std::size_t paired = std::min(scheme_results.size(), ideal_results.size());
    if (paired >= 2) {
        std::vector<double> per_rep;
        per_rep.reserve(paired);
        for (std::size_t r = 0; r < paired; ++r) {
            const double d = replication_mean(scheme_results[r]);
            const double d_star = replication_mean(ideal_results[r]);
            per_rep.push_back((d - d_star) / d_star * 100.0);
        }
        double mean = 0.0;
        for (double v : per_rep)
            mean += v;
        mean /= static_cast<double>(paired);
        double var = 0.0;
        for (double v : per_rep)
            var += (v - mean) * (v - mean);
        var /= static_cast<double>(paired - 1);
        report.std_error = std::sqrt(var / static_cast<double>(paired));
    }
    return report;
}

const char* to_string(Verdict v)
{
    return v == Verdict::Bounded ? "Bounded" : "Unbounded";
}

StabilityVerdict stability_verdict(const RunResult& result, double rate,
                                   double backlog_threshold, double slope_threshold)
{
    if (!result.backlog_trace.has_value())
        throw std::invalid_argument("stability verdict requires a backlog trace");
    const auto& trace = *result.backlog_trace;

    StabilityVerdict verdict;
    verdict.rate = rate;
    verdict.final_backlog = trace.empty() ? 0 : trace.back().backlog;

    // least-squares slope over the second half of the simulated span
    const std::int64_t half = result.slots_elapsed / 2;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::int64_t n = 0;
    for (const auto& p : trace) {
        if (p.slot < half)
            continue;
        const auto x = static_cast<double>(p.slot);
        const auto y = static_cast<double>(p.backlog);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2) {
        const double denom = static_cast<double>(n) * sxx - sx * sx;
        if (denom > 0.0)
            verdict.backlog_slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    }

    const bool unbounded =
        static_cast<double>(verdict.final_backlog) > backlog_threshold &&
        verdict.backlog_slope > slope_threshold;
    verdict.verdict = unbounded ? Verdict::Unbounded : Verdict::Bounded;
    return verdict;
}

} // namespace aloha
