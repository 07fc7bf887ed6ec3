#include "aloha/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace aloha {

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open output file: " + path.string());
    return os;
}

void write_delays_csv(std::ostream& os, std::span<const RunResult> results)
{
    os << "device_id,activation_slot,success_slot,delay_slots\n";
    for (const auto& r : results)
        for (const auto& d : r.delays)
            os << d.device_id << ',' << d.activation_slot << ',' << d.success_slot
               << ',' << d.delay_slots << '\n';
}

void write_trace_csv(std::ostream& os, const RunResult& result)
{
    os << "slot,backlog,estimate\n";
    if (!result.backlog_trace)
        return;
    for (const auto& p : *result.backlog_trace)
        os << p.slot << ',' << p.backlog << ',' << format_double(p.estimate) << '\n';
}

void write_schedule_csv(std::ostream& os, const ArrivalSchedule& schedule)
{
    os << "device_id,activation_slot\n";
    for (std::size_t i = 0; i < schedule.size(); ++i)
        os << i << ',' << schedule[i] << '\n';
}

void write_cdf_csv(std::ostream& os, const DelayCdf& cdf)
{
    os << "delay_slots,cum_fraction\n";
    for (std::size_t i = 0; i < cdf.grid.size(); ++i)
        os << cdf.grid[i] << ',' << format_double(cdf.cum_fraction[i]) << '\n';
}

void write_drift_csv(std::ostream& os, std::span<const DriftCurveRow> rows)
{
    os << "rho,delta,scheme,nu,eta\n";
    for (const auto& row : rows)
        os << format_double(row.rho) << ',' << format_double(row.delta) << ','
           << row.scheme << ',' << row.nu << ',' << row.eta << '\n';
}

void write_divergence_csv(std::ostream& os, std::span<const DivergenceRow> rows)
{
    os << "scheme,n_devices,mean_delay,ideal_delay,divergence_pct,std_error\n";
    for (const auto& row : rows)
        os << row.report.scheme << ',' << row.n_devices << ','
           << format_double(row.report.mean_delay) << ','
           << format_double(row.report.ideal_mean_delay) << ','
           << format_double(row.report.divergence_pct) << ','
           << format_double(row.report.std_error) << '\n';
}

void write_stability_csv(std::ostream& os, std::span<const StabilityRow> rows)
{
    os << "scheme,lambda,verdict,final_backlog,slope\n";
    for (const auto& row : rows)
        os << row.scheme << ',' << format_double(row.verdict.rate) << ','
           << to_string(row.verdict.verdict) << ',' << row.verdict.final_backlog << ','
           << format_double(row.verdict.backlog_slope) << '\n';
}

namespace {

nlohmann::ordered_json traffic_json(const TrafficSpec& traffic)
{
    nlohmann::ordered_json j;
    if (const auto* burst = std::get_if<BurstSpec>(&traffic)) {
        j["model"] = "burst";
        j["n_devices"] = burst->n_devices;
        j["span_slots"] = burst->span_slots;
        j["alpha"] = burst->alpha;
        j["beta"] = burst->beta;
    } else {
        const auto& poisson = std::get<PoissonSpec>(traffic);
        j["model"] = "poisson";
        j["rate"] = poisson.rate;
        j["horizon"] = poisson.horizon;
    }
    return j;
}

} // namespace

std::string run_summary_json(const ScenarioConfig& config, std::int64_t n_reps,
                             std::span<const RunResult> results)
{
    nlohmann::ordered_json j;
    j["scheme"] = config.scheme.name;
    j["params"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config.scheme.params)
        j["params"][key] = value;
    j["traffic"] = traffic_json(config.traffic);
    j["seed"] = config.seed;
    j["max_slots"] = config.effective_max_slots();
    j["n_reps"] = n_reps;

    std::int64_t activated = 0, succeeded = 0, drained = 0;
    std::int64_t slots_total = 0;
    for (const auto& r : results) {
        activated += r.devices_activated;
        succeeded += static_cast<std::int64_t>(r.delays.size());
        drained += r.terminated == Termination::Drained ? 1 : 0;
        slots_total += r.slots_elapsed;
    }
    j["devices_activated"] = activated;
    j["devices_succeeded"] = succeeded;
    j["replications_drained"] = drained;
    j["mean_slots_elapsed"] =
        results.empty() ? 0.0
                        : static_cast<double>(slots_total) / static_cast<double>(results.size());

    j["replications"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json rj;
        rj["slots_elapsed"] = r.slots_elapsed;
        rj["terminated"] = to_string(r.terminated);
        rj["devices_activated"] = r.devices_activated;
        rj["devices_succeeded"] = r.delays.size();
        rj["residual_backlog"] = r.residual_backlog;
        j["replications"].push_back(rj);
    }

    if (succeeded > 0) {
        const auto cdf = delay_cdf(results);
        j["mean_delay"] = mean_delay(results);
        j["delay_p10"] = percentile_delay(cdf, 0.10);
        j["delay_p50"] = percentile_delay(cdf, 0.50);
        j["delay_p90"] = percentile_delay(cdf, 0.90);
    }
    return j.dump(2) + "\n";
}

std::string proposition1_report_json(std::span<const Proposition1Report> reports)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& report : reports) {
        nlohmann::ordered_json j;
        j["nu"] = report.nu;
        j["eta"] = report.eta;
        j["pass"] = report.pass;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : report.checks) {
            nlohmann::ordered_json cj;
            cj["name"] = c.name;
            cj["pass"] = c.pass;
            if (!c.detail.empty())
                cj["detail"] = c.detail;
            j["checks"].push_back(cj);
        }
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

} // namespace aloha
