// alohasim -- command-line front door for the slotted-ALOHA laboratory.
//
// Subcommands: drift, simulate, sweep, stability. Every command is
// deterministic: configuration plus seed fully determine the output bytes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aloha/drift.hpp"
#include "aloha/engine.hpp"
#include "aloha/io.hpp"
#include "aloha/metrics.hpp"

namespace fs = std::filesystem;
using namespace aloha;

namespace {

struct CommonOpts {
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    std::int64_t reps = 1;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_reps = true)
{
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Base seed")->capture_default_str();
    if (with_reps)
        cmd->add_option("--reps", opts.reps, "Replications")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    cmd->add_option("--threads", opts.threads,
                    "Worker threads (0 = hardware concurrency)");
}

fs::path prepare_out_dir(const std::string& dir)
{
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory: " + path.string());
    return path;
}

struct DriftOpts {
    CommonOpts common;
    double min = 0.05;
    double max = 10.0;
    double step = 0.01;
    std::vector<double> nu_list{1.0, 2.0, 3.0};
    double eta = 1.0;
};

int cmd_drift(const DriftOpts& opts)
{
    if (!(opts.min > 0.0) || !(opts.min < opts.max) || !(opts.step > 0.0))
        throw std::invalid_argument("drift grid requires 0 < min < max and step > 0");

    const fs::path out = prepare_out_dir(opts.common.out_dir);
    const auto grid = make_grid(opts.min, opts.max, opts.step);

    std::vector<DriftCurveRow> rows;
    for (double nu : opts.nu_list) {
        const auto curve = drift_curve(grid, FasaScheme{nu, opts.eta});
        for (const auto& p : curve)
            rows.push_back({p.rho, p.delta, "fasa", format_double(nu),
                            format_double(opts.eta)});
    }
    const auto baseline = drift_curve(grid, KellyScheme{KellyParams::baseline()});
    for (const auto& p : baseline)
        rows.push_back({p.rho, p.delta, "kelly", "", ""});

    auto csv = open_output(out / "drift_curves.csv");
    write_drift_csv(csv, rows);

    // verification always runs on the canonical grid, independent of the
    // requested curve grid
    const auto canonical = make_grid(0.05, 10.0, 0.01);
    std::vector<Proposition1Report> reports;
    bool all_pass = true;
    for (double nu : opts.nu_list) {
        reports.push_back(verify_proposition1(nu, opts.eta, canonical));
        all_pass = all_pass && reports.back().pass;
    }
    auto rep = open_output(out / "prop1_report.json");
    rep << proposition1_report_json(reports);

    std::cout << "drift: wrote " << rows.size() << " curve points; proposition checks "
              << (all_pass ? "pass" : "FAIL") << "\n";
    return all_pass ? 0 : 1;
}

struct SimulateOpts {
    CommonOpts common;
    std::int64_t n_devices = 500;
    std::string scheme = "fasa";
    std::int64_t span = 50;
    double alpha = 3.0;
    double beta = 4.0;
    std::int64_t max_slots = 0;
    bool trace = false;
    bool dump_schedule = false;
    std::map<std::string, double> params; // only explicitly set flags
};

int cmd_simulate(const SimulateOpts& opts)
{
    const fs::path out = prepare_out_dir(opts.common.out_dir);

    ScenarioConfig config;
    config.traffic = BurstSpec{opts.n_devices, opts.span, opts.alpha, opts.beta};
    config.scheme = SchemeSpec{opts.scheme, opts.params};
    config.max_slots = opts.max_slots;
    config.seed = opts.common.seed;
    config.record_backlog_trace = opts.trace;

    const auto results =
        run_replications(config, opts.common.reps, opts.common.threads);

    auto summary = open_output(out / "summary.json");
    summary << run_summary_json(config, opts.common.reps, results);
    auto delays = open_output(out / "delays.csv");
    write_delays_csv(delays, results);
    auto cdf_csv = open_output(out / "cdf.csv");
    write_cdf_csv(cdf_csv, delay_cdf(results));

    if (opts.trace) {
        auto trace = open_output(out / "trace.csv");
        write_trace_csv(trace, results.front());
    }
    if (opts.dump_schedule) {
        RngStream traffic_rng(derive_seed(config.seed, 0), "traffic");
        const auto schedule =
            generate_burst(std::get<BurstSpec>(config.traffic), traffic_rng);
        auto sched = open_output(out / "schedule.csv");
        write_schedule_csv(sched, schedule);
    }

    std::cout << "simulate: " << opts.scheme << " N=" << opts.n_devices << " reps="
              << opts.common.reps << " mean_delay=" << format_double(mean_delay(results))
              << "\n";
    return 0;
}

struct SweepOpts {
    CommonOpts common;
    std::vector<std::int64_t> n_list{100, 200, 500, 1000, 2000, 3000};
    std::vector<std::string> schemes{"pb-aloha", "qplus", "fasa"};
    std::int64_t span = 50;
    double alpha = 3.0;
    double beta = 4.0;
};

int cmd_sweep(const SweepOpts& opts)
{
    const fs::path out = prepare_out_dir(opts.common.out_dir);

    std::vector<DivergenceRow> rows;
    for (std::int64_t n : opts.n_list) {
        if (n < 1)
            throw std::invalid_argument("sweep requires every N >= 1");
        ScenarioConfig config;
        config.traffic = BurstSpec{n, opts.span, opts.alpha, opts.beta};
        config.seed = opts.common.seed;

        config.scheme = SchemeSpec{"ideal", {}};
        const auto ideal =
            run_replications(config, opts.common.reps, opts.common.threads);

        for (const auto& scheme : opts.schemes) {
            config.scheme = SchemeSpec{scheme, {}};
            const auto results =
                run_replications(config, opts.common.reps, opts.common.threads);
            rows.push_back({divergence(results, ideal, scheme), n});
        }
    }

    auto csv = open_output(out / "divergence.csv");
    write_divergence_csv(csv, rows);
    std::cout << "sweep: wrote " << rows.size() << " divergence rows\n";
    return 0;
}

struct StabilityOpts {
    CommonOpts common;
    std::vector<double> lambdas{0.30, 0.34, 0.36, 0.37};
    std::vector<std::string> schemes{"pb-aloha", "qplus", "fasa"};
    std::int64_t horizon = 100000;
    std::int64_t n_seeds = 20;
};

int cmd_stability(const StabilityOpts& opts)
{
    if (opts.horizon < 10000)
        throw std::invalid_argument("stability horizon must be >= 10^4 slots");
    for (double rate : opts.lambdas)
        if (!(rate >= 0.0))
            throw std::invalid_argument("stability rates must be nonnegative");

    const fs::path out = prepare_out_dir(opts.common.out_dir);

    std::vector<StabilityRow> rows;
    for (const auto& scheme : opts.schemes) {
        for (double rate : opts.lambdas) {
            ScenarioConfig config;
            config.traffic = PoissonSpec{rate, opts.horizon};
            config.scheme = SchemeSpec{scheme, {}};
            config.max_slots = opts.horizon; // verdict window = horizon
            config.seed = opts.common.seed;
            config.record_backlog_trace = true;

            const auto results =
                run_replications(config, opts.n_seeds, opts.common.threads);
            for (const auto& r : results)
                rows.push_back({scheme, stability_verdict(r, rate)});
        }
    }

    auto csv = open_output(out / "stability.csv");
    write_stability_csv(csv, rows);
    std::cout << "stability: wrote " << rows.size() << " verdict rows\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Slotted-ALOHA random-access laboratory"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file");

    DriftOpts drift_opts;
    auto* drift_cmd = app.add_subcommand(
        "drift", "Evaluate analytic drift curves and verify their monotonicity");
    drift_cmd->add_option("--min", drift_opts.min, "Grid minimum offered load")
        ->capture_default_str();
    drift_cmd->add_option("--max", drift_opts.max, "Grid maximum offered load")
        ->capture_default_str();
    drift_cmd->add_option("--step", drift_opts.step, "Grid step")->capture_default_str();
    drift_cmd->add_option("--nu-list", drift_opts.nu_list, "FASA speed exponents")
        ->delimiter(',')
        ->capture_default_str();
    drift_cmd->add_option("--eta", drift_opts.eta, "FASA speed scale")
        ->capture_default_str();
    add_common(drift_cmd, drift_opts.common, false);

    SimulateOpts sim_opts;
    auto* sim_cmd =
        app.add_subcommand("simulate", "Run the single-burst access scenario");
    sim_cmd->add_option("-N,--devices", sim_opts.n_devices, "Devices in the burst")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim_cmd->add_option("--scheme", sim_opts.scheme,
                        "Controller: ideal, kelly, pb-aloha, qplus, fasa")
        ->capture_default_str();
    sim_cmd->add_option("--span", sim_opts.span, "Burst span T in slots")
        ->capture_default_str();
    sim_cmd->add_option("--alpha", sim_opts.alpha, "Beta shape alpha")
        ->capture_default_str();
    sim_cmd->add_option("--beta", sim_opts.beta, "Beta shape beta")
        ->capture_default_str();
    sim_cmd->add_option("--max-slots", sim_opts.max_slots,
                        "Slot budget (0 = default for the traffic model)");
    sim_cmd->add_flag("--trace", sim_opts.trace, "Write trace.csv for replication 0");
    sim_cmd->add_flag("--dump-schedule", sim_opts.dump_schedule,
                      "Write schedule.csv for replication 0");
    double nu = 2.0, eta = 1.0, a0 = -1.0, a1 = 0.0, ac = kCollisionStep;
    double zeta0 = QPlusParams{}.zeta0, zetac = QPlusParams{}.zetac;
    double lambda_hat = PbAlohaParams{}.lambda_hat;
    auto* nu_opt = sim_cmd->add_option("--nu", nu, "fasa: speed exponent");
    auto* eta_opt = sim_cmd->add_option("--eta", eta, "fasa: speed scale");
    auto* a0_opt = sim_cmd->add_option("--a0", a0, "kelly: idle step");
    auto* a1_opt = sim_cmd->add_option("--a1", a1, "kelly: success step");
    auto* ac_opt = sim_cmd->add_option("--ac", ac, "kelly: collision step");
    auto* z0_opt = sim_cmd->add_option("--zeta0", zeta0, "qplus: idle divisor");
    auto* zc_opt = sim_cmd->add_option("--zetac", zetac, "qplus: collision factor");
    auto* lh_opt =
        sim_cmd->add_option("--lambda-hat", lambda_hat, "pb-aloha: assumed arrival rate");
    add_common(sim_cmd, sim_opts.common);

    SweepOpts sweep_opts;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Mean delay and divergence versus burst size, paired against ideal");
    sweep_cmd->add_option("--n-list", sweep_opts.n_list, "Burst sizes")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--schemes", sweep_opts.schemes, "Schemes to compare")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--span", sweep_opts.span, "Burst span T in slots")
        ->capture_default_str();
    sweep_cmd->add_option("--alpha", sweep_opts.alpha, "Beta shape alpha")
        ->capture_default_str();
    sweep_cmd->add_option("--beta", sweep_opts.beta, "Beta shape beta")
        ->capture_default_str();
    add_common(sweep_cmd, sweep_opts.common);

    StabilityOpts stab_opts;
    auto* stab_cmd = app.add_subcommand(
        "stability", "Open-system Poisson runs with bounded/unbounded verdicts");
    stab_cmd->add_option("--lambdas", stab_opts.lambdas, "Arrival rates per slot")
        ->delimiter(',')
        ->capture_default_str();
    stab_cmd->add_option("--schemes", stab_opts.schemes, "Schemes to test")
        ->delimiter(',')
        ->capture_default_str();
    stab_cmd->add_option("--horizon", stab_opts.horizon, "Run length in slots")
        ->capture_default_str();
    stab_cmd->add_option("--seeds", stab_opts.n_seeds, "Independent seeds per point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(stab_cmd, stab_opts.common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*drift_cmd)
            return cmd_drift(drift_opts);
        if (*sim_cmd) {
            auto set_if = [&](CLI::Option* opt, const char* key, double value) {
                if (opt->count() > 0)
                    sim_opts.params[key] = value;
            };
            set_if(nu_opt, "nu", nu);
            set_if(eta_opt, "eta", eta);
            set_if(a0_opt, "a0", a0);
            set_if(a1_opt, "a1", a1);
            set_if(ac_opt, "ac", ac);
            set_if(z0_opt, "zeta0", zeta0);
            set_if(zc_opt, "zetac", zetac);
            set_if(lh_opt, "lambda_hat", lambda_hat);
            return cmd_simulate(sim_opts);
        }
        if (*sweep_cmd)
            return cmd_sweep(sweep_opts);
        if (*stab_cmd)
            return cmd_stability(stab_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
