#include "aloha/engine.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace aloha {

std::int64_t traffic_horizon(const TrafficSpec& traffic)
{
    return std::visit(
        [](const auto& spec) -> std::int64_t {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BurstSpec>)
                return spec.span_slots;
            else
                return spec.horizon;
        },
        traffic);
}

std::int64_t default_max_slots(const TrafficSpec& traffic)
{
    return std::holds_alternative<BurstSpec>(traffic) ? 100000 : 1000000;
}

std::int64_t ScenarioConfig::effective_max_slots() const
{
    return max_slots == 0 ? default_max_slots(traffic) : max_slots;
}

void ScenarioConfig::validate() const
{
    std::visit([](const auto& spec) { spec.validate(); }, traffic);
    if (effective_max_slots() < traffic_horizon(traffic))
        throw std::invalid_argument("max_slots must cover the traffic horizon");
    Controller::make(scheme); // rejects unknown scheme/params up front
}

const char* to_string(Termination t)
{
    return t == Termination::Drained ? "Drained" : "HorizonReached";
}

RunResult run_scenario(const ScenarioConfig& config)
{
    config.validate();

    RngStream traffic_rng(config.seed, "traffic");
    RngStream channel_rng(config.seed, "channel");

    const ArrivalSchedule schedule = std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BurstSpec>)
                return generate_burst(spec, traffic_rng);
            else
                return generate_poisson(spec, traffic_rng);
        },
        config.traffic);

    Controller controller = Controller::make(config.scheme);
    const std::int64_t max_slots = config.effective_max_slots();

    struct Backlogged {
        std::int64_t device_id;
        std::int64_t activation_slot;
    };
    std::vector<Backlogged> backlog;

    RunResult result;
    result.devices_activated = static_cast<std::int64_t>(schedule.size());
    result.delays.reserve(schedule.size());
    if (config.record_backlog_trace)
        result.backlog_trace.emplace();

    std::size_t next_arrival = 0;
    std::int64_t t = 0;
    for (; t < max_slots; ++t) {
        while (next_arrival < schedule.size() && schedule[next_arrival] == t) {
            backlog.push_back({static_cast<std::int64_t>(next_arrival), t});
            ++next_arrival;
        }
        if (backlog.empty() && next_arrival == schedule.size()) {
            result.terminated = Termination::Drained;
            break;
        }

        const auto n_t = static_cast<std::int64_t>(backlog.size());
        const ControllerDecision decision = controller.decide(n_t);
        if (config.record_backlog_trace)
            result.backlog_trace->push_back({t, n_t, controller.estimate()});

        const std::int64_t transmitters =
            channel_rng.binomial(n_t, decision.transmit_probability);
        const SlotOutcome outcome = outcome_from_count(transmitters);

        if (outcome == SlotOutcome::Success) {
            const std::int64_t idx = channel_rng.uniform_index(n_t);
            const Backlogged done = backlog[static_cast<std::size_t>(idx)];
            backlog[static_cast<std::size_t>(idx)] = backlog.back();
            backlog.pop_back();
            result.delays.push_back(
                {done.device_id, done.activation_slot, t, t - done.activation_slot});
        }

        controller.observe(outcome);
    }

    if (t == max_slots)
        result.terminated = Termination::HorizonReached;
    result.slots_elapsed = t;
    result.residual_backlog = static_cast<std::int64_t>(backlog.size());
    return result;
}

std::vector<RunResult> run_replications(const ScenarioConfig& config,
                                        std::int64_t n_reps, unsigned n_threads)
{
    if (n_reps < 1)
        throw std::invalid_argument("n_reps must be >= 1");
    config.validate();

    std::vector<RunResult> results(static_cast<std::size_t>(n_reps));
    auto run_one = [&](std::int64_t rep) {
        ScenarioConfig rep_config = config;
        rep_config.seed = derive_seed(config.seed, static_cast<std::uint64_t>(rep));
        results[static_cast<std::size_t>(rep)] = run_scenario(rep_config);
    };

    if (n_threads == 0)
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    if (n_threads <= 1 || n_reps == 1) {
        for (std::int64_t rep = 0; rep < n_reps; ++rep)
            run_one(rep);
        return results;
    }

    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t rep = next.fetch_add(1);
            if (rep >= n_reps)
                return;
            run_one(rep);
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(n_threads, static_cast<unsigned>(n_reps));
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    return results;
}

} // namespace aloha
