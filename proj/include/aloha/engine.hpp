// engine.hpp -- the slot loop: arrivals join the backlog, the controller
// broadcasts p_t, the transmit count classifies the slot, successes drain.
#ifndef ALOHA_ENGINE_HPP
#define ALOHA_ENGINE_HPP

#include <optional>
#include <variant>
#include <vector>

#include "aloha/estimators.hpp"
#include "aloha/traffic.hpp"

namespace aloha {

using TrafficSpec = std::variant<BurstSpec, PoissonSpec>;

/// Last slot at which the traffic model can still activate devices.
std::int64_t traffic_horizon(const TrafficSpec& traffic);
/// 1e5 slots for burst runs, 1e6 for open-system runs.
std::int64_t default_max_slots(const TrafficSpec& traffic);

struct ScenarioConfig {
    TrafficSpec traffic;
    SchemeSpec scheme;
    /// 0 picks default_max_slots(traffic).
    std::int64_t max_slots = 0;
    std::uint64_t seed = 1;
    bool record_backlog_trace = false;

    std::int64_t effective_max_slots() const;
    void validate() const;
};

struct DelayRecord {
    std::int64_t device_id;
    std::int64_t activation_slot;
    std::int64_t success_slot;
    std::int64_t delay_slots; // success_slot - activation_slot
};

struct TracePoint {
    std::int64_t slot;
    std::int64_t backlog;  // true N_t after arrivals
    double estimate;       // controller's N_hat_t driving p_t
};

enum class Termination { Drained, HorizonReached };
const char* to_string(Termination t);

struct RunResult {
    std::vector<DelayRecord> delays;
    Termination terminated = Termination::Drained;
    std::optional<std::vector<TracePoint>> backlog_trace;
    std::int64_t slots_elapsed = 0;
    std::int64_t devices_activated = 0;
    std::int64_t residual_backlog = 0;
};

/// Runs one scenario. Fully determined by the config, seed included: the
/// traffic schedule comes from stream (seed, "traffic") and channel
/// randomness from (seed, "channel"), so two schemes sharing a seed contend
/// against byte-identical arrivals.
RunResult run_scenario(const ScenarioConfig& config);

/// n_reps independent replications; replication r runs with seed
/// derive_seed(config.seed, r). n_threads = 0 uses the hardware count;
/// results are indexed by replication regardless of completion order.
std::vector<RunResult> run_replications(const ScenarioConfig& config,
                                        std::int64_t n_reps,
                                        unsigned n_threads = 0);

} // namespace aloha

#endif // ALOHA_ENGINE_HPP
