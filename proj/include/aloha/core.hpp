// core.hpp -- shared domain types, controller contract, deterministic RNG
#ifndef ALOHA_CORE_HPP
#define ALOHA_CORE_HPP

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>

namespace aloha {

/// Channel observation for one slot: classified from the transmitter count k
/// as k=0 -> Idle, k=1 -> Success, k>=2 -> Collision.
enum class SlotOutcome { Idle, Success, Collision };

SlotOutcome outcome_from_count(std::int64_t transmitters);
const char* to_string(SlotOutcome z);

/// Additive step applied on a collision by the fixed-step baseline and FASA.
inline constexpr double kCollisionStep = 1.0 / (std::numbers::e - 2.0);

/// A controller's running state: backlog estimate plus the consecutive
/// idle/collision run counters. estimate >= 1 always; the two run counters
/// are never both positive.
struct EstimatorState {
    double estimate = 1.0;
    std::int64_t idle_run = 0;
    std::int64_t collision_run = 0;

    bool valid() const
    {
        return estimate >= 1.0 && idle_run >= 0 && collision_run >= 0 &&
               !(idle_run > 0 && collision_run > 0);
    }
};

/// Commit an outcome to the run counters: the matching counter is
/// incremented, the opposing one reset, and a Success resets both. After
/// this call the counters include the slot whose outcome was committed.
void advance_run_counters(EstimatorState& state, SlotOutcome z);

/// Transmission probability broadcast for the next slot, in (0, 1].
struct ControllerDecision {
    double transmit_probability = 1.0;
};

/// p = 1/max(1, estimate); every controller emits exactly this.
ControllerDecision decision_from_estimate(double estimate);

/// Deterministic random stream. A given (seed, label) pair yields the same
/// variate sequence on every run; all distribution sampling is implemented
/// on top of the mt19937_64 word stream so results do not depend on the
/// standard library's unspecified distribution algorithms.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);

    std::uint64_t seed() const { return seed_; }
    const std::string& label() const { return label_; }

    std::uint64_t next_u64();
    /// Uniform on [0, 1), 53-bit resolution.
    double next_double();
    /// Uniform on (0, 1]; safe to pass to log().
    double next_double_pos();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::int64_t uniform_index(std::int64_t n);
    double normal();
    /// Gamma(shape, 1) via Marsaglia-Tsang, any shape > 0.
    double gamma(double shape);
    double beta(double alpha, double beta);
    std::int64_t poisson(double mean);
    /// Exact Binomial(n, p) sample; cost grows with n*min(p,1-p).
    std::int64_t binomial(std::int64_t n, double p);

private:
    std::uint64_t seed_;
    std::string label_;
    std::mt19937_64 engine_;
};

/// Per-replication seed derivation: deterministic, scheme-independent, so
/// paired experiments reuse one traffic schedule per replication index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

} // namespace aloha

#endif // ALOHA_CORE_HPP
