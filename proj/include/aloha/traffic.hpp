// traffic.hpp -- device activation generators: beta-distributed event burst
// and per-slot Poisson arrivals.
#ifndef ALOHA_TRAFFIC_HPP
#define ALOHA_TRAFFIC_HPP

#include <cstdint>
#include <vector>

#include "aloha/core.hpp"

namespace aloha {

/// One active stage: n_devices activation times drawn on [0, span_slots)
/// from Beta(alpha, beta) scaled to the span, floored to slot indices.
struct BurstSpec {
    std::int64_t n_devices = 500;
    std::int64_t span_slots = 50;
    double alpha = 3.0;
    double beta = 4.0;

    void validate() const;
};

/// Open system: each slot of the horizon receives a Poisson(rate) count of
/// newly activated devices.
struct PoissonSpec {
    double rate = 0.3;
    std::int64_t horizon = 100000;

    void validate() const;
};

/// Activation slots, sorted nondecreasing; device id is the index.
using ArrivalSchedule = std::vector<std::int64_t>;

ArrivalSchedule generate_burst(const BurstSpec& spec, RngStream& rng);
ArrivalSchedule generate_poisson(const PoissonSpec& spec, RngStream& rng);

} // namespace aloha

#endif // ALOHA_TRAFFIC_HPP
