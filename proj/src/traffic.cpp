#include "aloha/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aloha {

void BurstSpec::validate() const
{
    if (n_devices < 1)
        throw std::invalid_argument("burst n_devices must be >= 1");
    if (span_slots < 1)
        throw std::invalid_argument("burst span_slots must be >= 1");
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("burst alpha and beta must be positive");
}

void PoissonSpec::validate() const
{
    if (!(rate >= 0.0))
        throw std::invalid_argument("poisson rate must be nonnegative");
    if (horizon < 1)
        throw std::invalid_argument("poisson horizon must be >= 1");
}

ArrivalSchedule generate_burst(const BurstSpec& spec, RngStream& rng)
{
    spec.validate();
    ArrivalSchedule schedule;
    schedule.reserve(static_cast<std::size_t>(spec.n_devices));
    const double span = static_cast<double>(spec.span_slots);
    for (std::int64_t i = 0; i < spec.n_devices; ++i) {
        const double x = span * rng.beta(spec.alpha, spec.beta);
        auto slot = static_cast<std::int64_t>(std::floor(x));
        slot = std::clamp<std::int64_t>(slot, 0, spec.span_slots - 1);
        schedule.push_back(slot);
    }
    std::sort(schedule.begin(), schedule.end());
    return schedule;
}

ArrivalSchedule generate_poisson(const PoissonSpec& spec, RngStream& rng)
{
    spec.validate();
    ArrivalSchedule schedule;
    for (std::int64_t slot = 0; slot < spec.horizon; ++slot) {
        const std::int64_t count = rng.poisson(spec.rate);
        schedule.insert(schedule.end(), static_cast<std::size_t>(count), slot);
    }
    return schedule;
}

} // namespace aloha
