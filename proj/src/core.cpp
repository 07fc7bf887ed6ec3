#include "aloha/core.hpp"

#include <cmath>
#include <stdexcept>

namespace aloha {

SlotOutcome outcome_from_count(std::int64_t transmitters)
{
    if (transmitters < 0)
        throw std::invalid_argument("transmitter count must be nonnegative");
    if (transmitters == 0)
        return SlotOutcome::Idle;
    if (transmitters == 1)
        return SlotOutcome::Success;
    return SlotOutcome::Collision;
}

const char* to_string(SlotOutcome z)
{
    switch (z) {
    case SlotOutcome::Idle: return "idle";
    case SlotOutcome::Success: return "success";
    case SlotOutcome::Collision: return "collision";
    }
    return "?";
}

void advance_run_counters(EstimatorState& state, SlotOutcome z)
{
    switch (z) {
    case SlotOutcome::Idle:
        state.idle_run += 1;
        state.collision_run = 0;
        break;
    case SlotOutcome::Success:
        state.idle_run = 0;
        state.collision_run = 0;
        break;
    case SlotOutcome::Collision:
        state.collision_run += 1;
        state.idle_run = 0;
        break;
    }
}

ControllerDecision decision_from_estimate(double estimate)
{
    return {1.0 / std::max(1.0, estimate)};
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
    std::uint64_t x = base ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    return splitmix64(x);
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : seed_(seed), label_(label)
{
    std::uint64_t x = seed ^ fnv1a(label);
    engine_.seed(splitmix64(x));
}

std::uint64_t RngStream::next_u64()
{
    return engine_();
}

double RngStream::next_double()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_double_pos()
{
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * next_double();
}

std::int64_t RngStream::uniform_index(std::int64_t n)
{
    if (n <= 0)
        throw std::invalid_argument("uniform_index requires n > 0");
    // rejection to avoid modulo bias
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<std::int64_t>(x % un);
}

double RngStream::normal()
{
    // Box-Muller; the sine partner is discarded to keep the draw count
    // independent of call history.
    const double u1 = next_double_pos();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gamma(double shape)
{
    if (!(shape > 0.0))
        throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(next_double_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_double_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x)
            return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double RngStream::beta(double alpha, double beta)
{
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("beta parameters must be positive");
    const double x = gamma(alpha);
    const double y = gamma(beta);
    return x / (x + y);
}

std::int64_t RngStream::poisson(double mean)
{
    if (mean < 0.0 || !std::isfinite(mean))
        throw std::invalid_argument("poisson mean must be finite and >= 0");
    if (mean == 0.0)
        return 0;
    if (mean < 30.0) {
        // Knuth multiplication method
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_double_pos();
        } while (p > limit);
        return k - 1;
    }
    // PTRS transformed rejection (Hormann), valid for mean >= 10
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = next_double() - 0.5;
        const double v = next_double_pos();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        const double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(kf);
    }
}

std::int64_t RngStream::binomial(std::int64_t n, double p)
{
    if (n < 0)
        throw std::invalid_argument("binomial n must be nonnegative");
    if (!(p >= 0.0) || !(p <= 1.0))
        throw std::invalid_argument("binomial p must be in [0, 1]");
    if (n == 0 || p == 0.0)
        return 0;
    if (p == 1.0)
        return n;
    if (p > 0.5)
        return n - binomial(n, 1.0 - p);
    // Count successes by jumping over geometric failure runs; exact and
    // immune to the CDF underflow that breaks plain inversion at large n*p.
    const double log_q = std::log1p(-p);
    std::int64_t successes = 0;
    std::int64_t pos = 0;
    for (;;) {
        const double skip = std::floor(std::log(next_double_pos()) / log_q);
        if (skip >= static_cast<double>(n)) // guard against int64 overflow
            break;
        pos += static_cast<std::int64_t>(skip) + 1;
        if (pos > n)
            break;
        ++successes;
    }
    return successes;
}

} // namespace aloha
