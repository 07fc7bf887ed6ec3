#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "aloha/engine.hpp"

using namespace aloha;

namespace {

ScenarioConfig burst_config(std::int64_t n, const std::string& scheme,
                            std::uint64_t seed, bool trace = false)
{
    ScenarioConfig config;
    config.traffic = BurstSpec{n, 50, 3.0, 4.0};
    config.scheme = SchemeSpec{scheme, {}};
    config.seed = seed;
    config.record_backlog_trace = trace;
    return config;
}

bool same_result(const RunResult& a, const RunResult& b)
{
    if (a.terminated != b.terminated || a.slots_elapsed != b.slots_elapsed ||
        a.devices_activated != b.devices_activated ||
        a.residual_backlog != b.residual_backlog ||
        a.delays.size() != b.delays.size())
        return false;
    for (std::size_t i = 0; i < a.delays.size(); ++i) {
        const auto& x = a.delays[i];
        const auto& y = b.delays[i];
        if (x.device_id != y.device_id || x.activation_slot != y.activation_slot ||
            x.success_slot != y.success_slot || x.delay_slots != y.delay_slots)
            return false;
    }
    if (a.backlog_trace.has_value() != b.backlog_trace.has_value())
        return false;
    if (a.backlog_trace) {
        if (a.backlog_trace->size() != b.backlog_trace->size())
            return false;
        for (std::size_t i = 0; i < a.backlog_trace->size(); ++i) {
            const auto& x = (*a.backlog_trace)[i];
            const auto& y = (*b.backlog_trace)[i];
            if (x.slot != y.slot || x.backlog != y.backlog || x.estimate != y.estimate)
                return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("a lone device succeeds in its activation slot")
{
    for (const char* scheme : {"ideal", "fasa", "pb-aloha", "qplus", "kelly"}) {
        ScenarioConfig config;
        config.traffic = BurstSpec{1, 1, 1.0, 1.0};
        config.scheme = SchemeSpec{scheme, {}};
        config.seed = 7;
        const auto result = run_scenario(config);
        REQUIRE(result.delays.size() == 1);
        CHECK(result.delays[0].activation_slot == 0);
        CHECK(result.delays[0].success_slot == 0);
        CHECK(result.delays[0].delay_slots == 0);
        CHECK(result.terminated == Termination::Drained);
    }
}

TEST_CASE("drained burst runs conserve devices and succeed exactly N times")
{
    for (const char* scheme : {"ideal", "fasa", "pb-aloha", "qplus"}) {
        const auto result = run_scenario(burst_config(300, scheme, 11));
        REQUIRE(result.terminated == Termination::Drained);
        CHECK(result.devices_activated == 300);
        CHECK(result.delays.size() == 300);
        CHECK(result.residual_backlog == 0);
        for (const auto& d : result.delays) {
            REQUIRE(d.success_slot >= d.activation_slot);
            REQUIRE(d.delay_slots == d.success_slot - d.activation_slot);
        }
    }
}

TEST_CASE("conservation holds when the horizon cuts the run short")
{
    auto config = burst_config(500, "pb-aloha", 13);
    config.max_slots = 50;
    const auto result = run_scenario(config);
    CHECK(result.terminated == Termination::HorizonReached);
    CHECK(result.slots_elapsed == 50);
    CHECK(result.devices_activated ==
          static_cast<std::int64_t>(result.delays.size()) + result.residual_backlog);
    CHECK(result.residual_backlog > 0);
}

TEST_CASE("open-system runs conserve devices")
{
    ScenarioConfig config;
    config.traffic = PoissonSpec{0.3, 20000};
    config.scheme = SchemeSpec{"fasa", {}};
    config.max_slots = 20000;
    config.seed = 17;
    config.record_backlog_trace = true;
    const auto result = run_scenario(config);
    CHECK(result.devices_activated ==
          static_cast<std::int64_t>(result.delays.size()) + result.residual_backlog);
    REQUIRE(result.backlog_trace.has_value());
    CHECK(result.backlog_trace->size() == static_cast<std::size_t>(result.slots_elapsed));
    for (std::size_t i = 1; i < result.backlog_trace->size(); ++i)
        REQUIRE((*result.backlog_trace)[i].slot > (*result.backlog_trace)[i - 1].slot);
}

TEST_CASE("identical configs give identical results")
{
    const auto config = burst_config(200, "fasa", 23, true);
    const auto a = run_scenario(config);
    const auto b = run_scenario(config);
    CHECK(same_result(a, b));

    const auto reps_a = run_replications(config, 4, 2);
    const auto reps_b = run_replications(config, 4, 1);
    REQUIRE(reps_a.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(same_result(reps_a[i], reps_b[i]));
}

TEST_CASE("schemes sharing a seed contend against the same arrivals")
{
    const auto fasa = run_replications(burst_config(150, "fasa", 29), 3);
    const auto qplus = run_replications(burst_config(150, "qplus", 29), 3);
    for (std::size_t rep = 0; rep < 3; ++rep) {
        REQUIRE(fasa[rep].terminated == Termination::Drained);
        REQUIRE(qplus[rep].terminated == Termination::Drained);
        // drained runs surface the whole schedule as activation slots
        auto acts_of = [](const RunResult& r) {
            std::vector<std::int64_t> acts;
            for (const auto& d : r.delays)
                acts.push_back(d.activation_slot);
            std::sort(acts.begin(), acts.end());
            return acts;
        };
        CHECK(acts_of(fasa[rep]) == acts_of(qplus[rep]));
    }
}

TEST_CASE("genie throughput matches the binomial success probability")
{
    // all devices active from slot 0; per-slot success probability with
    // backlog n is (1 - 1/n)^(n-1)
    ScenarioConfig config;
    config.traffic = BurstSpec{200, 1, 1.0, 1.0};
    config.scheme = SchemeSpec{"ideal", {}};
    config.seed = 31;
    config.record_backlog_trace = true;

    const auto results = run_replications(config, 100);
    double observed = 0.0, expected = 0.0, variance = 0.0;
    double slots = 0.0;
    for (const auto& r : results) {
        REQUIRE(r.backlog_trace.has_value());
        for (const auto& p : *r.backlog_trace) {
            const auto n = static_cast<double>(p.backlog);
            if (n < 100.0) // steady portion: backlog above half the burst
                continue;
            const double ps = std::pow(1.0 - 1.0 / n, n - 1.0);
            expected += ps;
            variance += ps * (1.0 - ps);
            slots += 1.0;
        }
    }
    // successes in the steady portion = slots where the backlog then drops
    for (const auto& r : results) {
        const auto& trace = *r.backlog_trace;
        for (std::size_t i = 0; i + 1 < trace.size(); ++i)
            if (trace[i].backlog >= 100 && trace[i + 1].backlog < trace[i].backlog)
                observed += 1.0;
    }
    REQUIRE(slots > 1000.0);
    CHECK(std::abs(observed - expected) < 3.0 * std::sqrt(variance));
}

TEST_CASE("genie drain time approaches N e slots")
{
    ScenarioConfig config;
    config.traffic = BurstSpec{200, 1, 1.0, 1.0};
    config.scheme = SchemeSpec{"ideal", {}};
    config.seed = 37;
    const auto results = run_replications(config, 100);
    double mean_slots = 0.0;
    for (const auto& r : results) {
        REQUIRE(r.terminated == Termination::Drained);
        mean_slots += static_cast<double>(r.slots_elapsed);
    }
    mean_slots /= 100.0;
    const double n_e = 200.0 * std::numbers::e;
    CHECK(mean_slots > 0.93 * n_e);
    CHECK(mean_slots < 1.07 * n_e);
}

TEST_CASE("fasa drains bursts faster than pb-aloha on paired seeds")
{
    int fasa_wins = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        const auto fasa = run_scenario(burst_config(500, "fasa", 1000 + s));
        const auto pb = run_scenario(burst_config(500, "pb-aloha", 1000 + s));
        REQUIRE(fasa.terminated == Termination::Drained);
        REQUIRE(pb.terminated == Termination::Drained);
        if (fasa.slots_elapsed < pb.slots_elapsed)
            ++fasa_wins;
    }
    // a fair coin stays below 70/100 with probability > 0.9999
    CHECK(fasa_wins >= 70);
}

TEST_CASE("ideal mean delay grows about linearly in the burst size")
{
    auto mean_delay_of = [](std::int64_t n) {
        const auto results = run_replications(burst_config(n, "ideal", 53), 30);
        double sum = 0.0;
        std::int64_t count = 0;
        for (const auto& r : results)
            for (const auto& d : r.delays) {
                sum += static_cast<double>(d.delay_slots);
                ++count;
            }
        return sum / static_cast<double>(count);
    };
    const double ratio = mean_delay_of(1000) / mean_delay_of(500);
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
}

TEST_CASE("mean delay orders ideal <= fasa <= qplus <= pb-aloha at N = 500")
{
    const int reps = 100;
    auto mean_of = [&](const char* scheme) {
        const auto results = run_replications(burst_config(500, scheme, 59), reps);
        double sum = 0.0;
        std::int64_t count = 0;
        for (const auto& r : results)
            for (const auto& d : r.delays) {
                sum += static_cast<double>(d.delay_slots);
                ++count;
            }
        return sum / static_cast<double>(count);
    };
    const double ideal = mean_of("ideal");
    const double fasa = mean_of("fasa");
    const double qplus = mean_of("qplus");
    const double pb = mean_of("pb-aloha");
    INFO("ideal ", ideal, " fasa ", fasa, " qplus ", qplus, " pb ", pb);
    CHECK(ideal <= fasa);
    CHECK(fasa <= qplus);
    CHECK(qplus <= pb);
}

TEST_CASE("invalid configurations are rejected before simulation")
{
    auto config = burst_config(100, "fasa", 1);
    config.max_slots = 10; // below the 50-slot burst span
    CHECK_THROWS_AS(run_scenario(config), std::invalid_argument);

    auto bad_scheme = burst_config(100, "nope", 1);
    CHECK_THROWS_AS(run_scenario(bad_scheme), std::invalid_argument);

    CHECK_THROWS_AS(run_replications(burst_config(10, "fasa", 1), 0),
                    std::invalid_argument);
}
