#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aloha/metrics.hpp"

using namespace aloha;

namespace {

RunResult result_with_delays(std::initializer_list<std::int64_t> delays)
{
    RunResult r;
    std::int64_t id = 0;
    for (auto d : delays) {
        r.delays.push_back({id++, 0, d, d});
    }
    r.devices_activated = static_cast<std::int64_t>(r.delays.size());
    r.terminated = Termination::Drained;
    return r;
}

RunResult result_with_trace(std::vector<std::int64_t> backlog)
{
    RunResult r;
    r.backlog_trace.emplace();
    std::int64_t slot = 0;
    for (auto b : backlog)
        r.backlog_trace->push_back({slot++, b, 1.0});
    r.slots_elapsed = slot;
    r.terminated = Termination::HorizonReached;
    return r;
}

} // namespace

TEST_CASE("delay cdf from pooled records")
{
    const RunResult single = result_with_delays({5});
    const auto cdf1 = delay_cdf(std::vector<RunResult>{single});
    REQUIRE(cdf1.grid.size() == 1);
    CHECK(cdf1.grid[0] == 5);
    CHECK(cdf1.cum_fraction[0] == 1.0);

    const auto cdf2 = delay_cdf(std::vector<RunResult>{result_with_delays({0, 0, 10, 10})});
    REQUIRE(cdf2.grid.size() == 2);
    CHECK(cdf2.grid[0] == 0);
    CHECK(cdf2.cum_fraction[0] == doctest::Approx(0.5));
    CHECK(cdf2.grid[1] == 10);
    CHECK(cdf2.cum_fraction[1] == doctest::Approx(1.0));

    // pooling across replications
    const std::vector<RunResult> pooled{result_with_delays({1, 3}),
                                        result_with_delays({3, 7})};
    const auto cdf3 = delay_cdf(pooled);
    REQUIRE(cdf3.grid.size() == 3);
    CHECK(cdf3.cum_fraction[1] == doctest::Approx(0.75));

    CHECK_THROWS_AS(delay_cdf(std::vector<RunResult>{}), std::invalid_argument);
    CHECK_THROWS_AS(delay_cdf(std::vector<RunResult>{RunResult{}}),
                    std::invalid_argument);
}

TEST_CASE("cdf is a valid distribution function")
{
    RngStream rng(47, "cdf");
    std::vector<RunResult> results;
    for (int rep = 0; rep < 5; ++rep) {
        RunResult r;
        for (int i = 0; i < 200; ++i) {
            const std::int64_t d = rng.uniform_index(50);
            r.delays.push_back({i, 0, d, d});
        }
        results.push_back(std::move(r));
    }
    const auto cdf = delay_cdf(results);
    REQUIRE(!cdf.grid.empty());
    for (std::size_t i = 1; i < cdf.grid.size(); ++i) {
        REQUIRE(cdf.grid[i] > cdf.grid[i - 1]);
        REQUIRE(cdf.cum_fraction[i] >= cdf.cum_fraction[i - 1]);
    }
    CHECK(cdf.cum_fraction.front() >= 0.0);
    CHECK(cdf.cum_fraction.back() == doctest::Approx(1.0));
}

TEST_CASE("percentile lookup")
{
    const auto cdf = delay_cdf(std::vector<RunResult>{result_with_delays({5})});
    CHECK(percentile_delay(cdf, 0.1) == 5.0);
    CHECK(percentile_delay(cdf, 0.999) == 5.0);
    CHECK_THROWS_AS(percentile_delay(cdf, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(percentile_delay(cdf, 0.0), std::invalid_argument);

    const auto steps =
        delay_cdf(std::vector<RunResult>{result_with_delays({0, 10, 20, 30})});
    CHECK(percentile_delay(steps, 0.25) == 0.0);
    CHECK(percentile_delay(steps, 0.26) == 10.0);
    double prev = 0.0;
    for (double f = 0.05; f < 1.0; f += 0.05) {
        const double p = percentile_delay(steps, f);
        REQUIRE(p >= prev);
        prev = p;
    }
}

TEST_CASE("divergence reports")
{
    const std::vector<RunResult> ideal{result_with_delays({10, 10}),
                                       result_with_delays({8, 12})};
    const std::vector<RunResult> scheme{result_with_delays({12, 12}),
                                        result_with_delays({10, 14})};

    const auto self = divergence(ideal, ideal, "ideal");
    CHECK(self.divergence_pct == 0.0);

    const auto report = divergence(scheme, ideal, "test");
    CHECK(report.mean_delay == doctest::Approx(12.0));
    CHECK(report.ideal_mean_delay == doctest::Approx(10.0));
    CHECK(report.divergence_pct == doctest::Approx(20.0));
    CHECK(report.n_reps == 2);
    CHECK(report.std_error >= 0.0);

    CHECK_THROWS_AS(divergence({}, ideal, "x"), std::invalid_argument);
    CHECK_THROWS_AS(divergence(scheme, {}, "x"), std::invalid_argument);
}

TEST_CASE("stability verdict rule")
{
    // steady growth past the backlog threshold
    std::vector<std::int64_t> growing;
    for (int t = 0; t < 10000; ++t)
        growing.push_back(t / 2);
    const auto unbounded = stability_verdict(result_with_trace(growing), 0.37);
    CHECK(unbounded.verdict == Verdict::Unbounded);
    CHECK(unbounded.final_backlog == 4999);
    CHECK(unbounded.backlog_slope == doctest::Approx(0.5).epsilon(1e-6));

    // bounded fluctuation stays bounded
    std::vector<std::int64_t> flat(10000, 400);
    const auto bounded = stability_verdict(result_with_trace(flat), 0.3);
    CHECK(bounded.verdict == Verdict::Bounded);
    CHECK(bounded.backlog_slope == doctest::Approx(0.0));

    // high but non-growing backlog needs both tests to trip
    std::vector<std::int64_t> high(10000, 2000);
    CHECK(stability_verdict(result_with_trace(high), 0.36).verdict ==
          Verdict::Bounded);

    // growing but still small backlog stays bounded
    std::vector<std::int64_t> small;
    for (int t = 0; t < 10000; ++t)
        small.push_back(t / 20);
    CHECK(stability_verdict(result_with_trace(small), 0.36).verdict ==
          Verdict::Bounded);

    CHECK_THROWS_AS(stability_verdict(RunResult{}, 0.3), std::invalid_argument);
}

TEST_CASE("empty trace is a bounded verdict")
{
    RunResult r;
    r.backlog_trace.emplace();
    const auto v = stability_verdict(r, 0.0);
    CHECK(v.verdict == Verdict::Bounded);
    CHECK(v.final_backlog == 0);
    CHECK(v.backlog_slope == 0.0);
}
