#include "aloha/drift.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace aloha {

namespace {

constexpr double kSeriesTol = 1e-12;
constexpr std::int64_t kSeriesMaxTerms = 1000000;
constexpr double kMaxQ = 1.0 - 1e-6;

std::string format_point(double x, double y)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%.6g, %.6g)", x, y);
    return buf;
}

} // namespace

OutcomeProbabilities outcome_probabilities(double rho)
{
    if (!(rho > 0.0))
        throw std::invalid_argument("offered load rho must be positive");
    const double q0 = std::exp(-rho);
    const double q1 = rho * q0;
    // 1 - q0 evaluated as -expm1(-rho) keeps qc positive for tiny rho
    const double qc = -std::expm1(-rho) - q1;
    return {q0, q1, qc};
}

double idle_prob_optimal()
{
    return outcome_probabilities(1.0).q0;
}

double collision_prob_optimal()
{
    return outcome_probabilities(1.0).qc;
}

double geometric_power_moment(double nu, double q)
{
    if (!(nu >= 0.0))
        throw std::invalid_argument("moment order nu must be >= 0");
    if (!(q > 0.0) || q > kMaxQ)
        throw std::invalid_argument("q must lie in (0, 1 - 1e-6]");

    const double one_minus_q = 1.0 - q;
    const double log_q = std::log(q);
    double sum = 0.0;
    double q_pow = 1.0; // q^(k-1)
    for (std::int64_t k = 1; k <= kSeriesMaxTerms; ++k) {
        const auto kd = static_cast<double>(k);
        // k^nu overflows double near nu ln k = 709; evaluate the whole term
        // in log space before that
        const double log_k = std::log(kd);
        const double term =
            nu * log_k > 600.0
                ? std::exp(nu * log_k + (kd - 1.0) * log_q) * one_minus_q
                : std::pow(kd, nu) * q_pow * one_minus_q;
        sum += term;
        // ratios term_{j+1}/term_j = q ((j+1)/j)^nu decrease in j, so once
        // below 1 they bound the tail geometrically
        const double ratio = q * std::pow((kd + 1.0) / kd, nu);
        if (ratio < 1.0) {
            const double tail_bound = term * ratio / (1.0 - ratio);
            if (tail_bound <= kSeriesTol * sum)
                break;
        }
        q_pow *= q;
    }
    return sum;
}

double geometric_power_moment_closed_form(int nu, double q)
{
    if (!(q > 0.0) || !(q < 1.0))
        throw std::invalid_argument("q must lie in (0, 1)");
    const double r = 1.0 - q;
    switch (nu) {
    case 0: return 1.0;
    case 1: return 1.0 / r;
    case 2: return (1.0 + q) / (r * r);
    case 3: return (1.0 + 4.0 * q + q * q) / (r * r * r);
    default:
        throw std::invalid_argument("closed form available for nu in {0,1,2,3} only");
    }
}

Normalizers normalizers(double nu, double eta)
{
    if (!(nu > 0.0))
        throw std::invalid_argument("nu must be positive");
    if (!(eta > 0.0))
        throw std::invalid_argument("eta must be positive");
    const double q0s = idle_prob_optimal();
    const double qcs = collision_prob_optimal();
    return {eta / (q0s * geometric_power_moment(nu, q0s)),
            eta / (qcs * geometric_power_moment(nu, qcs))};
}

double kelly_drift(double rho, const KellyParams& params)
{
    const auto p = outcome_probabilities(rho);
    return (params.a0 - params.ac) * p.q0 + (params.a1 - params.ac) * p.q1 + params.ac;
}

double fasa_drift(double rho, double nu, double eta)
{
    const auto [h0, hc] = normalizers(nu, eta);
    const auto p = outcome_probabilities(rho);
    return -p.q0 * (1.0 + h0 * geometric_power_moment(nu, p.q0)) +
           p.qc * (kCollisionStep + hc * geometric_power_moment(nu, p.qc));
}

double fasa_drift_nu2_closed_form(double rho, double eta)
{
    if (!(rho > 0.0))
        throw std::invalid_argument("offered load rho must be positive");
    const double e = std::numbers::e;
    const double exp_rho = std::exp(rho);
    // baseline drift of the fixed-step scheme (-1, 0, 1/(e-2)); equals
    // kelly_drift with those steps
    const double delta0 = kelly_drift(rho, KellyParams::baseline());
    const double idle_part =
        -(e - 1.0) * (e - 1.0) * (exp_rho + 1.0) /
        ((e + 1.0) * (exp_rho - 1.0) * (exp_rho - 1.0));
    const double coll_part =
        2.0 * (exp_rho - rho - 1.0) * (2.0 * exp_rho - rho - 1.0) /
        ((e - 2.0) * (e - 1.0) * (rho + 1.0) * (rho + 1.0));
    return delta0 + eta * (idle_part + coll_part);
}

std::vector<DriftPoint> drift_curve(std::span<const double> rho_grid,
                                    const DriftScheme& scheme)
{
    if (rho_grid.empty())
        throw std::invalid_argument("drift_curve requires a nonempty grid");
    std::vector<DriftPoint> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        const double delta = std::visit(
            [rho](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, KellyScheme>)
                    return kelly_drift(rho, s.params);
                else
                    return fasa_drift(rho, s.nu, s.eta);
            },
            scheme);
        out.push_back({rho, delta});
    }
    return out;
}

std::vector<double> make_grid(double min, double max, double step)
{
    if (!(step > 0.0) || !(min < max))
        throw std::invalid_argument("grid requires min < max and step > 0");
    std::vector<double> grid;
    const auto count = static_cast<std::int64_t>(std::floor((max - min) / step + 0.5));
    grid.reserve(static_cast<std::size_t>(count) + 1);
    for (std::int64_t k = 0;; ++k) {
        const double x = min + static_cast<double>(k) * step;
        if (x > max + step * 0.5)
            break;
        grid.push_back(x);
    }
    return grid;
}

double fasa_idle_drift_magnitude(double rho, double nu, double eta)
{
    const auto [h0, hc] = normalizers(nu, eta);
    (void)hc;
    const auto p = outcome_probabilities(rho);
    return p.q0 * (1.0 + h0 * geometric_power_moment(nu, p.q0));
}

double fasa_collision_drift_magnitude(double rho, double nu, double eta)
{
    const auto [h0, hc] = normalizers(nu, eta);
    (void)h0;
    const auto p = outcome_probabilities(rho);
    return p.qc * (kCollisionStep + hc * geometric_power_moment(nu, p.qc));
}

namespace {

template <typename F>
CheckResult check_monotone(const std::string& name, std::span<const double> grid,
                           F&& f, bool increasing)
{
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        const bool ok = increasing ? cur > prev : cur < prev;
        if (!ok)
            return {name, false,
                    "violated at " + format_point(grid[i - 1], prev) + " -> " +
                        format_point(grid[i], cur)};
        prev = cur;
    }
    return {name, true, ""};
}

} // namespace

Proposition1Report verify_proposition1(double nu, double eta,
                                       std::span<const double> rho_grid)
{
    if (rho_grid.size() < 2)
        throw std::invalid_argument("rho grid must hold at least two points");
    for (std::size_t i = 1; i < rho_grid.size(); ++i)
        if (!(rho_grid[i] > rho_grid[i - 1]))
            throw std::invalid_argument("rho grid must be strictly increasing");
    if (rho_grid.front() > 0.05 || rho_grid.back() < 10.0)
        throw std::invalid_argument("rho grid must span at least [0.05, 10]");

    Proposition1Report report;
    report.nu = nu;
    report.eta = eta;

    report.checks.push_back(check_monotone(
        "drift strictly increasing", rho_grid,
        [&](double rho) { return fasa_drift(rho, nu, eta); }, true));

    {
        // grid points within an ulp or two of 1.0 sit on the zero crossing,
        // where the sign is pure rounding noise
        CheckResult signs{"drift sign correct around rho = 1", true, ""};
        for (double rho : rho_grid) {
            const double d = fasa_drift(rho, nu, eta);
            if ((rho < 1.0 - 1e-12 && !(d < 0.0)) ||
                (rho > 1.0 + 1e-12 && !(d > 0.0))) {
                signs.pass = false;
                signs.detail = "violated at " + format_point(rho, d);
                break;
            }
        }
        report.checks.push_back(signs);
    }

    report.checks.push_back(check_monotone(
        "g0 strictly decreasing", rho_grid,
        [&](double rho) { return fasa_idle_drift_magnitude(rho, nu, eta); }, false));
    report.checks.push_back(check_monotone(
        "gc strictly increasing", rho_grid,
        [&](double rho) { return fasa_collision_drift_magnitude(rho, nu, eta); }, true));

    {
        const double expected = std::exp(-1.0) + eta;
        const double g0_1 = fasa_idle_drift_magnitude(1.0, nu, eta);
        const double gc_1 = fasa_collision_drift_magnitude(1.0, nu, eta);
        const bool ok = std::abs(g0_1 - expected) < 1e-9 && std::abs(gc_1 - expected) < 1e-9;
        report.checks.push_back(
            {"g0(1) = gc(1) = e^-1 + eta", ok,
             ok ? "" : "g0(1) = " + std::to_string(g0_1) + ", gc(1) = " + std::to_string(gc_1)});
    }

    {
        const auto q_grid = make_grid(0.01, 0.95, 0.01);
        report.checks.push_back(check_monotone(
            "M(nu, q) increasing in q", std::span<const double>(q_grid),
            [&](double q) { return geometric_power_moment(nu, q); }, true));
    }

    report.pass = true;
    for (const auto& c : report.checks)
        report.pass = report.pass && c.pass;
    return report;
}

} // namespace aloha
