// drift.hpp -- analytic drift machinery: geometric power moments, the FASA
// normalizers, fixed-step and FASA drift functions, and numerical
// verification of the stability proposition.
#ifndef ALOHA_DRIFT_HPP
#define ALOHA_DRIFT_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aloha/estimators.hpp"

namespace aloha {

/// Per-slot outcome probabilities at offered load rho:
/// q0 = e^-rho, q1 = rho e^-rho, qc = 1 - q0 - q1.
struct OutcomeProbabilities {
    double q0;
    double q1;
    double qc;
};

OutcomeProbabilities outcome_probabilities(double rho);

/// Idle/collision probabilities at the throughput-optimal load rho = 1:
/// q0* = e^-1, qc* = 1 - 2e^-1.
double idle_prob_optimal();
double collision_prob_optimal();

/// M(nu, q) = sum_{k>=1} k^nu q^(k-1) (1-q), the nu-th power moment of a
/// geometric variable with success probability 1-q. Series summation with a
/// geometric tail bound below 1e-12 of the partial sum, capped at 1e6
/// terms; q outside (0, 1-1e-6] is rejected.
double geometric_power_moment(double nu, double q);

/// Closed forms for integer nu in {0,1,2,3}; cross-checked against the
/// series path in tests.
double geometric_power_moment_closed_form(int nu, double q);

struct Normalizers {
    double h0;
    double hc;
};

/// h0 = eta/(q0* M(nu,q0*)), hc = eta/(qc* M(nu,qc*)); the choice that
/// makes the approximate FASA drift vanish at rho = 1.
Normalizers normalizers(double nu, double eta);

/// Asymptotic drift of the fixed step-size scheme:
/// (a0-ac) e^-rho + (a1-ac) rho e^-rho + ac.
double kelly_drift(double rho, const KellyParams& params);

/// Approximate FASA drift,
/// -q0 [1 + h0 M(nu,q0)] + qc [1/(e-2) + hc M(nu,qc)].
double fasa_drift(double rho, double nu, double eta);

/// nu = 2 drift in closed form. The baseline term is the fixed-step drift
/// with steps (-1, 0, 1/(e-2)); the eta bracket is the exact closed form of
/// the second-moment terms.
double fasa_drift_nu2_closed_form(double rho, double eta);

// Magnitudes of the idle and collision drift contributions,
// g0 = q0 [1 + h0 M(nu,q0)] and gc = qc [1/(e-2) + hc M(nu,qc)], so that
// fasa_drift = gc - g0 and g0(1) = gc(1) = e^-1 + eta.
double fasa_idle_drift_magnitude(double rho, double nu, double eta);
double fasa_collision_drift_magnitude(double rho, double nu, double eta);

struct DriftPoint {
    double rho;
    double delta;
};

struct KellyScheme {
    KellyParams params;
};
struct FasaScheme {
    double nu;
    double eta;
};
using DriftScheme = std::variant<KellyScheme, FasaScheme>;

/// Pointwise drift over a grid of offered loads; grid must be nonempty with
/// every rho > 0.
std::vector<DriftPoint> drift_curve(std::span<const double> rho_grid,
                                    const DriftScheme& scheme);

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail; // first violating point, or the checked identity
};

struct Proposition1Report {
    double nu = 0.0;
    double eta = 0.0;
    bool pass = false;
    std::vector<CheckResult> checks;
};

/// Numerically verifies, on a strictly increasing grid spanning at least
/// [0.05, 10]: the FASA drift is strictly increasing and sign-correct
/// around rho = 1; the g0/gc decomposition is monotone with
/// g0(1) = gc(1) = e^-1 + eta; and M(nu, q) increases in q on [0.01, 0.95].
Proposition1Report verify_proposition1(double nu, double eta,
                                       std::span<const double> rho_grid);

/// Grid helper: min, min+step, ... up to and including max (within half a
/// step). Values are computed as min + k*step, not accumulated.
std::vector<double> make_grid(double min, double max, double step);

} // namespace aloha

#endif // ALOHA_DRIFT_HPP
