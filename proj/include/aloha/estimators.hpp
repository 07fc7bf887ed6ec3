// estimators.hpp -- the transmission-probability controllers: ideal genie,
// Kelly fixed-step family, PB-ALOHA, Q+-Algorithm, and FASA.
#ifndef ALOHA_ESTIMATORS_HPP
#define ALOHA_ESTIMATORS_HPP

#include <map>
#include <memory>
#include <string>
#include <variant>

#include "aloha/core.hpp"

namespace aloha {

/// Fixed additive steps applied on idle / success / collision.
struct KellyParams {
    double a0 = -1.0;
    double a1 = 0.0;
    double ac = kCollisionStep;

    /// Steps of the classic stabilized baseline (-1, 0, 1/(e-2)).
    static KellyParams baseline() { return {}; }
    /// Warns (stderr) when a0 < 0 < ac does not hold; exploratory
    /// configurations stay permitted.
    void check() const;
};

/// FASA speed parameters plus the normalizers h0(nu), h_c(nu) that pin the
/// drift zero to offered load 1. Construct via make() so the normalizers
/// stay consistent with the drift module.
struct FasaParams {
    double nu = 2.0;
    double eta = 1.0;
    double h0 = 0.0;
    double hc = 0.0;

    /// Computes h0 = eta/(q0* M(nu,q0*)), hc = eta/(qc* M(nu,qc*)).
    static FasaParams make(double nu, double eta);
    /// True when h0/hc match make(nu, eta) to relative 1e-9.
    bool consistent() const;
};

/// Multiplicative scheme factors: shrink by zeta0 on idle, grow by zetac on
/// collision. Both must exceed 1.
struct QPlusParams {
    double zeta0 = 1.1892071150027210667; // 2^0.25
    double zetac = 1.2745606273192621437; // 2^0.35

    void validate() const;
};

/// Pseudo-Bayesian estimator with assumed per-slot arrival rate lambda_hat.
struct PbAlohaParams {
    double lambda_hat = 1.0 / std::numbers::e;

    void validate() const;
};

// Single-slot update rules. Input state must satisfy its invariants; for
// fasa_update the run counters must already include the slot being
// processed (advance_run_counters commits the outcome first), so the power
// step reads K as the current run length.
EstimatorState fasa_update(const EstimatorState& state, const FasaParams& params,
                           SlotOutcome z);
EstimatorState kelly_update(const EstimatorState& state, const KellyParams& params,
                            SlotOutcome z);
EstimatorState pb_aloha_update(const EstimatorState& state, const PbAlohaParams& params,
                               SlotOutcome z);
EstimatorState qplus_update(const EstimatorState& state, const QPlusParams& params,
                            SlotOutcome z);

/// Observation-driven estimator: sees the outcome sequence and nothing else.
class BacklogEstimator {
public:
    virtual ~BacklogEstimator() = default;
    virtual void observe(SlotOutcome z) = 0;
    virtual const EstimatorState& state() const = 0;
    virtual std::unique_ptr<BacklogEstimator> clone() const = 0;

    double estimate() const { return state().estimate; }
    ControllerDecision decision() const { return decision_from_estimate(estimate()); }
};

std::unique_ptr<BacklogEstimator> make_kelly(const KellyParams& params);
std::unique_ptr<BacklogEstimator> make_fasa(const FasaParams& params);
std::unique_ptr<BacklogEstimator> make_pb_aloha(const PbAlohaParams& params);
std::unique_ptr<BacklogEstimator> make_qplus(const QPlusParams& params);

/// Perfect-knowledge benchmark. Privileged: it is told the true backlog and
/// ignores the outcome feed, so it lives outside the BacklogEstimator
/// contract.
class IdealPolicy {
public:
    void set_backlog(std::int64_t n) { backlog_ = n; }
    double estimate() const { return static_cast<double>(std::max<std::int64_t>(1, backlog_)); }
    ControllerDecision decision() const { return decision_from_estimate(estimate()); }

private:
    std::int64_t backlog_ = 0;
};

/// Scheme addressable by name with a flat parameter map. Names: "ideal",
/// "kelly" (a0, a1, ac), "pb-aloha" (lambda_hat), "qplus" (zeta0, zetac),
/// "fasa" (nu, eta). Missing keys take the defaults above; unknown keys or
/// names are rejected.
struct SchemeSpec {
    std::string name = "ideal";
    std::map<std::string, double> params;
};

/// Rejects unknown scheme names, unknown parameter keys, and out-of-range
/// parameter values without constructing a controller.
void validate_scheme(const SchemeSpec& spec);

/// Uniform front end the engine drives: one decision pulled per slot, one
/// outcome pushed per slot. Only the ideal genie consumes true_backlog.
class Controller {
public:
    static Controller make(const SchemeSpec& spec);

    ControllerDecision decide(std::int64_t true_backlog);
    void observe(SlotOutcome z);
    double estimate() const;
    bool privileged() const;

private:
    Controller() = default;
    std::variant<IdealPolicy, std::unique_ptr<BacklogEstimator>> impl_;
};

} // namespace aloha

#endif // ALOHA_ESTIMATORS_HPP
