#include "aloha/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aloha/drift.hpp"

namespace aloha {

void KellyParams::check() const
{
    if (!(a0 < 0.0 && 0.0 < ac))
        std::fprintf(stderr,
                     "warning: kelly steps (a0=%g, ac=%g) do not satisfy a0 < 0 < ac; "
                     "configuration is not stabilizing\n",
                     a0, ac);
}

FasaParams FasaParams::make(double nu, double eta)
{
    if (!(nu > 0.0))
        throw std::invalid_argument("fasa nu must be positive");
    if (!(eta >= 0.0))
        throw std::invalid_argument("fasa eta must be nonnegative");
    if (eta == 0.0) // degenerates to the fixed-step baseline
        return {nu, 0.0, 0.0, 0.0};
    const auto [h0, hc] = normalizers(nu, eta);
    return {nu, eta, h0, hc};
}

bool FasaParams::consistent() const
{
    if (!(nu > 0.0) || !(eta >= 0.0))
        return false;
    if (eta == 0.0)
        return h0 == 0.0 && hc == 0.0;
    const auto [h0_ref, hc_ref] = normalizers(nu, eta);
    return std::abs(h0 - h0_ref) <= 1e-9 * h0_ref &&
           std::abs(hc - hc_ref) <= 1e-9 * hc_ref;
}

void QPlusParams::validate() const
{
    if (!(zeta0 > 1.0) || !(zetac > 1.0))
        throw std::invalid_argument("qplus factors zeta0 and zetac must exceed 1");
}

void PbAlohaParams::validate() const
{
    if (!(lambda_hat >= 0.0))
        throw std::invalid_argument("pb-aloha lambda_hat must be nonnegative");
}

EstimatorState fasa_update(const EstimatorState& state, const FasaParams& params,
                           SlotOutcome z)
{
    EstimatorState next = state;
    switch (z) {
    case SlotOutcome::Idle:
        next.estimate = std::max(
            1.0, state.estimate - 1.0 -
                     params.h0 * std::pow(static_cast<double>(state.idle_run), params.nu));
        break;
    case SlotOutcome::Success:
        break;
    case SlotOutcome::Collision:
        next.estimate =
            state.estimate + kCollisionStep +
            params.hc * std::pow(static_cast<double>(state.collision_run), params.nu);
        break;
    }
    return next;
}

EstimatorState kelly_update(const EstimatorState& state, const KellyParams& params,
                            SlotOutcome z)
{
    double step = 0.0;
    switch (z) {
    case SlotOutcome::Idle: step = params.a0; break;
    case SlotOutcome::Success: step = params.a1; break;
    case SlotOutcome::Collision: step = params.ac; break;
    }
    EstimatorState next = state;
    next.estimate = std::max(1.0, state.estimate + step);
    return next;
}

EstimatorState pb_aloha_update(const EstimatorState& state, const PbAlohaParams& params,
                               SlotOutcome z)
{
    EstimatorState next = state;
    if (z == SlotOutcome::Collision)
        next.estimate = state.estimate + kCollisionStep + params.lambda_hat;
    else
        next.estimate = std::max(params.lambda_hat, state.estimate - 1.0) + params.lambda_hat;
    next.estimate = std::max(1.0, next.estimate);
    return next;
}

EstimatorState qplus_update(const EstimatorState& state, const QPlusParams& params,
                            SlotOutcome z)
{
    EstimatorState next = state;
    switch (z) {
    case SlotOutcome::Idle:
        next.estimate = std::max(1.0, state.estimate / params.zeta0);
        break;
    case SlotOutcome::Success:
        break;
    case SlotOutcome::Collision:
        next.estimate = std::max(1.0, params.zetac * state.estimate);
        break;
    }
    return next;
}

namespace {

// Estimators share the same shape: hold params + state, commit the outcome
// to the run counters, then apply the update rule.
template <typename Params, EstimatorState (*Update)(const EstimatorState&, const Params&, SlotOutcome)>
class RuleEstimator final : public BacklogEstimator {
public:
    explicit RuleEstimator(const Params& params) : params_(params) {}

    void observe(SlotOutcome z) override
    {
        advance_run_counters(state_, z);
        state_ = Update(state_, params_, z);
    }

    const EstimatorState& state() const override { return state_; }

    std::unique_ptr<BacklogEstimator> clone() const override
    {
        return std::make_unique<RuleEstimator>(*this);
    }

private:
    Params params_;
    EstimatorState state_;
};

using KellyEstimator = RuleEstimator<KellyParams, kelly_update>;
using FasaEstimator = RuleEstimator<FasaParams, fasa_update>;
using PbAlohaEstimator = RuleEstimator<PbAlohaParams, pb_aloha_update>;
using QPlusEstimator = RuleEstimator<QPlusParams, qplus_update>;

double take(const std::map<std::string, double>& params, const std::string& key,
            double fallback)
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown_keys(const SchemeSpec& spec,
                         std::initializer_list<const char*> known)
{
    for (const auto& [key, value] : spec.params) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            throw std::invalid_argument("scheme '" + spec.name +
                                        "' does not take parameter '" + key + "'");
    }
}

} // namespace

std::unique_ptr<BacklogEstimator> make_kelly(const KellyParams& params)
{
    params.check();
    return std::make_unique<KellyEstimator>(params);
}

std::unique_ptr<BacklogEstimator> make_fasa(const FasaParams& params)
{
    if (!params.consistent())
        throw std::invalid_argument(
            "fasa normalizers h0/hc are inconsistent with (nu, eta); construct via FasaParams::make");
    return std::make_unique<FasaEstimator>(params);
}

std::unique_ptr<BacklogEstimator> make_pb_aloha(const PbAlohaParams& params)
{
    params.validate();
    return std::make_unique<PbAlohaEstimator>(params);
}

std::unique_ptr<BacklogEstimator> make_qplus(const QPlusParams& params)
{
    params.validate();
    return std::make_unique<QPlusEstimator>(params);
}

namespace {

struct IdealTag {};
using ParsedScheme =
    std::variant<IdealTag, KellyParams, PbAlohaParams, QPlusParams, FasaParams>;

// Resolves names and parameter maps into typed params; throws on anything
// malformed but emits no warnings (those belong to construction).
ParsedScheme parse_scheme(const SchemeSpec& spec)
{
    if (spec.name == "ideal") {
        reject_unknown_keys(spec, {});
        return IdealTag{};
    }
    if (spec.name == "kelly") {
        reject_unknown_keys(spec, {"a0", "a1", "ac"});
        const KellyParams defaults = KellyParams::baseline();
        return KellyParams{take(spec.params, "a0", defaults.a0),
                           take(spec.params, "a1", defaults.a1),
                           take(spec.params, "ac", defaults.ac)};
    }
    if (spec.name == "pb-aloha") {
        reject_unknown_keys(spec, {"lambda_hat"});
        const PbAlohaParams params{
            take(spec.params, "lambda_hat", PbAlohaParams{}.lambda_hat)};
        params.validate();
        return params;
    }
    if (spec.name == "qplus") {
        reject_unknown_keys(spec, {"zeta0", "zetac"});
        const QPlusParams defaults{};
        const QPlusParams params{take(spec.params, "zeta0", defaults.zeta0),
                                 take(spec.params, "zetac", defaults.zetac)};
        params.validate();
        return params;
    }
    if (spec.name == "fasa") {
        reject_unknown_keys(spec, {"nu", "eta"});
        const FasaParams defaults{};
        return FasaParams::make(take(spec.params, "nu", defaults.nu),
                                take(spec.params, "eta", defaults.eta));
    }
    throw std::invalid_argument("unknown scheme '" + spec.name +
                                "'; valid names: ideal, kelly, pb-aloha, qplus, fasa");
}

} // namespace

void validate_scheme(const SchemeSpec& spec)
{
    (void)parse_scheme(spec);
}

Controller Controller::make(const SchemeSpec& spec)
{
    Controller c;
    std::visit(
        [&c](const auto& params) {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, IdealTag>)
                c.impl_ = IdealPolicy{};
            else if constexpr (std::is_same_v<T, KellyParams>)
                c.impl_ = make_kelly(params);
            else if constexpr (std::is_same_v<T, PbAlohaParams>)
                c.impl_ = make_pb_aloha(params);
            else if constexpr (std::is_same_v<T, QPlusParams>)
                c.impl_ = make_qplus(params);
            else
                c.impl_ = make_fasa(params);
        },
        parse_scheme(spec));
    return c;
}

ControllerDecision Controller::decide(std::int64_t true_backlog)
{
    if (auto* genie = std::get_if<IdealPolicy>(&impl_)) {
        genie->set_backlog(true_backlog);
        return genie->decision();
    }
    return std::get<std::unique_ptr<BacklogEstimator>>(impl_)->decision();
}

void Controller::observe(SlotOutcome z)
{
    if (auto* est = std::get_if<std::unique_ptr<BacklogEstimator>>(&impl_))
        (*est)->observe(z);
}

double Controller::estimate() const
{
    if (const auto* genie = std::get_if<IdealPolicy>(&impl_))
        return genie->estimate();
    return std::get<std::unique_ptr<BacklogEstimator>>(impl_)->estimate();
}

bool Controller::privileged() const
{
    return std::holds_alternative<IdealPolicy>(impl_);
}

} // namespace aloha
