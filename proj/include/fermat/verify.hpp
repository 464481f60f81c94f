#pragma once

// Numerical certification of the functional equations and the intermediate
// identities: sampled relative residuals with reproducible statistics.
//
// Sampling is uniform in area on an annulus, driven by the deterministic
// counter generator in rng.hpp, so a report is a pure function of
// (inputs, plan). Samples that hit pole-overflow are redrawn; the redraw
// budget is 100x the requested count.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermat/expr.hpp"
#include "fermat/families.hpp"
#include "fermat/rng.hpp"

namespace fermat {

struct SamplePlan {
    double r_min = 0.5;
    double r_max = 3.0;
    int count = 500;
    std::uint64_t seed = 1;
    double pole_guard = kDefaultPoleGuard;
};

inline void validate(const SamplePlan& plan) {
    if (!(plan.r_min < plan.r_max) || plan.r_min < 0.0) {
        throw std::invalid_argument("SamplePlan: need 0 <= rMin < rMax");
    }
    if (plan.count < 1) throw std::invalid_argument("SamplePlan: count must be >= 1");
    if (!(plan.pole_guard > 0.0)) throw std::invalid_argument("SamplePlan: poleGuard must be > 0");
}

/// Raised when the sampler cannot avoid singularities within its budget.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResidualReport {
    std::string equation;
    int samples = 0;
    double max_rel = 0.0;
    double mean_rel = 0.0;
    cplx worst_point{};
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

// Summation by halving; the result does not depend on how callers would
// partition the work.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Draw plan.count samples, evaluating `residual_at`; nullopt redraws.
inline ResidualReport run_plan(std::string equation, const SamplePlan& plan, double tolerance,
                               const std::function<std::optional<double>(cplx)>& residual_at) {
    validate(plan);
    const CounterRng rng{plan.seed};
    const std::uint64_t budget = 100ull * std::uint64_t(plan.count);
    std::vector<double> residuals;
    residuals.reserve(plan.count);
    ResidualReport rep;
    rep.equation = std::move(equation);
    rep.tolerance = tolerance;
    std::uint64_t attempt = 0;
    while (residuals.size() < std::size_t(plan.count)) {
        if (attempt >= budget) {
            throw SamplingError("sampler exceeded 100x count attempts dodging poles (" +
                                rep.equation + ")");
        }
        const cplx z = rng.annulus(attempt, plan.r_min, plan.r_max);
        ++attempt;
        const auto rel = residual_at(z);
        if (!rel || !std::isfinite(*rel)) continue;
        residuals.push_back(*rel);
        if (residuals.size() == 1 || *rel > rep.max_rel) {
            rep.max_rel = *rel;
            rep.worst_point = z;
        }
    }
    rep.samples = int(residuals.size());
    rep.mean_rel = pairwise_sum(residuals) / double(residuals.size());
    rep.pass = rep.max_rel <= tolerance;
    return rep;
}

inline double rel_denominator(std::initializer_list<double> magnitudes) {
    double d = 1.0;
    for (double m : magnitudes) d = std::max(d, m);
    return d;
}

}  // namespace detail

/// Residual of f^n + (f')^n = e^{alpha z + beta}, relative to
/// max(|f|^n, |f'|^n, |e^{alpha z+beta}|, 1).
inline ResidualReport residual_ode(const Expr& f, int n, cplx alpha, cplx beta,
                                   const SamplePlan& plan, double tolerance = 1e-9) {
    if (n < 1) throw std::invalid_argument("residual_ode: n must be >= 1");
    const Expr fp = differentiate(f);
    const EvalOptions opt{plan.pole_guard};
    return detail::run_plan(
        "ode(n=" + std::to_string(n) + ")", plan, tolerance,
        [&, opt](cplx z) -> std::optional<double> {
            const auto vf = eval(f, z, opt);
            if (!vf) return std::nullopt;
            const auto vp = eval(fp, z, opt);
            if (!vp) return std::nullopt;
            const cplx fn = detail::pow_int_pos(*vf, n);
            const cplx pn = detail::pow_int_pos(*vp, n);
            const cplx rhs = std::exp(alpha * z + beta);
            if (!detail::finite(fn) || !detail::finite(pn) || !detail::finite(rhs)) {
                return std::nullopt;
            }
            return std::abs(fn + pn - rhs) /
                   detail::rel_denominator({std::abs(fn), std::abs(pn), std::abs(rhs)});
        });
}

/// Residual of f^n(z) + f^n(z+c) = e^{alpha z + beta}; the shifted value is
/// evaluated through a Shift node.
inline ResidualReport residual_difference(const Expr& f, int n, cplx alpha, cplx beta, cplx c,
                                          const SamplePlan& plan, double tolerance = 1e-9) {
    if (n < 1) throw std::invalid_argument("residual_difference: n must be >= 1");
    if (c == cplx(0.0)) throw std::invalid_argument("residual_difference: c must be nonzero");
    const Expr fc = Expr::shift(f, c);
    const EvalOptions opt{plan.pole_guard};
    return detail::run_plan(
        "difference(n=" + std::to_string(n) + ")", plan, tolerance,
        [&, opt](cplx z) -> std::optional<double> {
            const auto vf = eval(f, z, opt);
            if (!vf) return std::nullopt;
            const auto vc = eval(fc, z, opt);
            if (!vc) return std::nullopt;
            const cplx fn = detail::pow_int_pos(*vf, n);
            const cplx cn = detail::pow_int_pos(*vc, n);
            const cplx rhs = std::exp(alpha * z + beta);
            if (!detail::finite(fn) || !detail::finite(cn) || !detail::finite(rhs)) {
                return std::nullopt;
            }
            return std::abs(fn + cn - rhs) /
                   detail::rel_denominator({std::abs(fn), std::abs(cn), std::abs(rhs)});
        });
}

/// Residual of f^n + g^n = 1.
inline ResidualReport residual_unit(const Expr& f, const Expr& g, int n, const SamplePlan& plan,
                                    double tolerance = 1e-9) {
    if (n < 1) throw std::invalid_argument("residual_unit: n must be >= 1");
    const EvalOptions opt{plan.pole_guard};
    return detail::run_plan(
        "unit(n=" + std::to_string(n) + ")", plan, tolerance,
        [&, opt](cplx z) -> std::optional<double> {
            const auto vf = eval(f, z, opt);
            if (!vf) return std::nullopt;
            const auto vg = eval(g, z, opt);
            if (!vg) return std::nullopt;
            const cplx fn = detail::pow_int_pos(*vf, n);
            const cplx gn = detail::pow_int_pos(*vg, n);
            if (!detail::finite(fn) || !detail::finite(gn)) return std::nullopt;
            return std::abs(fn + gn - 1.0) /
                   detail::rel_denominator({std::abs(fn), std::abs(gn)});
        });
}

/// Dispatch a generated family to its matched residual check.
inline ResidualReport residual_for(const GeneratedFamily& fam, const SamplePlan& plan,
                                   double tolerance = 1e-9) {
    switch (fam.mode.kind) {
        case EquationMode::Kind::Ode:
            return residual_ode(fam.f, fam.mode.n, fam.spec.alpha, fam.spec.beta, plan, tolerance);
        case EquationMode::Kind::Difference:
            return residual_difference(fam.f, fam.mode.n, fam.spec.alpha, fam.spec.beta,
                                       fam.mode.c, plan, tolerance);
        case EquationMode::Kind::Unit:
            if (!fam.partner) throw std::invalid_argument("unit family without partner");
            return residual_unit(fam.f, *fam.partner, fam.mode.n, plan, tolerance);
    }
    throw std::logic_error("residual_for: bad mode");
}

/// Shift-consistency identity: with s = sqrt(3)/3,
///   eta (1 - s wp'(h(z))) / wp(h(z))
///     = e^{alpha c/3} (1 + s wp'(h(z+c))) / wp(h(z+c)).
/// The cube root e^{alpha c/3} is the principal value times the unity root
/// selected by root_index (0, 1, 2); the selection is recorded in the
/// report's equation tag.
inline ResidualReport check_eq6(const Expr& h, cplx c, cplx eta, cplx alpha,
                                const SamplePlan& plan, double tolerance = 1e-8,
                                int root_index = 0) {
    if (c == cplx(0.0)) throw std::invalid_argument("check_eq6: c must be nonzero");
    detail::require_cube_root_of_unity(eta);
    if (root_index < 0 || root_index > 2) {
        throw std::invalid_argument("check_eq6: root_index must be 0, 1 or 2");
    }
    const cplx root = std::exp(alpha * c / 3.0) * std::polar(1.0, 2.0 * M_PI * root_index / 3.0);
    const Expr hc = Expr::shift(h, c);
    const double s = kUnitSqrt3Over3;
    const Expr lhs = Expr::mul(
        Expr::constant(eta),
        Expr::mul(Expr::add(Expr::constant(1.0),
                            Expr::mul(Expr::constant(-s), Expr::wp_prime(h))),
                  Expr::pow(Expr::wp(h), -1)));
    const Expr rhs = Expr::mul(
        Expr::constant(root),
        Expr::mul(Expr::add(Expr::constant(1.0),
                            Expr::mul(Expr::constant(s), Expr::wp_prime(hc))),
                  Expr::pow(Expr::wp(hc), -1)));
    const EvalOptions opt{plan.pole_guard};
    return detail::run_plan(
        "eq6(rootIndex=" + std::to_string(root_index) + ")", plan, tolerance,
        [&, opt](cplx z) -> std::optional<double> {
            const auto a = eval(lhs, z, opt);
            if (!a) return std::nullopt;
            const auto b = eval(rhs, z, opt);
            if (!b) return std::nullopt;
            return std::abs(*a - *b) / detail::rel_denominator({std::abs(*a), std::abs(*b)});
        });
}

/// Cubic rearrangement identity for f built from h by the first Eq-5 form:
///   3 f^2 wp^2(h) / e^{2(alpha z+beta)/3} - 3 f wp(h) / e^{(alpha z+beta)/3}
///     + 1 = wp^3(h).
inline ResidualReport check_eq7(const Expr& f, const Expr& h, cplx alpha, cplx beta,
                                const SamplePlan& plan, double tolerance = 1e-8) {
    const Expr wph = Expr::wp(h);
    const EvalOptions opt{plan.pole_guard};
    return detail::run_plan(
        "eq7", plan, tolerance,
        [&, opt](cplx z) -> std::optional<double> {
            const auto vf = eval(f, z, opt);
            if (!vf) return std::nullopt;
            const auto vw = eval(wph, z, opt);
            if (!vw) return std::nullopt;
            const cplx e3 = std::exp((alpha * z + beta) / 3.0);
            const cplx t1 = 3.0 * (*vf) * (*vf) * (*vw) * (*vw) / (e3 * e3);
            const cplx t2 = 3.0 * (*vf) * (*vw) / e3;
            const cplx w3 = (*vw) * (*vw) * (*vw);
            if (!detail::finite(t1) || !detail::finite(t2) || !detail::finite(w3)) {
                return std::nullopt;
            }
            return std::abs(t1 - t2 + 1.0 - w3) /
                   detail::rel_denominator({std::abs(t1), std::abs(t2), std::abs(w3)});
        });
}

}  // namespace fermat
