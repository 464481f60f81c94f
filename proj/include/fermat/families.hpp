#pragma once

// Constructors for every explicit solution family of the equations
//
//   f^n(z) + (f')^n(z) = e^{alpha z + beta}      (differential form)
//   f^n(z) + f^n(z+c)  = e^{alpha z + beta}      (difference form, c != 0)
//   f^n(z) + g^n(z)    = 1                       (unit form)
//
// together with admissibility of their scalar parameters. Constructors
// validate the kind-specific constraints and return expression trees; the
// residual checks in verify.hpp certify the equations numerically.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fermat/expr.hpp"
#include "fermat/rng.hpp"

namespace fermat {

enum class FamilyKind {
    Prop1A,          // n=2 unit: Moebius pair in a free function omega
    Prop1B,          // n=3 unit: wp-parametrized pair in h, cube root eta
    Thm2A,           // n=1 ode, alpha != -1
    Thm2ADegenerate,  // n=1 ode, alpha = -1 branch
    Thm2BTrig,       // n=2 ode, alpha = 0 trigonometric branch
    Thm2ScaledExp,   // ode, f = d e^{(alpha z+beta)/n}, d^n(1+(alpha/n)^n)=1
    DiffTrivial,     // difference, f = d e^{(alpha z+beta)/n}, d^n(1+e^{alpha c})=1
    Eq5Pair,         // n=3 difference parametrization through wp(h)
    Example4,        // Eq5 with h = e^z, c = pi i
    Example5a,       // n=2 difference, e^{(alpha z+beta)/2} sin(z), c = pi/2
    Example5b,       // n=2 difference, e^{(alpha z+beta)/2} sin(e^{4iz}+z)
    Example6a,       // n=1 difference, e^z + e^{alpha z+beta}/2, c = i pi
    Example6b,       // n=1 difference, e^{e^{2z}+z} + e^{alpha z+beta}/2
    AntiPeriodicN1,  // n=1 difference, delta(z+c) = -delta(z) carrier
};

enum class AntiPeriodicForm {
    ScaledExp,  // f = delta + d e^{alpha z + beta}, d(1+e^{alpha c}) = 1
    LinearExp,  // f = delta - (z/c) e^{alpha z + beta}, e^{alpha c} = -1
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::Thm2ScaledExp;
    int n = 1;
    cplx alpha{}, beta{}, c{}, a{}, b{}, d{}, eta{1.0, 0.0};
    bool has_d = false;   // d given explicitly; otherwise picked from the admissible set
    int root_index = 0;   // which admissible root to pick when !has_d
    AntiPeriodicForm form = AntiPeriodicForm::ScaledExp;
    std::optional<Expr> h;      // Prop1A (as omega), Prop1B, Eq5Pair
    std::optional<Expr> delta;  // AntiPeriodicN1
};

/// Thrown when a family's scalar constraint has no solution (the scale
/// equation is degenerate for the given alpha / c).
class DegeneracyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Solutions d of a scale equation d^n * factor = 1. Empty + degenerate
/// when the factor vanishes; the witness describes why.
struct ScaleRoots {
    std::vector<cplx> roots;
    bool degenerate = false;
    std::string witness;
};

namespace detail {

/// All n solutions of w^n = rhs: principal root times the n-th roots of
/// unity, ordered by argument for deterministic output.
inline std::vector<cplx> nth_roots(cplx rhs, int n) {
    const double r = std::pow(std::abs(rhs), 1.0 / n);
    const double th = std::arg(rhs) / n;
    std::vector<cplx> roots;
    roots.reserve(n);
    for (int k = 0; k < n; ++k) {
        roots.push_back(std::polar(r, th + 2.0 * M_PI * k / n));
    }
    std::sort(roots.begin(), roots.end(),
              [](const cplx& x, const cplx& y) { return std::arg(x) < std::arg(y); });
    return roots;
}

inline ScaleRoots scale_roots_from_factor(cplx factor, int n, const std::string& witness) {
    ScaleRoots out;
    if (std::abs(factor) <= 1e-12) {
        out.degenerate = true;
        out.witness = witness;
        return out;
    }
    out.roots = nth_roots(1.0 / factor, n);
    return out;
}

}  // namespace detail

/// Roots of d^n (1 + (alpha/n)^n) = 1. The set is empty exactly when
/// 1 + (alpha/n)^n = 0, i.e. alpha = n e^{(2k+1) pi i / n}.
inline ScaleRoots admissible_scale_ode(int n, cplx alpha) {
    if (n < 1) throw std::invalid_argument("admissible_scale_ode: n must be >= 1");
    const cplx factor = 1.0 + detail::pow_int_pos(alpha / double(n), n);
    std::string witness;
    if (std::abs(factor) <= 1e-12) {
        const int k = int(std::lround((double(n) * std::arg(alpha / double(n)) - M_PI) / (2.0 * M_PI)));
        witness = "1 + (alpha/n)^n = 0: alpha = n*exp((2k+1)*pi*i/n) with k = " + std::to_string(k);
    }
    return detail::scale_roots_from_factor(factor, n, witness);
}

/// Roots of d^n (1 + e^{alpha c}) = 1. Empty exactly when e^{alpha c} = -1.
inline ScaleRoots admissible_scale_diff(int n, cplx alpha, cplx c) {
    if (n < 1) throw std::invalid_argument("admissible_scale_diff: n must be >= 1");
    if (c == cplx(0.0)) throw std::invalid_argument("admissible_scale_diff: c must be nonzero");
    const cplx factor = 1.0 + std::exp(alpha * c);
    return detail::scale_roots_from_factor(factor, n, "e^{alpha c} = -1: the scale equation has no solution");
}

struct EquationMode {
    enum class Kind { Ode, Difference, Unit };
    Kind kind = Kind::Ode;
    int n = 1;
    cplx c{};  // Difference only
};

struct GeneratedFamily {
    Expr f;
    std::optional<Expr> partner;  // unit partner g, or the f(z+c)-form of Eq5Pair
    EquationMode mode;
    FamilySpec spec;  // resolved parameters (d filled in, fixed c applied)
};

inline constexpr double kUnitSqrt3Over3 = 0.57735026918962576451;  // sqrt(3)/3

/// e^{alpha z + beta} as a tree.
inline Expr affine_exp(cplx alpha, cplx beta) {
    return Expr::exp(Expr::add(Expr::mul(Expr::constant(alpha), Expr::variable()),
                               Expr::constant(beta)));
}

/// First equality form: f(z) = (1 + s wp'(h)) / (2 wp(h)) * e^{(alpha z+beta)/3}.
inline Expr eq5_first_form(const Expr& h, cplx alpha, cplx beta) {
    const Expr core = Expr::mul(
        Expr::constant(0.5),
        Expr::mul(Expr::add(Expr::constant(1.0),
                            Expr::mul(Expr::constant(kUnitSqrt3Over3), Expr::wp_prime(h))),
                  Expr::pow(Expr::wp(h), -1)));
    return Expr::mul(core, affine_exp(alpha / 3.0, beta / 3.0));
}

/// Second equality form: (eta/2) (1 - s wp'(h)) / wp(h) * e^{(alpha z+beta)/3}.
inline Expr eq5_second_form(const Expr& h, cplx alpha, cplx beta, cplx eta) {
    const Expr core = Expr::mul(
        Expr::constant(eta * 0.5),
        Expr::mul(Expr::add(Expr::constant(1.0),
                            Expr::mul(Expr::constant(-kUnitSqrt3Over3), Expr::wp_prime(h))),
                  Expr::pow(Expr::wp(h), -1)));
    return Expr::mul(core, affine_exp(alpha / 3.0, beta / 3.0));
}

namespace detail {

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_cube_root_of_unity(cplx eta) {
    require(std::abs(pow_int_pos(eta, 3) - cplx(1.0)) <= 1e-9,
            "eta must be a cube root of unity");
}

inline void require_exp_alpha_c(cplx alpha, cplx c, cplx target, const char* msg) {
    require(std::abs(std::exp(alpha * c) - target) <= 1e-9, msg);
}

// delta(z+c) = -delta(z), verified statistically on paired samples.
inline void require_anti_periodic(const Expr& delta, cplx c) {
    const CounterRng rng{0xA57E11u};
    int accepted = 0;
    for (std::uint64_t attempt = 0; attempt < 20000 && accepted < 200; ++attempt) {
        const cplx z = rng.annulus(attempt, 0.5, 2.0);
        const auto v0 = eval(delta, z);
        const auto v1 = eval(delta, z + c);
        if (!v0 || !v1) continue;
        ++accepted;
        const double err = std::abs(*v1 + *v0);
        require(err <= 1e-9 * std::max(1.0, std::abs(*v0)),
                "delta is not anti-periodic with period c (sampled check failed)");
    }
    require(accepted == 200, "delta anti-periodicity check could not draw enough samples");
}

inline cplx resolve_scale(const ScaleRoots& roots, const FamilySpec& spec,
                          const char* constraint) {
    if (roots.degenerate) throw DegeneracyError(roots.witness);
    if (spec.has_d) {
        for (const cplx& r : roots.roots) {
            if (std::abs(r - spec.d) <= 1e-10 * std::max(1.0, std::abs(r))) return spec.d;
        }
        throw std::invalid_argument(std::string("d does not satisfy ") + constraint);
    }
    if (spec.root_index < 0 || spec.root_index >= int(roots.roots.size())) {
        throw std::invalid_argument("root_index out of range of the admissible set");
    }
    return roots.roots[spec.root_index];
}

}  // namespace detail

/// Solution pairs (f, g) of f^n + g^n = 1: the Moebius pair for n = 2, the
/// wp-parametrized pair for n = 3.
inline std::pair<Expr, Expr> prop1_unit_pair(int n, const Expr& h_or_omega, cplx eta = 1.0) {
    if (n == 2) {
        const Expr& w = h_or_omega;
        const Expr denom = Expr::pow(Expr::add(Expr::constant(1.0), Expr::pow(w, 2)), -1);
        Expr f = Expr::mul(Expr::mul(Expr::constant(2.0), w), denom);
        Expr g = Expr::mul(
            Expr::add(Expr::constant(1.0), Expr::mul(Expr::constant(-1.0), Expr::pow(w, 2))),
            denom);
        return {std::move(f), std::move(g)};
    }
    if (n == 3) {
        detail::require_cube_root_of_unity(eta);
        const Expr& h = h_or_omega;
        const Expr inv_wp = Expr::pow(Expr::wp(h), -1);
        Expr f = Expr::mul(
            Expr::constant(0.5),
            Expr::mul(Expr::add(Expr::constant(1.0),
                                Expr::mul(Expr::constant(kUnitSqrt3Over3), Expr::wp_prime(h))),
                      inv_wp));
        Expr g = Expr::mul(
            Expr::constant(eta * 0.5),
            Expr::mul(Expr::add(Expr::constant(1.0),
                                Expr::mul(Expr::constant(-kUnitSqrt3Over3), Expr::wp_prime(h))),
                      inv_wp));
        return {std::move(f), std::move(g)};
    }
    throw std::invalid_argument("prop1_unit_pair: n must be 2 or 3");
}

/// Build the family described by spec. Throws std::invalid_argument on
/// constraint violations and DegeneracyError when the scale equation has no
/// solution.
inline GeneratedFamily generate(const FamilySpec& spec_in) {
    using detail::require;
    FamilySpec spec = spec_in;
    const cplx i_pi = cplx(0.0, M_PI);

    switch (spec.kind) {
        case FamilyKind::Prop1A: {
            require(spec.h.has_value(), "Prop1A requires the free function (h field, used as omega)");
            auto [f, g] = prop1_unit_pair(2, *spec.h);
            return {std::move(f), std::move(g), {EquationMode::Kind::Unit, 2}, std::move(spec)};
        }
        case FamilyKind::Prop1B: {
            require(spec.h.has_value(), "Prop1B requires h");
            auto [f, g] = prop1_unit_pair(3, *spec.h, spec.eta);
            return {std::move(f), std::move(g), {EquationMode::Kind::Unit, 3}, std::move(spec)};
        }
        case FamilyKind::Thm2A: {
            spec.n = 1;
            require(std::abs(spec.alpha + 1.0) > 1e-12,
                    "Thm2A requires alpha != -1 (use Thm2A_degenerate)");
            Expr f = Expr::add(
                Expr::mul(Expr::constant(1.0 / (spec.alpha + 1.0)), affine_exp(spec.alpha, spec.beta)),
                Expr::mul(Expr::constant(spec.a), affine_exp(-1.0, 0.0)));
            return {std::move(f), std::nullopt, {EquationMode::Kind::Ode, 1}, std::move(spec)};
        }
        case FamilyKind::Thm2ADegenerate: {
            spec.n = 1;
            spec.alpha = -1.0;
            // f = z e^{-z+beta} + a e^{-z}
            Expr f = Expr::add(
                Expr::mul(Expr::variable(), affine_exp(-1.0, spec.beta)),
                Expr::mul(Expr::constant(spec.a), affine_exp(-1.0, 0.0)));
            return {std::move(f), std::nullopt, {EquationMode::Kind::Ode, 1}, std::move(spec)};
        }
        case FamilyKind::Thm2BTrig: {
            spec.n = 2;
            require(std::abs(spec.alpha) <= 1e-12, "Thm2B_trig requires alpha = 0");
            spec.alpha = 0.0;
            Expr f = Expr::mul(Expr::constant(std::exp(spec.beta / 2.0)),
                               Expr::sin(Expr::add(Expr::variable(), Expr::constant(spec.b))));
            return {std::move(f), std::nullopt, {EquationMode::Kind::Ode, 2}, std::move(spec)};
        }
        case FamilyKind::Thm2ScaledExp: {
            require(spec.n >= 1, "Thm2_scaledExp requires n >= 1");
            const ScaleRoots roots = admissible_scale_ode(spec.n, spec.alpha);
            spec.d = detail::resolve_scale(roots, spec, "d^n (1 + (alpha/n)^n) = 1");
            spec.has_d = true;
            Expr f = Expr::mul(Expr::constant(spec.d),
                               affine_exp(spec.alpha / double(spec.n), spec.beta / double(spec.n)));
            return {std::move(f), std::nullopt, {EquationMode::Kind::Ode, spec.n}, std::move(spec)};
        }
        case FamilyKind::DiffTrivial: {
            require(spec.n >= 1, "DiffTrivial requires n >= 1");
            require(spec.c != cplx(0.0), "DiffTrivial requires c != 0");
            const ScaleRoots roots = admissible_scale_diff(spec.n, spec.alpha, spec.c);
            spec.d = detail::resolve_scale(roots, spec, "d^n (1 + e^{alpha c}) = 1");
            spec.has_d = true;
            Expr f = Expr::mul(Expr::constant(spec.d),
                               affine_exp(spec.alpha / double(spec.n), spec.beta / double(spec.n)));
            return {std::move(f), std::nullopt,
                    {EquationMode::Kind::Difference, spec.n, spec.c}, std::move(spec)};
        }
        case FamilyKind::Eq5Pair: {
            spec.n = 3;
            require(spec.h.has_value(), "Eq5Pair requires h");
            require(spec.c != cplx(0.0), "Eq5Pair requires c != 0");
            detail::require_cube_root_of_unity(spec.eta);
            Expr f = eq5_first_form(*spec.h, spec.alpha, spec.beta);
            Expr g = eq5_second_form(*spec.h, spec.alpha, spec.beta, spec.eta);
            return {std::move(f), std::move(g),
                    {EquationMode::Kind::Difference, 3, spec.c}, std::move(spec)};
        }
        case FamilyKind::Example4: {
            spec.n = 3;
            spec.c = i_pi;
            spec.h = Expr::exp(Expr::variable());
            detail::require_exp_alpha_c(spec.alpha, spec.c, 1.0,
                                        "Example4 requires e^{alpha c} = 1 (c = pi i)");
            Expr f = eq5_first_form(*spec.h, spec.alpha, spec.beta);
            return {std::move(f), std::nullopt,
                    {EquationMode::Kind::Difference, 3, spec.c}, std::move(spec)};
        }
        case FamilyKind::Example5a:
        case FamilyKind::Example5b: {
            spec.n = 2;
            spec.c = cplx(M_PI / 2.0, 0.0);
            detail::require_exp_alpha_c(spec.alpha, spec.c, 1.0,
                                        "Example5 requires e^{alpha c} = 1 (c = pi/2)");
            Expr arg = spec.kind == FamilyKind::Example5a
                           ? Expr::variable()
                           : Expr::add(Expr::exp(Expr::mul(Expr::constant(cplx(0.0, 4.0)),
                                                           Expr::variable())),
                                       Expr::variable());
            Expr f = Expr::mul(affine_exp(spec.alpha / 2.0, spec.beta / 2.0), Expr::sin(std::move(arg)));
            return {std::move(f), std::nullopt,
                    {EquationMode::Kind::Difference, 2, spec.c}, std::move(spec)};
        }
        case FamilyKind::Example6a:
        case FamilyKind::Example6b: {
            spec.n = 1;
            spec.c = i_pi;
            detail::require_exp_alpha_c(spec.alpha, spec.c, 1.0,
                                        "Example6 requires e^{alpha c} = 1 (c = i pi)");
            Expr head = spec.kind == FamilyKind::Example6a
                            ? Expr::exp(Expr::variable())
                            : Expr::exp(Expr::add(Expr::exp(Expr::mul(Expr::constant(2.0),
                                                                      Expr::variable())),
                                                  Expr::variable()));
            Expr f = Expr::add(std::move(head),
                               Expr::mul(Expr::constant(0.5), affine_exp(spec.alpha, spec.beta)));
            return {std::move(f), std::nullopt,
                    {EquationMode::Kind::Difference, 1, spec.c}, std::move(spec)};
        }
        case FamilyKind::AntiPeriodicN1: {
            spec.n = 1;
            require(spec.c != cplx(0.0), "AntiPeriodicN1 requires c != 0");
            require(spec.delta.has_value(), "AntiPeriodicN1 requires delta");
            detail::require_anti_periodic(*spec.delta, spec.c);
            Expr f = Expr::variable();
            if (spec.form == AntiPeriodicForm::ScaledExp) {
                const ScaleRoots roots = admissible_scale_diff(1, spec.alpha, spec.c);
                spec.d = detail::resolve_scale(roots, spec, "d (1 + e^{alpha c}) = 1");
                spec.has_d = true;
                f = Expr::add(*spec.delta,
                              Expr::mul(Expr::constant(spec.d), affine_exp(spec.alpha, spec.beta)));
            } else {
                detail::require_exp_alpha_c(spec.alpha, spec.c, -1.0,
                                            "the linear-exponential form requires e^{alpha c} = -1");
                f = Expr::add(*spec.delta,
                              Expr::mul(Expr::constant(-1.0 / spec.c),
                                        Expr::mul(Expr::variable(), affine_exp(spec.alpha, spec.beta))));
            }
            return {std::move(f), std::nullopt,
                    {EquationMode::Kind::Difference, 1, spec.c}, std::move(spec)};
        }
    }
    throw std::logic_error("generate: unknown family kind");
}

inline const char* family_kind_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Prop1A: return "Prop1A";
        case FamilyKind::Prop1B: return "Prop1B";
        case FamilyKind::Thm2A: return "Thm2A";
        case FamilyKind::Thm2ADegenerate: return "Thm2A_degenerate";
        case FamilyKind::Thm2BTrig: return "Thm2B_trig";
        case FamilyKind::Thm2ScaledExp: return "Thm2_scaledExp";
        case FamilyKind::DiffTrivial: return "DiffTrivial";
        case FamilyKind::Eq5Pair: return "Eq5Pair";
        case FamilyKind::Example4: return "Example4";
        case FamilyKind::Example5a: return "Example5a";
        case FamilyKind::Example5b: return "Example5b";
        case FamilyKind::Example6a: return "Example6a";
        case FamilyKind::Example6b: return "Example6b";
        case FamilyKind::AntiPeriodicN1: return "AntiPeriodicN1";
    }
    return "?";
}

inline FamilyKind family_kind_from_name(const std::string& s) {
    static const std::pair<const char*, FamilyKind> table[] = {
        {"Prop1A", FamilyKind::Prop1A},
        {"Prop1B", FamilyKind::Prop1B},
        {"Thm2A", FamilyKind::Thm2A},
        {"Thm2A_degenerate", FamilyKind::Thm2ADegenerate},
        {"Thm2B_trig", FamilyKind::Thm2BTrig},
        {"Thm2_scaledExp", FamilyKind::Thm2ScaledExp},
        {"DiffTrivial", FamilyKind::DiffTrivial},
        {"Eq5Pair", FamilyKind::Eq5Pair},
        {"Example4", FamilyKind::Example4},
        {"Example5a", FamilyKind::Example5a},
        {"Example5b", FamilyKind::Example5b},
        {"Example6a", FamilyKind::Example6a},
        {"Example6b", FamilyKind::Example6b},
        {"AntiPeriodicN1", FamilyKind::AntiPeriodicN1},
    };
    for (const auto& [name, kind] : table) {
        if (s == name) return kind;
    }
    throw std::invalid_argument("unknown family kind: " + s);
}

inline const char* family_params_doc(FamilyKind k) {
    switch (k) {
        case FamilyKind::Prop1A: return "h (free function omega)";
        case FamilyKind::Prop1B: return "h, eta (cube root of unity)";
        case FamilyKind::Thm2A: return "alpha (!= -1), beta, a";
        case FamilyKind::Thm2ADegenerate: return "beta, a (alpha fixed to -1)";
        case FamilyKind::Thm2BTrig: return "beta, b (alpha fixed to 0)";
        case FamilyKind::Thm2ScaledExp: return "n, alpha, beta, optional d or root_index";
        case FamilyKind::DiffTrivial: return "n, alpha, beta, c, optional d or root_index";
        case FamilyKind::Eq5Pair: return "h, eta, alpha, beta, c";
        case FamilyKind::Example4: return "alpha (e^{alpha pi i} = 1), beta";
        case FamilyKind::Example5a: return "alpha (e^{alpha pi/2} = 1), beta";
        case FamilyKind::Example5b: return "alpha (e^{alpha pi/2} = 1), beta";
        case FamilyKind::Example6a: return "alpha (e^{alpha i pi} = 1), beta";
        case FamilyKind::Example6b: return "alpha (e^{alpha i pi} = 1), beta";
        case FamilyKind::AntiPeriodicN1: return "delta, alpha, beta, c, form (dexp|zexp)";
    }
    return "";
}

inline std::vector<FamilyKind> all_family_kinds() {
    return {FamilyKind::Prop1A,     FamilyKind::Prop1B,        FamilyKind::Thm2A,
            FamilyKind::Thm2ADegenerate, FamilyKind::Thm2BTrig, FamilyKind::Thm2ScaledExp,
            FamilyKind::DiffTrivial, FamilyKind::Eq5Pair,       FamilyKind::Example4,
            FamilyKind::Example5a,  FamilyKind::Example5b,     FamilyKind::Example6a,
            FamilyKind::Example6b,  FamilyKind::AntiPeriodicN1};
}

}  // namespace fermat
