#pragma once

// Numerical Nevanlinna functions: proximity m(r,f) by adaptive circle
// quadrature, counting N(r,f) by exact summation over an enumerated pole
// set, characteristic T = m + N, and a log-log slope estimate of the order
// of growth.
//
// The circle quadrature is the composite trapezoid rule (the integrand is
// periodic, so away from poles the rule converges spectrally) with node
// doubling until two successive estimates agree. When a node lands on a
// pole or overflows, the radius is nudged upward by steps of 0.01%, at most
// 0.1% total.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fermat/elliptic.hpp"
#include "fermat/expr.hpp"
#include "fermat/families.hpp"

namespace fermat {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedFamilyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Pole {
    cplx location;
    int multiplicity = 1;
};

namespace detail {

// Visit lattice points p = m*omega1 + n*omega2 with |p - center| <= radius.
// omega1 is real, so each row n admits an exact m interval. Row-major
// order keeps the traversal deterministic.
template <typename F>
void for_lattice_in_disc(cplx center, double radius, F&& fn) {
    if (!(radius <= 1e5)) {
        throw std::invalid_argument("pole enumeration disc is too large to sum over");
    }
    const Lattice& lat = equianharmonic_lattice();
    const double w1 = lat.omega1.real();
    const double re2 = lat.omega2.real();
    const double im2 = lat.omega2.imag();
    const long n_lo = long(std::ceil((center.imag() - radius) / im2));
    const long n_hi = long(std::floor((center.imag() + radius) / im2));
    for (long n = n_lo; n <= n_hi; ++n) {
        const double y = double(n) * im2;
        const double dy = center.imag() - y;
        const double half = std::sqrt(std::max(0.0, radius * radius - dy * dy));
        const double xc = center.real() - double(n) * re2;
        const long m_lo = long(std::ceil((xc - half) / w1));
        const long m_hi = long(std::floor((xc + half) / w1));
        for (long m = m_lo; m <= m_hi; ++m) {
            fn(cplx(double(m) * w1 + double(n) * re2, y));
        }
    }
}

}  // namespace detail

/// Closed-form description of a pole set with multiplicities.
///
/// Variants:
///  - NoPoles: entire functions.
///  - LatticeDoublePoles: the nonzero period-lattice points, multiplicity 2
///    (the pole set of wp, minus the origin: the closed counting formula
///    has no n(0) term, so the pole at 0 is left out; see counting()).
///  - PreimageOfLattice: solutions of h(z) in (target + lattice) for
///    h(z) = a z + b or h(z) = e^{a z + b}. Targets beyond {0} describe
///    translated copies such as the zeros of wp.
///  - ExplicitList: a materialized list (typically produced by root
///    finding, see pole_enumerator_for).
class PoleEnumerator {
public:
    enum class Kind { NoPoles, LatticeDoublePoles, PreimageOfLattice, ExplicitList };
    enum class HKind { Affine, ExpAffine };

    static PoleEnumerator no_poles() { return PoleEnumerator(Kind::NoPoles); }

    static PoleEnumerator lattice_double_poles() {
        return PoleEnumerator(Kind::LatticeDoublePoles);
    }

    static PoleEnumerator preimage_affine(cplx a, cplx b, std::vector<cplx> targets,
                                          int multiplicity) {
        if (a == cplx(0.0)) throw std::invalid_argument("preimage_affine: a must be nonzero");
        PoleEnumerator pe(Kind::PreimageOfLattice);
        pe.h_kind_ = HKind::Affine;
        pe.a_ = a;
        pe.b_ = b;
        pe.targets_ = std::move(targets);
        pe.multiplicity_ = multiplicity;
        return pe;
    }

    static PoleEnumerator preimage_exp(cplx a, cplx b, std::vector<cplx> targets,
                                       int multiplicity) {
        if (a == cplx(0.0)) throw std::invalid_argument("preimage_exp: a must be nonzero");
        PoleEnumerator pe(Kind::PreimageOfLattice);
        pe.h_kind_ = HKind::ExpAffine;
        pe.a_ = a;
        pe.b_ = b;
        pe.targets_ = std::move(targets);
        pe.multiplicity_ = multiplicity;
        return pe;
    }

    static PoleEnumerator explicit_list(std::vector<Pole> poles) {
        PoleEnumerator pe(Kind::ExplicitList);
        pe.poles_ = std::move(poles);
        return pe;
    }

    Kind kind() const { return kind_; }

    /// True if the pole set contains the origin.
    bool pole_at_origin(double eps = 1e-12) const {
        switch (kind_) {
            case Kind::NoPoles:
            case Kind::LatticeDoublePoles:
                return false;
            case Kind::PreimageOfLattice: {
                const cplx h0 = h_kind_ == HKind::Affine ? b_ : std::exp(b_);
                for (const cplx& t : targets_) {
                    if (std::abs(reduce(h0 - t).reduced) <= 1e-9) return true;
                }
                return false;
            }
            case Kind::ExplicitList:
                for (const Pole& p : poles_) {
                    if (std::abs(p.location) <= eps) return true;
                }
                return false;
        }
        return false;
    }

    /// Materialized pole list, sorted by (|p|, re, im). For tests and small
    /// radii; prefer visit() for large discs.
    std::vector<Pole> enumerate(double r) const {
        std::vector<Pole> out;
        visit(r, [&](cplx p, int mult) { out.push_back({p, mult}); });
        std::sort(out.begin(), out.end(), [](const Pole& x, const Pole& y) {
            const double ax = std::abs(x.location), ay = std::abs(y.location);
            if (ax != ay) return ax < ay;
            if (x.location.real() != y.location.real()) {
                return x.location.real() < y.location.real();
            }
            return x.location.imag() < y.location.imag();
        });
        return out;
    }

    /// Call fn(location, multiplicity) for every pole with |p| <= r.
    template <typename F>
    void visit(double r, F&& fn) const {
        switch (kind_) {
            case Kind::NoPoles:
                return;
            case Kind::LatticeDoublePoles: {
                detail::for_lattice_in_disc(0.0, r, [&](cplx p) {
                    if (std::abs(p) > 1e-12 && std::abs(p) <= r) fn(p, 2);
                });
                return;
            }
            case Kind::PreimageOfLattice: {
                if (h_kind_ == HKind::Affine) {
                    // a z + b = p + t  =>  z = (p + t - b) / a
                    const double R = std::abs(a_) * r;
                    for (const cplx& t : targets_) {
                        detail::for_lattice_in_disc(b_ - t, R, [&](cplx p) {
                            const cplx z = (p + t - b_) / a_;
                            if (std::abs(z) <= r) fn(z, multiplicity_);
                        });
                    }
                    return;
                }
                // e^{a z + b} = p + t  =>  z = (Log(p+t) - b + 2 pi i k) / a
                const double ar = std::abs(a_) * r + std::abs(b_.real()) + std::abs(b_.imag());
                const double w_hi = std::exp(std::min(ar, 700.0));
                const double w_lo = std::exp(-std::min(ar, 700.0));
                const cplx two_pi_i(0.0, 2.0 * M_PI);
                for (const cplx& t : targets_) {
                    detail::for_lattice_in_disc(-t, w_hi, [&](cplx p) {
                        const cplx w = p + t;
                        const double aw = std::abs(w);
                        if (aw < w_lo || aw > w_hi) return;
                        const cplx base = (std::log(w) - b_) / a_;
                        const cplx step = two_pi_i / a_;
                        const double astep = std::abs(step);
                        const long k_hi = long(std::floor((r + std::abs(base)) / astep)) + 1;
                        for (long k = -k_hi; k <= k_hi; ++k) {
                            const cplx z = base + double(k) * step;
                            if (std::abs(z) <= r) fn(z, multiplicity_);
                        }
                    });
                }
                return;
            }
            case Kind::ExplicitList: {
                for (const Pole& p : poles_) {
                    if (std::abs(p.location) <= r) fn(p.location, p.multiplicity);
                }
                return;
            }
        }
    }

private:
    explicit PoleEnumerator(Kind k) : kind_(k) {}

    Kind kind_;
    HKind h_kind_ = HKind::Affine;
    cplx a_{1.0}, b_{};
    std::vector<cplx> targets_;
    int multiplicity_ = 1;
    std::vector<Pole> poles_;
};

struct GrowthRecord {
    double r = 0.0;  ///< radius actually used (after any pole nudging)
    double m = 0.0;
    double N = 0.0;
    double T = 0.0;  ///< m + N exactly
};

using GrowthCurve = std::vector<GrowthRecord>;

struct ProximityResult {
    double value = 0.0;
    double radius_used = 0.0;
    int nodes = 0;    ///< final trapezoid node count
    int nudges = 0;   ///< how many 0.01% radius bumps were applied
};

namespace detail {

// log+ |f| on the circle; nullopt when the node cannot be evaluated.
inline std::optional<double> log_plus_at(const Expr& f, double r, double theta) {
    // Tiny guard: values near poles are large but finite and belong in the
    // integral; only exact pole hits / overflow report nullopt.
    static const EvalOptions opt{1e-13};
    const auto v = eval(f, std::polar(r, theta), opt);
    if (!v) return std::nullopt;
    const double mag = std::abs(*v);
    if (!std::isfinite(mag)) return std::nullopt;
    return mag > 1.0 ? std::log(mag) : 0.0;
}

}  // namespace detail

/// Proximity function m(r,f) = (1/2pi) int_0^{2pi} log+ |f(r e^{i theta})| d theta
/// by composite trapezoid with quad_order initial nodes, doubling until two
/// successive estimates differ by less than rel_tol relative (with floor 1).
inline ProximityResult proximity_detailed(const Expr& f, double r, int quad_order = 256,
                                          double rel_tol = 1e-6, int max_doublings = 20) {
    if (!(r > 0.0)) throw std::invalid_argument("proximity: r must be > 0");
    if (quad_order < 4) throw std::invalid_argument("proximity: quadOrder must be >= 4");

    for (int nudge = 0; nudge <= 10; ++nudge) {
        const double rr = r * (1.0 + 1e-4 * nudge);
        // initial pass
        long n = quad_order;
        double sum = 0.0;
        bool bad = false;
        for (long j = 0; j < n && !bad; ++j) {
            const auto g = detail::log_plus_at(f, rr, 2.0 * M_PI * double(j) / double(n));
            if (!g) {
                bad = true;
                break;
            }
            sum += *g;
        }
        if (bad) continue;  // a node sits on a pole: nudge the radius
        double prev = sum / double(n);
        for (int d = 0; d < max_doublings && !bad; ++d) {
            // add the midpoints of the current grid
            double add = 0.0;
            for (long j = 0; j < n && !bad; ++j) {
                const auto g =
                    detail::log_plus_at(f, rr, 2.0 * M_PI * (double(j) + 0.5) / double(n));
                if (!g) {
                    bad = true;
                    break;
                }
                add += *g;
            }
            if (bad) break;
            sum += add;
            n *= 2;
            const double cur = sum / double(n);
            if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) {
                return {cur, rr, int(n), nudge};
            }
            prev = cur;
        }
        if (!bad) {
            throw QuadratureError("proximity did not converge after " +
                                  std::to_string(max_doublings) +
                                  " doublings (pole on or near the circle |z| = " +
                                  std::to_string(rr) + "?)");
        }
    }
    throw QuadratureError("proximity could not dodge poles on the circle |z| = " +
                          std::to_string(r) + " within 0.1% radius nudging");
}

inline double proximity(const Expr& f, double r, int quad_order = 256) {
    return proximity_detailed(f, r, quad_order).value;
}

/// Counting function N(r,f) = sum over poles 0 < |p| <= r of
/// mult(p) log(r/|p|). A pole at the origin has no place in this closed
/// formula (the n(0) log r term is missing); it is reported as an error,
/// and the function under study should be shifted to avoid it.
inline double counting(const PoleEnumerator& pe, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("counting: r must be > 0");
    if (pe.pole_at_origin()) {
        throw std::domain_error(
            "counting: pole at the origin is unsupported; shift the function first");
    }
    double sum = 0.0;
    pe.visit(r, [&](cplx p, int mult) {
        const double ap = std::abs(p);
        if (ap > 0.0 && ap <= r) sum += double(mult) * std::log(r / ap);
    });
    return sum;
}

/// Per-radius records (r, m, N, T) with T = m + N. Radii must be strictly
/// increasing; each may be nudged upward by at most 0.1% to dodge poles on
/// the circle, and the record keeps the radius actually used.
inline GrowthCurve characteristic(const Expr& f, const PoleEnumerator& pe,
                                  const std::vector<double>& radii, int quad_order = 256) {
    if (radii.empty()) throw std::invalid_argument("characteristic: empty radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("characteristic: radii must be > 0");
        if (i > 0 && !(radii[i] > radii[i - 1])) {
            throw std::invalid_argument("characteristic: radii must be strictly increasing");
        }
    }
    GrowthCurve curve;
    curve.reserve(radii.size());
    for (double r : radii) {
        const ProximityResult mr = proximity_detailed(f, r, quad_order);
        const double N = counting(pe, mr.radius_used);
        curve.push_back({mr.radius_used, mr.value, N, mr.value + N});
    }
    return curve;
}

/// CSV serialization, header r,m,N,T, 15 significant digits.
inline std::string growth_curve_csv(const GrowthCurve& curve) {
    std::string out = "r,m,N,T\n";
    char buf[160];
    for (const GrowthRecord& rec : curve) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g\n", rec.r, rec.m, rec.N, rec.T);
        out += buf;
    }
    return out;
}

struct OrderEstimate {
    double rho = 0.0;  ///< least-squares slope of log T vs log r, top half of radii
    double sse = 0.0;  ///< residual sum of squares of that fit
    std::vector<double> local_slopes;  ///< consecutive d log T / d log r over the whole curve
    bool super_polynomial = false;     ///< local slopes strictly increasing
    int points_used = 0;               ///< points in the fit
};

/// Order-of-growth estimate. The limsup is approximated by fitting only the
/// top half of the radii (small-r transients bias the slope); a strictly
/// increasing local-slope sequence is reported as super-polynomial growth
/// evidence.
inline OrderEstimate order_estimate(const GrowthCurve& curve) {
    std::vector<double> xs, ys;
    for (const GrowthRecord& rec : curve) {
        if (rec.T > 0.0) {
            xs.push_back(std::log(rec.r));
            ys.push_back(std::log(rec.T));
        }
    }
    if (xs.size() < 8) {
        throw std::invalid_argument("order_estimate: need at least 8 records with T > 0");
    }
    const auto [t_min, t_max] = std::minmax_element(ys.begin(), ys.end());
    if (*t_min == *t_max) {
        throw std::invalid_argument("order_estimate: degenerate curve (all T equal)");
    }

    OrderEstimate est;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        est.local_slopes.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
    }
    est.super_polynomial = est.local_slopes.size() >= 2;
    for (std::size_t i = 0; i + 1 < est.local_slopes.size(); ++i) {
        if (!(est.local_slopes[i + 1] > est.local_slopes[i])) {
            est.super_polynomial = false;
            break;
        }
    }

    const std::size_t lo = xs.size() / 2;
    const std::size_t n = xs.size() - lo;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = lo; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = double(n) * sxx - sx * sx;
    est.rho = (double(n) * sxy - sx * sy) / denom;
    const double intercept = (sy - est.rho * sx) / double(n);
    for (std::size_t i = lo; i < xs.size(); ++i) {
        const double resid = ys[i] - (est.rho * xs[i] + intercept);
        est.sse += resid * resid;
    }
    est.points_used = int(n);
    return est;
}

namespace detail {

// Newton refinement of a zero of wp(h(z)) for h affine or exp-affine.
// h'(z) is a for affine h and a*h(z) for exp-affine h.
inline cplx polish_wp_zero(cplx z, cplx a, cplx b, bool exp_affine) {
    for (int it = 0; it < 4; ++it) {
        const cplx hz = exp_affine ? std::exp(a * z + b) : a * z + b;
        const auto v = wp_pair(hz, 1e-12);
        if (!v || std::abs(v->pprime) < 1e-9) break;
        const cplx hp = exp_affine ? a * hz : a;
        const cplx step = v->p / (v->pprime * hp);
        z -= step;
        if (std::abs(step) < 1e-13) break;
    }
    return z;
}

// Pole order at z0 by the argument principle: winding of f'/f around a
// small circle. Returns 0 when the contour cannot be evaluated.
inline int argument_principle_order(const Expr& f, const Expr& fp, cplx z0, double radius) {
    for (int shrink = 0; shrink < 3; ++shrink) {
        const double rho = radius / std::pow(4.0, shrink);
        cplx acc = 0.0;
        bool ok = true;
        const int nodes = 64;
        static const EvalOptions opt{1e-13};
        for (int j = 0; j < nodes; ++j) {
            const double th = 2.0 * M_PI * double(j) / double(nodes);
            const cplx w = z0 + std::polar(rho, th);
            const auto vf = eval(f, w, opt);
            const auto vp = eval(fp, w, opt);
            if (!vf || !vp || std::abs(*vf) == 0.0) {
                ok = false;
                break;
            }
            // (1/2 pi i) * integral of f'/f dz, dz = i rho e^{i th} d th
            acc += (*vp / *vf) * std::polar(rho, th);
        }
        if (!ok) continue;
        acc /= double(nodes);
        return int(std::lround(acc.real()));
    }
    return 0;
}

}  // namespace detail

/// Pole enumerator for a generated family.
///
/// Exponential families are entire (NoPoles). Families built through wp(h)
/// get an explicit list assembled by root finding inside |z| <= r_max:
/// candidates are the preimages under h of the lattice and of the zeros of
/// wp, Newton-polished, with multiplicities measured by the argument
/// principle on small circles (the nearest poles are measured individually;
/// the rest inherit the observed order). Requires h affine or e^{a z + b}.
inline PoleEnumerator pole_enumerator_for(const GeneratedFamily& fam, double r_max = 10.0) {
    switch (fam.spec.kind) {
        case FamilyKind::Thm2A:
        case FamilyKind::Thm2ADegenerate:
        case FamilyKind::Thm2BTrig:
        case FamilyKind::Thm2ScaledExp:
        case FamilyKind::DiffTrivial:
        case FamilyKind::Example5a:
        case FamilyKind::Example5b:
        case FamilyKind::Example6a:
        case FamilyKind::Example6b:
            return PoleEnumerator::no_poles();
        case FamilyKind::AntiPeriodicN1:
            if (fam.spec.delta && !contains_pole_capable(*fam.spec.delta)) {
                return PoleEnumerator::no_poles();
            }
            throw UnsupportedFamilyError(
                "pole_enumerator_for: meromorphic delta is not supported");
        case FamilyKind::Prop1B:
        case FamilyKind::Eq5Pair:
        case FamilyKind::Example4:
            break;
        default:
            throw UnsupportedFamilyError("pole_enumerator_for: unsupported family kind");
    }

    const Expr& h = *fam.spec.h;
    const auto aff = as_affine(h);
    std::optional<std::pair<cplx, cplx>> eaff;
    if (!aff) eaff = as_exp_affine(h);
    if (!aff && !eaff) {
        throw UnsupportedFamilyError(
            "pole_enumerator_for: h must be affine or e^{a z + b}");
    }
    const bool exp_affine = !aff;
    const auto [a, b] = exp_affine ? *eaff : *aff;
    if (a == cplx(0.0)) {
        throw UnsupportedFamilyError("pole_enumerator_for: h must be nonconstant");
    }

    // candidate poles: preimages of the lattice and of the two wp zeros
    const auto& zeros = wp_zeros();
    std::vector<cplx> candidates;
    auto collect = [&](const std::vector<cplx>& targets, bool polish) {
        const PoleEnumerator pre =
            exp_affine ? PoleEnumerator::preimage_exp(a, b, targets, 1)
                       : PoleEnumerator::preimage_affine(a, b, targets, 1);
        pre.visit(r_max * 1.02, [&](cplx z, int) {
            candidates.push_back(polish ? detail::polish_wp_zero(z, a, b, exp_affine) : z);
        });
    };
    collect({cplx(0.0)}, false);                  // h hits a lattice point
    collect({zeros[0], zeros[1]}, true);          // wp(h) = 0

    std::sort(candidates.begin(), candidates.end(), [](cplx x, cplx y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax < ay;
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    std::vector<cplx> unique;
    for (const cplx& z : candidates) {
        if (unique.empty() || std::abs(z - unique.back()) > 1e-8) unique.push_back(z);
    }

    const Expr fp = differentiate(fam.f);
    std::vector<Pole> poles;
    poles.reserve(unique.size());
    int observed = 1;
    const int budget = 64;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        int mult = observed;
        if (int(i) < budget) {
            double gap = 0.01;
            if (i > 0) gap = std::min(gap, 0.4 * std::abs(unique[i] - unique[i - 1]));
            if (i + 1 < unique.size()) gap = std::min(gap, 0.4 * std::abs(unique[i + 1] - unique[i]));
            const int order = detail::argument_principle_order(fam.f, fp, unique[i],
                                                               std::max(gap, 1e-6));
            if (order < 0) {
                mult = -order;
                observed = mult;
            }
        }
        poles.push_back({unique[i], mult});
    }
    return PoleEnumerator::explicit_list(std::move(poles));
}

/// Pole enumerator for a bare expression: entire trees map to NoPoles;
/// wp(z) maps to the lattice double poles; wp, wp' and integer powers of wp
/// over an affine or exponential-affine inner function map to lattice
/// preimages. Anything else is unsupported.
inline PoleEnumerator pole_enumerator_for_expr(const Expr& e) {
    if (!contains_pole_capable(e)) return PoleEnumerator::no_poles();

    const Expr::Node& n = e.node();
    auto inner_map = [](const Expr& inner, const std::vector<cplx>& targets,
                        int mult) -> PoleEnumerator {
        if (auto aff = as_affine(inner)) {
            if (aff->first == cplx(0.0)) {
                throw UnsupportedFamilyError("pole enumeration: constant inner function");
            }
            return PoleEnumerator::preimage_affine(aff->first, aff->second, targets, mult);
        }
        if (auto eaff = as_exp_affine(inner)) {
            return PoleEnumerator::preimage_exp(eaff->first, eaff->second, targets, mult);
        }
        throw UnsupportedFamilyError(
            "pole enumeration: inner function must be affine or e^{a z + b}");
    };

    if (n.type == NodeType::Wp || n.type == NodeType::WpPrime) {
        const Expr inner = e.child_a();
        const int mult = n.type == NodeType::Wp ? 2 : 3;
        // wp(z) itself: the lattice double poles (origin excluded, see above)
        if (n.type == NodeType::Wp && inner.node().type == NodeType::Variable) {
            return PoleEnumerator::lattice_double_poles();
        }
        return inner_map(inner, {cplx(0.0)}, mult);
    }
    if (n.type == NodeType::Pow) {
        const Expr base = e.child_a();
        if (base.node().type == NodeType::Wp) {
            const Expr inner = base.child_a();
            if (n.exponent > 0) return inner_map(inner, {cplx(0.0)}, 2 * n.exponent);
            const auto& zeros = wp_zeros();
            return inner_map(inner, {zeros[0], zeros[1]}, -n.exponent);
        }
    }
    throw UnsupportedFamilyError(
        "pole enumeration is only available for entire expressions, wp-type expressions, or "
        "generated families");
}

}  // namespace fermat
