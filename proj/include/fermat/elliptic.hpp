#pragma once

// Weierstrass elliptic functions for the equianharmonic lattice, i.e. the
// invariants g2 = 0, g3 = 1, for which (wp')^2 = 4 wp^3 - 1.
//
// Evaluation strategy: reduce the argument modulo the period lattice to the
// representative nearest the origin, halve it until it lies well inside the
// convergence zone of the Laurent series, evaluate wp and wp' by the series,
// then undo the halvings with the duplication formula. The sign of wp' is
// never recovered from the differential equation (that square root is
// ambiguous); it always comes from the series or the differentiated
// duplication formula.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fermat {

using cplx = std::complex<double>;

/// Default distance (in reduced-cell coordinates) below which evaluation
/// near a pole reports pole-overflow instead of a huge value.
inline constexpr double kDefaultPoleGuard = 1e-6;

/// Period lattice of the equianharmonic Weierstrass function.
struct Lattice {
    cplx omega1;         ///< fundamental period, real positive
    cplx omega2;         ///< fundamental period, omega1 * e^{i pi/3}
    double area;         ///< area of the period parallelogram
    double e1;           ///< real root of 4 t^3 - 1 = 0
    double half_period;  ///< omega_h = omega1 / 2, real half-period
};

/// Result of reducing a point modulo the lattice.
struct CellReduction {
    cplx reduced;        ///< representative nearest the origin
    cplx lattice_point;  ///< subtracted point m*omega1 + n*omega2
};

struct WpPair {
    cplx p;       ///< wp(z)
    cplx pprime;  ///< wp'(z)
};

namespace detail {

// Adaptive Simpson on [a, b]; integrand must be smooth there.
template <typename F>
double simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Real half-period omega_h = int_{e1}^inf dt / sqrt(4 t^3 - 1).
// Substituting t = e1/u^2 and then u = 1 - v^2 gives the smooth integrand
//   omega_h = 2 e1 * int_0^1 2 dv / sqrt(1 + u + u^2 + u^3 + u^4 + u^5),
// with u = 1 - v^2, which adaptive Simpson handles to full precision.
inline double compute_half_period(double e1) {
    auto integrand = [](double v) {
        const double u = 1.0 - v * v;
        const double p = 1.0 + u * (1.0 + u * (1.0 + u * (1.0 + u * (1.0 + u))));
        return 2.0 / std::sqrt(p);
    };
    return 2.0 * e1 * adaptive_simpson(integrand, 0.0, 1.0, 1e-15);
}

// Laurent coefficients c_k of wp(z) = z^-2 + sum_{k>=2} c_k z^{2k-2} for
// g2 = 0, g3 = 1: c_2 = 0, c_3 = 1/28, and for k >= 4
//   c_k = 3 / ((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}.
// Only k divisible by 3 contributes (hexagonal symmetry). The table is
// sized so the truncation tail at the largest evaluation radius is far
// below 1e-13.
inline constexpr int kCoeffMax = 60;

inline const std::array<double, kCoeffMax + 1>& laurent_coeffs() {
    static const std::array<double, kCoeffMax + 1> table = [] {
        std::array<double, kCoeffMax + 1> c{};
        c[3] = 1.0 / 28.0;
        for (int k = 6; k <= kCoeffMax; k += 3) {
            double s = 0.0;
            for (int m = 3; m <= k - 3; m += 3) {
                s += c[m] * c[k - m];
            }
            c[k] = 3.0 * s / (double(2 * k + 1) * double(k - 3));
        }
        return c;
    }();
    return table;
}

// Series evaluation of wp and wp' for |z| below the halving threshold.
inline WpPair wp_series_small(cplx z) {
    const auto& c = laurent_coeffs();
    const cplx z2 = z * z;
    const cplx z3 = z2 * z;
    const cplx t = z3 * z3;  // z^6
    cplx sum_p = 0.0;        // sum c_{3j} t^{j-1}
    cplx sum_pp = 0.0;       // sum (6j-2) c_{3j} t^{j-1}
    cplx tpow = 1.0;
    for (int j = 1; 3 * j <= kCoeffMax; ++j) {
        const double ck = c[3 * j];
        const cplx term = ck * tpow;
        sum_p += term;
        sum_pp += double(6 * j - 2) * term;
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(sum_p))) {
            break;
        }
        tpow *= t;
    }
    WpPair out;
    out.p = 1.0 / z2 + z2 * z2 * sum_p;
    out.pprime = -2.0 / z3 + z3 * sum_pp;
    return out;
}

// Duplication step: wp(2w), wp'(2w) from wp(w), wp'(w), using wp'' = 6 wp^2.
inline WpPair wp_duplicate(const WpPair& v) {
    const cplx x = v.p, y = v.pprime;
    const cplx x2 = x * x;
    const cplx x3 = x2 * x;
    const cplx y2 = y * y;
    WpPair out;
    out.p = -2.0 * x + 9.0 * (x2 * x2) / y2;
    out.pprime = -y + 18.0 * x3 / y - 54.0 * (x3 * x3) / (y2 * y);
    return out;
}

}  // namespace detail

/// The lattice with invariants g2 = 0, g3 = 1, oriented with omega1 real
/// positive. Built once and cached.
inline const Lattice& equianharmonic_lattice() {
    static const Lattice lattice = [] {
        Lattice l;
        l.e1 = std::cbrt(0.25);
        l.half_period = detail::compute_half_period(l.e1);
        l.omega1 = cplx(2.0 * l.half_period, 0.0);
        l.omega2 = l.omega1 * std::polar(1.0, M_PI / 3.0);
        l.area = std::abs(std::imag(std::conj(l.omega1) * l.omega2));
        return l;
    }();
    return lattice;
}

/// Number of nonzero Laurent coefficients in the cached series table.
inline std::size_t wp_series_terms() {
    std::size_t n = 0;
    for (int k = 3; k <= detail::kCoeffMax; k += 3) {
        ++n;
    }
    (void)detail::laurent_coeffs();
    return n;
}

/// Reduce z modulo the lattice to the representative nearest the origin.
/// The subtracted point is m*omega1 + n*omega2 minimizing |z - p|; exact
/// distance ties are broken by lexicographically smallest (m, n).
inline CellReduction reduce(cplx z, const Lattice& lat = equianharmonic_lattice()) {
    const double w1 = lat.omega1.real();
    const double b = z.imag() / lat.omega2.imag();
    const double a = (z.real() - b * lat.omega2.real()) / w1;
    const long m0 = std::lround(a);
    const long n0 = std::lround(b);
    double best = std::numeric_limits<double>::infinity();
    cplx best_point = 0.0;
    for (long m = m0 - 2; m <= m0 + 2; ++m) {
        for (long n = n0 - 2; n <= n0 + 2; ++n) {
            const cplx p = double(m) * lat.omega1 + double(n) * lat.omega2;
            const double d = std::abs(z - p);
            if (d < best) {
                best = d;
                best_point = p;
            }
        }
    }
    return CellReduction{z - best_point, best_point};
}

/// wp and wp' together. Returns nullopt (pole-overflow) when the reduced
/// argument is within pole_guard of a lattice point.
inline std::optional<WpPair> wp_pair(cplx z, double pole_guard = kDefaultPoleGuard) {
    const Lattice& lat = equianharmonic_lattice();
    cplx w = reduce(z, lat).reduced;
    if (std::abs(w) < pole_guard) {
        return std::nullopt;
    }
    // Halve until the series converges fast, then duplicate back.
    const double threshold = 0.35 * std::abs(lat.omega1);
    int halvings = 0;
    while (std::abs(w) >= threshold) {
        w *= 0.5;
        ++halvings;
    }
    WpPair v = detail::wp_series_small(w);
    for (int i = 0; i < halvings; ++i) {
        v = detail::wp_duplicate(v);
    }
    return v;
}

/// Weierstrass wp for the equianharmonic lattice.
inline std::optional<cplx> wp(cplx z, double pole_guard = kDefaultPoleGuard) {
    auto v = wp_pair(z, pole_guard);
    if (!v) return std::nullopt;
    return v->p;
}

/// Weierstrass wp' for the equianharmonic lattice.
inline std::optional<cplx> wp_prime(cplx z, double pole_guard = kDefaultPoleGuard) {
    auto v = wp_pair(z, pole_guard);
    if (!v) return std::nullopt;
    return v->pprime;
}

/// The two zeros of wp in the fundamental parallelogram, found by a
/// cell-wide Newton search and deduplicated. Sorted by (re, im).
inline const std::array<cplx, 2>& wp_zeros() {
    static const std::array<cplx, 2> zeros = [] {
        const Lattice& lat = equianharmonic_lattice();
        std::vector<cplx> found;
        for (int i = 1; i <= 5; ++i) {
            for (int j = 1; j <= 5; ++j) {
                cplx z = (i / 6.0) * lat.omega1 + (j / 6.0) * lat.omega2;
                bool ok = false;
                for (int it = 0; it < 60; ++it) {
                    auto v = wp_pair(z, 1e-9);
                    if (!v || std::abs(v->pprime) < 1e-12) break;
                    const cplx step = v->p / v->pprime;
                    z -= step;
                    if (std::abs(step) < 1e-14) {
                        ok = true;
                        break;
                    }
                }
                if (!ok) continue;
                auto v = wp_pair(z, 1e-9);
                if (!v || std::abs(v->p) > 1e-10) continue;
                // canonicalize into the fundamental parallelogram [0,1)^2
                double bb = z.imag() / lat.omega2.imag();
                double aa = (z.real() - bb * lat.omega2.real()) / lat.omega1.real();
                aa -= std::floor(aa);
                bb -= std::floor(bb);
                cplx canon = aa * lat.omega1 + bb * lat.omega2;
                bool dup = false;
                for (const cplx& f : found) {
                    if (std::abs(f - canon) < 1e-8) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) found.push_back(canon);
            }
        }
        if (found.size() != 2) {
            throw std::logic_error("wp zero search did not find exactly 2 zeros per cell");
        }
        if (found[1].real() < found[0].real() ||
            (found[1].real() == found[0].real() && found[1].imag() < found[0].imag())) {
            std::swap(found[0], found[1]);
        }
        return std::array<cplx, 2>{found[0], found[1]};
    }();
    return zeros;
}

}  // namespace fermat
