#include <catch2/catch_amalgamated.hpp>

#include "fermat/elliptic.hpp"
#include "oracles.hpp"

using namespace fermat;

// Reference values computed ahead of time at 50-digit precision with the
// series/duplication scheme and cross-checked against a Jacobi-theta route
// and the Gamma closed form of the half-period integral.
namespace {
constexpr double kOmegaH = 1.5299540370571928749;
constexpr double kArea = 8.1086282640626946408;
const cplx kWpAt07_03(1.18847096406377008, -1.23651874749081601);
const cplx kWpPrimeAt07_03(-1.55665456886725437, 4.30281855553167738);
const cplx kWpAtM11_09(-0.033501347506332421, 0.426933698737726136);
const cplx kWpPrimeAtM11_09(-0.156614422018246542, 0.97539839627714966);
}  // namespace

TEST_CASE("equianharmonic lattice constants") {
    const Lattice& lat = equianharmonic_lattice();

    SECTION("e1 is the real root of 4t^3 - 1") {
        CHECK(lat.e1 == Catch::Approx(std::cbrt(0.25)).epsilon(1e-14));
        CHECK(std::abs(4.0 * std::pow(lat.e1, 3) - 1.0) < 1e-14);
    }
    SECTION("half period matches the defining integral") {
        CHECK(std::abs(lat.half_period - kOmegaH) < 1e-12);
        CHECK(std::abs(lat.half_period - oracles::half_period_by_quadrature()) < 1e-12);
    }
    SECTION("orientation and shape") {
        CHECK(lat.omega1.imag() == 0.0);
        CHECK(lat.omega1.real() > 0.0);
        const cplx ratio = lat.omega2 / lat.omega1;
        CHECK(std::abs(ratio - std::polar(1.0, M_PI / 3.0)) < 1e-12);
    }
    SECTION("area recomputes from the stored periods") {
        const double recomputed = std::abs(std::imag(std::conj(lat.omega1) * lat.omega2));
        CHECK(lat.area == Catch::Approx(recomputed).epsilon(1e-15));
        CHECK(std::abs(lat.area - kArea) < 1e-11);
    }
    SECTION("diagnostics expose a populated coefficient table") {
        CHECK(wp_series_terms() >= 10);
    }
}

TEST_CASE("cell reduction") {
    const Lattice& lat = equianharmonic_lattice();

    SECTION("origin and exact lattice points") {
        const auto r0 = reduce(0.0);
        CHECK(std::abs(r0.reduced) == 0.0);
        CHECK(std::abs(r0.lattice_point) == 0.0);
        const auto r1 = reduce(lat.omega1);
        CHECK(std::abs(r1.reduced) < 1e-14);
        CHECK(std::abs(r1.lattice_point - lat.omega1) < 1e-14);
    }
    SECTION("interior points stay put") {
        const cplx z = 0.49 * lat.omega1;
        const auto r = reduce(z);
        CHECK(std::abs(r.reduced - z) < 1e-14);
        CHECK(std::abs(r.lattice_point) == 0.0);
        const auto brute = oracles::reduce_brute_force(z, 3);
        CHECK(std::abs(r.reduced - brute.reduced) < 1e-14);
    }
    SECTION("agrees with brute-force minimization at random points") {
        for (int i = 0; i < 200; ++i) {
            const cplx z = oracles::test_point(11, i, 0.0, 12.0);
            const auto fast = reduce(z);
            const auto brute = oracles::reduce_brute_force(z);
            CHECK(std::abs(fast.reduced) <= std::abs(brute.reduced) + 1e-12);
            CHECK(std::abs(fast.reduced + fast.lattice_point - z) < 1e-12);
        }
    }
    SECTION("reduced point lies within the Voronoi circumradius") {
        const double circum = std::abs(lat.omega1) / std::sqrt(3.0);
        for (int i = 0; i < 100; ++i) {
            const cplx z = oracles::test_point(12, i, 0.0, 30.0);
            CHECK(std::abs(reduce(z).reduced) <= circum * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("wp point values") {
    const Lattice& lat = equianharmonic_lattice();

    SECTION("reference points") {
        const auto v = wp_pair(cplx(0.7, 0.3));
        REQUIRE(v.has_value());
        CHECK(std::abs(v->p - kWpAt07_03) < 1e-10 * std::abs(kWpAt07_03));
        CHECK(std::abs(v->pprime - kWpPrimeAt07_03) < 1e-10 * std::abs(kWpPrimeAt07_03));
        const auto w = wp_pair(cplx(-1.1, 0.9));
        REQUIRE(w.has_value());
        CHECK(std::abs(w->p - kWpAtM11_09) < 1e-10);
        CHECK(std::abs(w->pprime - kWpPrimeAtM11_09) < 1e-10);
    }
    SECTION("principal part near the origin") {
        const auto v = wp(cplx(1e-3, 0.0));
        REQUIRE(v.has_value());
        CHECK(std::abs(*v - 1e6) < 1e-2);
    }
    SECTION("real half-period") {
        const auto v = wp_pair(cplx(lat.half_period, 0.0));
        REQUIRE(v.has_value());
        CHECK(std::abs(v->p - lat.e1) < 1e-12);
        CHECK(std::abs(v->pprime) < 1e-8);
    }
    SECTION("pole overflow at and near lattice points") {
        CHECK_FALSE(wp(0.0).has_value());
        CHECK_FALSE(wp(lat.omega1).has_value());
        CHECK_FALSE(wp(lat.omega2 + cplx(1e-8, 0.0)).has_value());
        CHECK(wp(cplx(1e-5, 0.0)).has_value());  // outside the default guard
    }
}

TEST_CASE("wp functional identities") {
    const Lattice& lat = equianharmonic_lattice();

    SECTION("differential equation (wp')^2 = 4 wp^3 - 1") {
        double worst = 0.0;
        int used = 0;
        for (int i = 0; used < 1000 && i < 4000; ++i) {
            const cplx z = oracles::test_point(21, i, 0.0, 8.0);
            const auto v = wp_pair(z, 1e-3);
            if (!v) continue;
            ++used;
            const cplx lhs = v->pprime * v->pprime;
            const cplx rhs = 4.0 * v->p * v->p * v->p - 1.0;
            const double rel = std::abs(lhs - rhs) /
                               (1.0 + std::abs(v->p * v->p * v->p));
            worst = std::max(worst, rel);
        }
        REQUIRE(used == 1000);
        CHECK(worst < 1e-9);
    }
    SECTION("double periodicity, absolute on pole-cleared points") {
        // Adding a period in doubles perturbs the argument by ~eps|z|, which
        // wp'' amplifies near poles; keep 0.2 clearance so the absolute
        // bound is meaningful.
        for (int i = 0; i < 100; ++i) {
            const cplx z = oracles::test_point(22, i, 0.1, 4.0);
            const auto v = wp_pair(z, 0.2);
            if (!v) continue;
            const auto v1 = wp_pair(z + lat.omega1, 1e-3);
            const auto v2 = wp_pair(z + lat.omega2, 1e-3);
            REQUIRE(v1.has_value());
            REQUIRE(v2.has_value());
            CHECK(std::abs(v1->p - v->p) < 1e-9);
            CHECK(std::abs(v2->p - v->p) < 1e-9);
            CHECK(std::abs(v1->pprime - v->pprime) < 1e-9);
            CHECK(std::abs(v2->pprime - v->pprime) < 1e-9);
        }
    }
    SECTION("double periodicity, relative up to the pole guard") {
        for (int i = 0; i < 100; ++i) {
            const cplx z = oracles::test_point(22, i, 0.1, 4.0);
            const auto v = wp_pair(z, 1e-3);
            if (!v) continue;
            const auto v1 = wp_pair(z + lat.omega1, 1e-4);
            const auto v2 = wp_pair(z + lat.omega2, 1e-4);
            REQUIRE(v1.has_value());
            REQUIRE(v2.has_value());
            CHECK(std::abs(v1->p - v->p) <= 1e-9 * std::max(1.0, std::abs(v->p)));
            CHECK(std::abs(v2->p - v->p) <= 1e-9 * std::max(1.0, std::abs(v->p)));
            CHECK(std::abs(v1->pprime - v->pprime) <= 1e-9 * std::max(1.0, std::abs(v->pprime)));
            CHECK(std::abs(v2->pprime - v->pprime) <= 1e-9 * std::max(1.0, std::abs(v->pprime)));
        }
    }
    SECTION("parity: wp even, wp' odd") {
        for (int i = 0; i < 100; ++i) {
            const cplx z = oracles::test_point(23, i, 0.2, 5.0);
            const auto v = wp_pair(z, 1e-3);
            const auto w = wp_pair(-z, 1e-3);
            if (!v || !w) continue;
            CHECK(std::abs(w->p - v->p) <= 1e-10 * std::max(1.0, std::abs(v->p)));
            CHECK(std::abs(w->pprime + v->pprime) <=
                  1e-10 * std::max(1.0, std::abs(v->pprime)));
        }
    }
    SECTION("second derivative wp'' = 6 wp^2 by finite differences") {
        for (int i = 0; i < 50; ++i) {
            const cplx z = oracles::test_point(24, i, 0.3, 3.0);
            const auto v = wp_pair(z, 0.25);  // stay well away from poles
            if (!v) continue;
            const auto fd = oracles::fd_derivative(
                [](cplx w) -> std::optional<cplx> { return wp_prime(w); }, z, 1e-2);
            REQUIRE(fd.has_value());
            const cplx expected = 6.0 * v->p * v->p;
            CHECK(std::abs(*fd - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("wp zeros") {
    const Lattice& lat = equianharmonic_lattice();
    const auto& zeros = wp_zeros();

    SECTION("exactly two per cell, at the triangle centroids") {
        const cplx centroid = (lat.omega1 + lat.omega2) / 3.0;
        CHECK(std::abs(zeros[0] - centroid) < 1e-9);
        CHECK(std::abs(zeros[1] - 2.0 * centroid) < 1e-9);
    }
    SECTION("(wp')^2 = -1 at each zero") {
        for (const cplx& z : zeros) {
            const auto v = wp_pair(z, 1e-9);
            REQUIRE(v.has_value());
            CHECK(std::abs(v->p) < 1e-10);
            CHECK(std::abs(v->pprime * v->pprime + 1.0) < 1e-8);
        }
    }
}

TEST_CASE("wp evaluation is deterministic") {
    const cplx z(0.7, 0.3);
    const auto a = wp_pair(z);
    const auto b = wp_pair(z);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->p == b->p);
    CHECK(a->pprime == b->pprime);
}
