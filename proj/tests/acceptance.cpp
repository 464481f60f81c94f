// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Run by ctest as `acceptance --cli <path-to-fermat-cli>`.

#include <sys/wait.h>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "fermat/fermat.hpp"
#include "oracles.hpp"

using namespace fermat;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

// ---- criterion 1: elliptic differential equation --------------------------

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const CounterRng rng{101};
    double worst = 0.0;
    int used = 0;
    for (std::uint64_t i = 0; used < 1000 && i < 100000; ++i) {
        const cplx z = rng.annulus(i, 0.0, 9.0);
        const auto v = wp_pair(z, 1e-3);
        if (!v) continue;
        ++used;
        const cplx lhs = v->pprime * v->pprime;
        const cplx rhs = 4.0 * v->p * v->p * v->p - 1.0;
        const double rel = std::abs(lhs - rhs) / (1.0 + std::abs(v->p * v->p * v->p));
        worst = std::max(worst, rel);
    }
    const double secs = seconds_since(t0);
    const bool ok = used == 1000 && worst < 1e-9 && secs < 5.0;
    report(1, "elliptic identity (wp')^2 = 4wp^3 - 1",
           ok, fmt("maxRel=%.3g < 1e-9 over %d points, %.2fs < 5s", worst, used, secs));
}

// ---- criterion 2: Prop 1(B) unit identity ---------------------------------

void criterion2() {
    const Expr z = Expr::variable();
    const SamplePlan plan{0.1, 3.0, 1000, 202, 1e-6};
    double worst = 0.0;
    bool ok = true;
    for (int k = -1; k <= 1; ++k) {
        const cplx eta = std::polar(1.0, 2.0 * M_PI * k / 3.0);
        const auto [f, g] = prop1_unit_pair(3, z, eta);
        const auto rep = residual_unit(f, g, 3, plan, 1e-9);
        worst = std::max(worst, rep.max_rel);
        ok = ok && rep.pass;
    }
    report(2, "Prop 1(B) f^3 + g^3 = 1 for each cube root of unity",
           ok, fmt("maxRel=%.3g < 1e-9, 1000 points x 3 etas", worst));
}

// ---- criterion 3: Theorem 2 families ---------------------------------------

void criterion3() {
    const SamplePlan plan{0.5, 3.0, 500, 303, 1e-6};
    double worst = 0.0;
    int cases = 0;
    bool ok = true;
    auto run = [&](const FamilySpec& spec) {
        const auto fam = generate(spec);
        const auto rep = residual_for(fam, plan, 1e-10);
        worst = std::max(worst, rep.max_rel);
        ok = ok && rep.pass;
        ++cases;
    };

    // (A) n = 1, alpha in {0, 1, -1, 2i}; alpha = -1 is the degenerate branch
    for (const cplx alpha : {cplx(0.0), cplx(1.0), cplx(0.0, 2.0)}) {
        FamilySpec s;
        s.kind = FamilyKind::Thm2A;
        s.alpha = alpha;
        s.beta = cplx(0.3, -0.2);
        s.a = 5.0;
        run(s);
    }
    {
        FamilySpec s;
        s.kind = FamilyKind::Thm2ADegenerate;
        s.beta = cplx(0.3, -0.2);
        s.a = 5.0;
        run(s);
    }
    // (B) both branches: trigonometric (alpha = 0) and scaled exponential n = 2
    {
        FamilySpec s;
        s.kind = FamilyKind::Thm2BTrig;
        s.beta = cplx(0.4, 0.1);
        s.b = cplx(0.7, 0.1);
        run(s);
    }
    {
        const auto roots = admissible_scale_ode(2, 1.0);
        for (int idx = 0; idx < int(roots.roots.size()); ++idx) {
            FamilySpec s;
            s.kind = FamilyKind::Thm2ScaledExp;
            s.n = 2;
            s.alpha = 1.0;
            s.beta = cplx(0.0, 0.3);
            s.root_index = idx;
            run(s);
        }
    }
    // (C) n in {3,4,5}, every admissible d
    for (int n : {3, 4, 5}) {
        const cplx alpha(2.0, 1.0);
        const auto roots = admissible_scale_ode(n, alpha);
        for (int idx = 0; idx < int(roots.roots.size()); ++idx) {
            FamilySpec s;
            s.kind = FamilyKind::Thm2ScaledExp;
            s.n = n;
            s.alpha = alpha;
            s.beta = cplx(0.1, 0.0);
            s.root_index = idx;
            run(s);
        }
    }
    report(3, "Theorem 2 families solve the differential equation",
           ok, fmt("maxRel=%.3g < 1e-10 across %d cases, 500 points each", worst, cases));
}

// ---- criterion 4: degenerate-alpha detection --------------------------------

void criterion4(const std::string& cli) {
    const auto ode = admissible_scale_ode(2, cplx(0.0, 2.0));
    const auto diff = admissible_scale_diff(2, 1.0, cplx(0.0, M_PI));  // e^{alpha c} = -1
    bool ok = ode.degenerate && ode.roots.empty() && diff.degenerate && diff.roots.empty();
    std::string detail = fmt("ode(2,2i) empty=%d, diff(e^{ac}=-1) empty=%d",
                             int(ode.roots.empty()), int(diff.roots.empty()));
    if (cli.empty()) {
        ok = false;
        detail += ", CLI path not provided";
    } else {
        const std::string dir = "/tmp/fermat-acceptance";
        if (std::system(("mkdir -p " + dir).c_str()) != 0) {
            report(4, "degenerate scale equations", false, "cannot create temp dir");
            return;
        }
        {
            std::ofstream out(dir + "/degenerate_ode.json");
            out << "{\"kind\":\"Thm2_scaledExp\",\"n\":2,\"alpha\":[0,2]}\n";
        }
        {
            std::ofstream out(dir + "/degenerate_diff.json");
            out << "{\"kind\":\"DiffTrivial\",\"n\":2,\"alpha\":1,\"c\":[0,3.14159265358979312]}\n";
        }
        const int rc1 = run_cli(cli, "verify --spec " + dir + "/degenerate_ode.json");
        const int rc2 = run_cli(cli, "verify --spec " + dir + "/degenerate_diff.json");
        ok = ok && rc1 == 2 && rc2 == 2;
        detail += fmt(", CLI exits %d and %d (want 2)", rc1, rc2);
    }
    report(4, "degenerate scale equations are empty and the CLI exits 2", ok, detail);
}

// ---- criterion 5: Examples 4, 5, 6 -----------------------------------------

void criterion5() {
    bool ok = true;
    double worst4 = 0.0, worst56 = 0.0;
    {
        FamilySpec s;
        s.kind = FamilyKind::Example4;
        s.alpha = 2.0;
        s.beta = cplx(0.3, 0.1);
        const auto fam = generate(s);
        const auto rep = residual_for(fam, {0.05, 2.0, 500, 505, 1e-6}, 1e-8);
        worst4 = rep.max_rel;
        ok = ok && rep.pass;
    }
    auto run56 = [&](FamilyKind kind, cplx alpha, cplx beta) {
        FamilySpec s;
        s.kind = kind;
        s.alpha = alpha;
        s.beta = beta;
        const auto fam = generate(s);
        const auto rep = residual_for(fam, {0.05, 3.0, 500, 506, 1e-6}, 1e-10);
        worst56 = std::max(worst56, rep.max_rel);
        ok = ok && rep.pass;
    };
    run56(FamilyKind::Example5a, cplx(0.0, 4.0), cplx(0.2, 0.0));
    run56(FamilyKind::Example5b, cplx(0.0, 4.0), cplx(0.0, 0.0));
    run56(FamilyKind::Example6a, cplx(2.0, 0.0), cplx(0.0, 0.1));
    run56(FamilyKind::Example6b, cplx(2.0, 0.0), cplx(0.0, 0.0));
    report(5, "Examples 4-6 solve their difference equations",
           ok, fmt("Ex4 maxRel=%.3g < 1e-8; Ex5-6 maxRel=%.3g < 1e-10", worst4, worst56));
}

// ---- criterion 6: growth of e^z + CSV reproducibility -----------------------

void criterion6() {
    const Expr f = Expr::exp(Expr::variable());
    const std::vector<double> radii = {20.0, 50.0, 100.0};
    const auto curve = characteristic(f, PoleEnumerator::no_poles(), radii);
    bool ok = true;
    double worst = 0.0;
    for (const auto& rec : curve) {
        const double dev = std::abs(rec.T * M_PI / rec.r - 1.0);
        worst = std::max(worst, dev);
        ok = ok && dev < 0.02;
    }
    const auto curve2 = characteristic(f, PoleEnumerator::no_poles(), radii);
    const bool reproducible = growth_curve_csv(curve) == growth_curve_csv(curve2);
    ok = ok && reproducible;
    report(6, "T(r, e^z) ~ r/pi and the CSV is byte-reproducible",
           ok, fmt("max |T pi/r - 1| = %.4f < 0.02, reproducible=%d", worst, int(reproducible)));
}

// ---- criterion 7: growth of wp ----------------------------------------------

void criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    const Lattice& lat = equianharmonic_lattice();
    const double w1 = std::abs(lat.omega1);
    std::vector<double> radii;
    for (int i = 0; i < 5; ++i) radii.push_back((10.0 + 15.0 * i / 4.0) * w1);
    const auto curve =
        characteristic(Expr::wp(Expr::variable()), PoleEnumerator::lattice_double_poles(), radii);
    bool ok = true;
    double worst = 0.0;
    for (const auto& rec : curve) {
        const double dev = std::abs(rec.T * lat.area / (M_PI * rec.r * rec.r) - 1.0);
        worst = std::max(worst, dev);
        ok = ok && dev < 0.05;
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 60.0;
    report(7, "T(r, wp) ~ pi r^2 / A on [10|w1|, 25|w1|]",
           ok, fmt("max |T A/(pi r^2) - 1| = %.4f < 0.05 at 5 radii, %.1fs < 60s", worst, secs));
}

// ---- criterion 8: order estimates -------------------------------------------

void criterion8() {
    const Expr z = Expr::variable();
    bool ok = true;
    std::string detail;
    {
        std::vector<double> radii;
        for (int i = 0; i < 12; ++i) radii.push_back(5.0 * std::pow(20.0, i / 11.0));
        const auto est =
            order_estimate(characteristic(Expr::exp(z), PoleEnumerator::no_poles(), radii));
        ok = ok && est.rho > 0.97 && est.rho < 1.03;
        detail += fmt("rho(e^z)=%.4f", est.rho);
    }
    {
        const double w1 = std::abs(equianharmonic_lattice().omega1);
        std::vector<double> radii;
        for (int i = 0; i < 10; ++i) radii.push_back((5.0 + 20.0 * i / 9.0) * w1);
        const auto est = order_estimate(
            characteristic(Expr::wp(z), PoleEnumerator::lattice_double_poles(), radii));
        ok = ok && est.rho > 1.9 && est.rho < 2.1;
        detail += fmt(", rho(wp)=%.4f", est.rho);
    }
    {
        std::vector<double> radii;
        for (int i = 0; i < 8; ++i) radii.push_back(2.0 + 6.0 * i / 7.0);
        const auto pe = PoleEnumerator::preimage_exp(1.0, 0.0, {cplx(0.0)}, 2);
        const auto est = order_estimate(characteristic(Expr::wp(Expr::exp(z)), pe, radii));
        const bool increasing = est.super_polynomial;
        const double final_slope = est.local_slopes.back();
        ok = ok && increasing && final_slope > 3.0;
        detail += fmt(", wp(e^z) slopes increasing=%d final=%.2f > 3", int(increasing),
                      final_slope);
    }
    report(8, "order estimates: e^z, wp, and super-polynomial wp(e^z)", ok, detail);
}

// ---- criterion 9: identity checks and expected-fail fixtures -----------------

void criterion9() {
    const Expr z = Expr::variable();
    const Expr h = Expr::exp(z);
    const cplx c(0.0, M_PI);
    const cplx alpha = 2.0;
    bool ok = true;
    const cplx eta = std::exp(alpha * c / 3.0);
    const auto r6 = check_eq6(h, c, eta, alpha, {0.05, 2.0, 400, 909, 1e-6}, 1e-8, 0);
    ok = ok && r6.pass;
    const Expr f = eq5_first_form(h, alpha, 0.0);
    const auto r7 = check_eq7(f, h, alpha, 0.0, {0.05, 2.0, 400, 910, 1e-6}, 1e-8);
    ok = ok && r7.pass;

    // documented expected-fail fixtures must miss by >= 1e6 x tolerance
    const auto bad6 = check_eq6(z, equianharmonic_lattice().omega1, 1.0, 0.0,
                                {0.3, 2.5, 300, 911, 1e-6}, 1e-8, 0);
    const auto bad7 = check_eq7(Expr::exp(z), z, 0.0, 0.0, {0.3, 2.5, 300, 912, 1e-6}, 1e-8);
    ok = ok && !bad6.pass && bad6.max_rel >= 1e-8 * 1e6;
    ok = ok && !bad7.pass && bad7.max_rel >= 1e-8 * 1e6;
    report(9, "shift and rearrangement identities pass; fixtures fail hugely",
           ok,
           fmt("eq6=%.3g eq7=%.3g < 1e-8; fails at %.3g and %.3g >= 1e-2", r6.max_rel,
               r7.max_rel, bad6.max_rel, bad7.max_rel));
}

// ---- criterion 10: differentiation against finite differences ---------------

void criterion10() {
    const Expr z = Expr::variable();
    struct Case {
        const char* name;
        Expr e;
        double rmin, rmax;
    };
    const std::vector<Case> cases = {
        {"constant", Expr::constant(cplx(2.5, -1.0)), 0.1, 3.0},
        {"variable", z, 0.1, 3.0},
        {"add", Expr::add(Expr::exp(z), Expr::sin(z)), 0.1, 3.0},
        {"mul", Expr::mul(Expr::sin(z), Expr::exp(z)), 0.1, 3.0},
        {"pow+", Expr::pow(Expr::add(Expr::constant(2.0), Expr::sin(z)), 3), 0.1, 3.0},
        {"pow-", Expr::pow(Expr::add(Expr::constant(3.0), Expr::sin(z)), -2), 0.1, 3.0},
        {"exp", Expr::exp(Expr::mul(Expr::constant(cplx(0.5, 1.0)), z)), 0.1, 3.0},
        {"sin", Expr::sin(Expr::mul(Expr::constant(cplx(0.0, 0.7)), z)), 0.1, 3.0},
        {"cos", Expr::cos(Expr::add(z, Expr::constant(cplx(0.3, 0.2)))), 0.1, 3.0},
        {"poly", Expr::polynomial({cplx(1.0), cplx(0.0, 2.0), cplx(0.5), cplx(-0.25)}), 0.1, 3.0},
        {"wp", Expr::wp(Expr::mul(Expr::constant(0.37), z)), 0.4, 2.4},
        {"wpp", Expr::wp_prime(Expr::mul(Expr::constant(0.31), z)), 0.4, 2.4},
        {"shift", Expr::shift(Expr::sin(z), cplx(0.4, -0.9)), 0.1, 3.0},
    };
    bool ok = true;
    double worst = 0.0;
    for (const auto& c : cases) {
        const Expr d = differentiate(c.e);
        const CounterRng rng{1010};
        int used = 0;
        for (std::uint64_t i = 0; used < 100 && i < 4000; ++i) {
            const cplx z0 = rng.annulus(i, c.rmin, c.rmax);
            const auto exact = eval(d, z0);
            if (!exact) continue;
            const auto fd = oracles::fd_derivative(
                [&](cplx w) -> std::optional<cplx> { return eval(c.e, w); }, z0, 1e-2);
            if (!fd) continue;
            ++used;
            const double rel = std::abs(*fd - *exact) / std::max(1.0, std::abs(*exact));
            worst = std::max(worst, rel);
            ok = ok && rel < 1e-7;
        }
        ok = ok && used == 100;
    }

    // wp'' = 6 wp^2 with the derivative of wp' measured by finite differences
    double worst2 = 0.0;
    {
        const CounterRng rng{1011};
        int used = 0;
        for (std::uint64_t i = 0; used < 100 && i < 8000; ++i) {
            const cplx z0 = rng.annulus(i, 0.4, 2.4);
            if (std::abs(reduce(z0).reduced) < 0.45) continue;
            const auto v = wp_pair(z0);
            if (!v) continue;
            const auto fd = oracles::fd_derivative(
                [](cplx w) -> std::optional<cplx> { return wp_prime(w); }, z0, 5e-3);
            if (!fd) continue;
            ++used;
            const cplx expected = 6.0 * v->p * v->p;
            const double rel = std::abs(*fd - expected) / std::max(1.0, std::abs(expected));
            worst2 = std::max(worst2, rel);
            ok = ok && rel < 1e-8;
        }
        ok = ok && used == 100;
    }
    report(10, "differentiation agrees with Richardson finite differences",
           ok, fmt("node types worst=%.3g < 1e-7; wp''=6wp^2 worst=%.3g < 1e-8", worst, worst2));
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }
    criterion1();
    criterion2();
    criterion3();
    criterion4(cli);
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
