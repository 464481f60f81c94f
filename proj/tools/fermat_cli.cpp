// Command-line front end: family generation, residual verification, and
// growth measurement with machine-readable outputs.
//
// Exit codes: 0 success (and pass=true for checks), 1 failed check or
// numeric failure, 2 usage or constraint error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fermat/fermat.hpp"
#include "fermat/json_io.hpp"

namespace {

using namespace fermat;

std::string read_source(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FamilySpec load_spec(const std::string& path) {
    json j;
    try {
        j = json::parse(read_source(path));
    } catch (const json::exception& e) {
        throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
    }
    return family_spec_from_json(j);
}

std::vector<double> parse_radii(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double r = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad radius: " + item);
        out.push_back(r);
    }
    if (out.empty()) throw std::invalid_argument("no radii given");
    return out;
}

struct ResolvedFn {
    Expr f;
    PoleEnumerator pe;
    std::string description;
    ResolvedFn(Expr fn, PoleEnumerator p, std::string d)
        : f(std::move(fn)), pe(std::move(p)), description(std::move(d)) {}
};

// --fn accepts a few named functions, "family:<spec.json>", or a raw
// s-expression (which must be entire unless it is a recognized wp form).
ResolvedFn resolve_fn(const std::string& s, double r_max) {
    const Expr z = Expr::variable();
    if (s == "z") return {z, PoleEnumerator::no_poles(), "z"};
    if (s == "exp") return {Expr::exp(z), PoleEnumerator::no_poles(), "exp(z)"};
    if (s == "wp") {
        return {Expr::wp(z), PoleEnumerator::lattice_double_poles(), "wp(z)"};
    }
    if (s == "wp-exp") {
        return {Expr::wp(Expr::exp(z)),
                PoleEnumerator::preimage_exp(1.0, 0.0, {cplx(0.0)}, 2), "wp(exp(z))"};
    }
    if (s.rfind("family:", 0) == 0) {
        const FamilySpec spec = load_spec(s.substr(7));
        GeneratedFamily fam = generate(spec);
        PoleEnumerator pe = pole_enumerator_for(fam, r_max);
        return {std::move(fam.f), std::move(pe),
                std::string("family ") + family_kind_name(spec.kind)};
    }
    Expr f = parse_expr(s);
    PoleEnumerator pe = pole_enumerator_for_expr(f);
    return {std::move(f), std::move(pe), to_sexpr(f)};
}

json mode_json(const EquationMode& mode) {
    json j;
    switch (mode.kind) {
        case EquationMode::Kind::Ode: j["kind"] = "ode"; break;
        case EquationMode::Kind::Difference: j["kind"] = "difference"; break;
        case EquationMode::Kind::Unit: j["kind"] = "unit"; break;
    }
    j["n"] = mode.n;
    if (mode.kind == EquationMode::Kind::Difference) j["c"] = cplx_to_json(mode.c);
    return j;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_lattice_info() {
    print_json(lattice_info_json());
    return 0;
}

int cmd_family_list() {
    for (FamilyKind kind : all_family_kinds()) {
        std::printf("%-18s %s\n", family_kind_name(kind), family_params_doc(kind));
    }
    return 0;
}

int cmd_family_gen(const std::string& spec_path) {
    const FamilySpec spec = load_spec(spec_path);
    const GeneratedFamily fam = generate(spec);
    json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = family_kind_name(fam.spec.kind);
    j["mode"] = mode_json(fam.mode);
    j["f"] = to_sexpr(fam.f);
    if (fam.partner) j["partner"] = to_sexpr(*fam.partner);
    j["spec"] = to_json(fam.spec);
    print_json(j);
    return 0;
}

int cmd_verify(const std::string& spec_path, const SamplePlan& plan, double tol) {
    const FamilySpec spec = load_spec(spec_path);
    const GeneratedFamily fam = generate(spec);
    const ResidualReport rep = residual_for(fam, plan, tol);
    json j = to_json(rep, plan);
    j["config"] = {{"spec", spec_path}, {"kind", family_kind_name(fam.spec.kind)},
                   {"mode", mode_json(fam.mode)}, {"tol", round15(tol)}};
    print_json(j);
    return rep.pass ? 0 : 1;
}

int cmd_eq6(const std::string& h_text, const std::string& c_text, const std::string& eta_text,
            const std::string& alpha_text, int root_index, const SamplePlan& plan, double tol) {
    const Expr h = parse_expr(h_text);
    const cplx c = parse_cplx(c_text);
    const cplx eta = parse_cplx(eta_text);
    const cplx alpha = parse_cplx(alpha_text);
    const ResidualReport rep = check_eq6(h, c, eta, alpha, plan, tol, root_index);
    json j = to_json(rep, plan);
    j["config"] = {{"h", h_text}, {"c", c_text}, {"eta", eta_text},
                   {"alpha", alpha_text}, {"rootIndex", root_index}, {"tol", round15(tol)}};
    print_json(j);
    return rep.pass ? 0 : 1;
}

int cmd_eq7(const std::string& h_text, const std::string& f_text, const std::string& alpha_text,
            const std::string& beta_text, const SamplePlan& plan, double tol) {
    const Expr h = parse_expr(h_text);
    const cplx alpha = parse_cplx(alpha_text);
    const cplx beta = parse_cplx(beta_text);
    const Expr f = f_text.empty() ? eq5_first_form(h, alpha, beta) : parse_expr(f_text);
    const ResidualReport rep = check_eq7(f, h, alpha, beta, plan, tol);
    json j = to_json(rep, plan);
    j["config"] = {{"h", h_text}, {"f", f_text.empty() ? to_sexpr(f) : f_text},
                   {"alpha", alpha_text}, {"beta", beta_text}, {"tol", round15(tol)}};
    print_json(j);
    return rep.pass ? 0 : 1;
}

int cmd_nevanlinna(const std::string& fn, const std::string& radii_text, int quad_order,
                   std::uint64_t seed) {
    const std::vector<double> radii = parse_radii(radii_text);
    const ResolvedFn rf = resolve_fn(fn, radii.back());
    const GrowthCurve curve = characteristic(rf.f, rf.pe, radii, quad_order);
    json config = {{"fn", fn}, {"resolved", rf.description}, {"radii", radii_text},
                   {"quadOrder", quad_order}, {"seed", seed}};
    std::cout << "# " << config.dump() << "\n" << growth_curve_csv(curve);
    return 0;
}

int cmd_order(const std::string& fn, const std::string& radii_text, int quad_order,
              std::uint64_t seed) {
    const std::vector<double> radii = parse_radii(radii_text);
    const ResolvedFn rf = resolve_fn(fn, radii.back());
    const GrowthCurve curve = characteristic(rf.f, rf.pe, radii, quad_order);
    const OrderEstimate est = order_estimate(curve);
    json j = to_json(est, curve);
    j["config"] = {{"fn", fn}, {"resolved", rf.description}, {"radii", radii_text},
                   {"quadOrder", quad_order}, {"seed", seed}};
    print_json(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solution families, residual certification, and Nevanlinna growth "
                 "measurement for Fermat-type functional equations with exponential "
                 "right-hand side"};
    app.require_subcommand(1);

    auto* sc_lattice = app.add_subcommand("lattice-info",
                                          "print the equianharmonic lattice constants");

    auto* sc_family = app.add_subcommand("family", "solution family operations");
    sc_family->require_subcommand(1);
    auto* sc_family_list = sc_family->add_subcommand("list", "list family kinds");
    auto* sc_family_gen = sc_family->add_subcommand("gen", "generate a family from a JSON spec");
    std::string gen_spec;
    sc_family_gen->add_option("--spec", gen_spec, "spec JSON file, or - for stdin")->required();

    SamplePlan plan;
    double tol = 1e-9;
    auto add_plan_flags = [&](CLI::App* sc) {
        sc->add_option("--rmin", plan.r_min, "annulus inner radius");
        sc->add_option("--rmax", plan.r_max, "annulus outer radius");
        sc->add_option("--count", plan.count, "sample count");
        sc->add_option("--seed", plan.seed, "sampling seed");
        sc->add_option("--guard", plan.pole_guard, "pole guard distance");
        sc->add_option("--tol", tol, "pass/fail tolerance on maxRel");
    };

    auto* sc_verify = app.add_subcommand("verify", "residual-check a family spec");
    std::string verify_spec;
    sc_verify->add_option("--spec", verify_spec, "spec JSON file, or - for stdin")->required();
    add_plan_flags(sc_verify);

    auto* sc_eq6 = app.add_subcommand("eq6", "shift-consistency identity check");
    sc_eq6->set_help_flag("--help", "print help");  // frees -h for the h function
    std::string eq6_h, eq6_c, eq6_eta = "1", eq6_alpha = "0";
    int eq6_root = 0;
    sc_eq6->add_option("--h", eq6_h, "inner function h, s-expression")->required();
    sc_eq6->add_option("--c", eq6_c, "shift c (complex, nonzero)")->required();
    sc_eq6->add_option("--eta", eq6_eta, "cube root of unity");
    sc_eq6->add_option("--alpha", eq6_alpha, "alpha (complex)");
    sc_eq6->add_option("--root-index", eq6_root, "cube-root branch selector 0..2");
    add_plan_flags(sc_eq6);

    auto* sc_eq7 = app.add_subcommand("eq7", "cubic rearrangement identity check");
    sc_eq7->set_help_flag("--help", "print help");
    std::string eq7_h, eq7_f, eq7_alpha = "0", eq7_beta = "0";
    sc_eq7->add_option("--h", eq7_h, "inner function h, s-expression")->required();
    sc_eq7->add_option("--f", eq7_f, "candidate f (defaults to the Eq-5 first form)");
    sc_eq7->add_option("--alpha", eq7_alpha, "alpha (complex)");
    sc_eq7->add_option("--beta", eq7_beta, "beta (complex)");
    add_plan_flags(sc_eq7);

    auto* sc_nev = app.add_subcommand("nevanlinna", "growth curve CSV: r,m,N,T");
    std::string nev_fn, nev_radii;
    int quad_order = 256;
    std::uint64_t nev_seed = 0;
    sc_nev->add_option("--fn", nev_fn, "z | exp | wp | wp-exp | family:<spec.json> | s-expression")
        ->required();
    sc_nev->add_option("--radii", nev_radii, "comma-separated increasing radii")->required();
    sc_nev->add_option("--quad-order", quad_order, "initial quadrature node count");
    sc_nev->add_option("--seed", nev_seed, "echoed in the report (output is deterministic)");

    auto* sc_order = app.add_subcommand("order", "order-of-growth estimate");
    std::string ord_fn, ord_radii;
    int ord_quad = 256;
    std::uint64_t ord_seed = 0;
    sc_order->add_option("--fn", ord_fn, "z | exp | wp | wp-exp | family:<spec.json> | s-expression")
        ->required();
    sc_order->add_option("--radii", ord_radii, "comma-separated increasing radii (>= 8)")
        ->required();
    sc_order->add_option("--quad-order", ord_quad, "initial quadrature node count");
    sc_order->add_option("--seed", ord_seed, "echoed in the report (output is deterministic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc_lattice->parsed()) return cmd_lattice_info();
        if (sc_family_list->parsed()) return cmd_family_list();
        if (sc_family_gen->parsed()) return cmd_family_gen(gen_spec);
        if (sc_verify->parsed()) return cmd_verify(verify_spec, plan, tol);
        if (sc_eq6->parsed()) {
            return cmd_eq6(eq6_h, eq6_c, eq6_eta, eq6_alpha, eq6_root, plan, tol);
        }
        if (sc_eq7->parsed()) return cmd_eq7(eq7_h, eq7_f, eq7_alpha, eq7_beta, plan, tol);
        if (sc_nev->parsed()) return cmd_nevanlinna(nev_fn, nev_radii, quad_order, nev_seed);
        if (sc_order->parsed()) return cmd_order(ord_fn, ord_radii, ord_quad, ord_seed);
    } catch (const DegeneracyError& e) {
        std::cerr << "degenerate parameters: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
