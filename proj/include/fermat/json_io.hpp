#pragma once

// JSON bindings for the file formats the CLI speaks: family specs in,
// residual / growth / order reports out. All documents carry "schema": 1,
// and every number is rounded to 15 significant digits before emission so
// reports are byte-identical across runs.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "fermat/families.hpp"
#include "fermat/nevanlinna.hpp"
#include "fermat/sexpr.hpp"
#include "fermat/verify.hpp"

namespace fermat {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Round through a 15-significant-digit decimal representation.
inline double round15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

inline json cplx_to_json(cplx v) {
    return json::array({round15(v.real()), round15(v.imag())});
}

/// Accepts a plain number, an [re, im] pair, or a complex literal string.
inline cplx cplx_from_json(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_string()) return parse_cplx(j.get<std::string>());
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return cplx(j[0].get<double>(), j[1].get<double>());
    }
    throw std::invalid_argument("expected a complex value (number, [re, im], or \"a+bi\")");
}

inline json to_json(const FamilySpec& spec) {
    json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = family_kind_name(spec.kind);
    j["n"] = spec.n;
    j["alpha"] = cplx_to_json(spec.alpha);
    j["beta"] = cplx_to_json(spec.beta);
    j["c"] = cplx_to_json(spec.c);
    j["a"] = cplx_to_json(spec.a);
    j["b"] = cplx_to_json(spec.b);
    j["eta"] = cplx_to_json(spec.eta);
    if (spec.has_d) j["d"] = cplx_to_json(spec.d);
    j["rootIndex"] = spec.root_index;
    if (spec.kind == FamilyKind::AntiPeriodicN1) {
        j["form"] = spec.form == AntiPeriodicForm::ScaledExp ? "dexp" : "zexp";
    }
    if (spec.h) j["h"] = to_sexpr(*spec.h);
    if (spec.delta) j["delta"] = to_sexpr(*spec.delta);
    return j;
}

inline FamilySpec family_spec_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("family spec: expected a JSON object");
    if (j.contains("schema") && j["schema"].get<int>() != kSchemaVersion) {
        throw std::invalid_argument("family spec: unsupported schema version");
    }
    if (!j.contains("kind")) throw std::invalid_argument("family spec: missing \"kind\"");
    FamilySpec spec;
    spec.kind = family_kind_from_name(j["kind"].get<std::string>());
    if (j.contains("n")) spec.n = j["n"].get<int>();
    if (j.contains("alpha")) spec.alpha = cplx_from_json(j["alpha"]);
    if (j.contains("beta")) spec.beta = cplx_from_json(j["beta"]);
    if (j.contains("c")) spec.c = cplx_from_json(j["c"]);
    if (j.contains("a")) spec.a = cplx_from_json(j["a"]);
    if (j.contains("b")) spec.b = cplx_from_json(j["b"]);
    if (j.contains("eta")) spec.eta = cplx_from_json(j["eta"]);
    if (j.contains("d")) {
        spec.d = cplx_from_json(j["d"]);
        spec.has_d = true;
    }
    if (j.contains("rootIndex")) spec.root_index = j["rootIndex"].get<int>();
    if (j.contains("form")) {
        const std::string form = j["form"].get<std::string>();
        if (form == "dexp") {
            spec.form = AntiPeriodicForm::ScaledExp;
        } else if (form == "zexp") {
            spec.form = AntiPeriodicForm::LinearExp;
        } else {
            throw std::invalid_argument("family spec: form must be \"dexp\" or \"zexp\"");
        }
    }
    if (j.contains("h")) spec.h = parse_expr(j["h"].get<std::string>());
    if (j.contains("delta")) spec.delta = parse_expr(j["delta"].get<std::string>());
    return spec;
}

inline json to_json(const SamplePlan& plan) {
    json j;
    j["rMin"] = round15(plan.r_min);
    j["rMax"] = round15(plan.r_max);
    j["count"] = plan.count;
    j["seed"] = plan.seed;
    j["poleGuard"] = round15(plan.pole_guard);
    return j;
}

inline json to_json(const ResidualReport& rep, const SamplePlan& plan) {
    json j;
    j["schema"] = kSchemaVersion;
    j["equation"] = rep.equation;
    j["samples"] = rep.samples;
    j["maxRel"] = round15(rep.max_rel);
    j["meanRel"] = round15(rep.mean_rel);
    j["worstPoint"] = cplx_to_json(rep.worst_point);
    j["tolerance"] = round15(rep.tolerance);
    j["pass"] = rep.pass;
    j["plan"] = to_json(plan);
    return j;
}

inline json to_json(const GrowthCurve& curve) {
    json rows = json::array();
    for (const GrowthRecord& rec : curve) {
        json row;
        row["r"] = round15(rec.r);
        row["m"] = round15(rec.m);
        row["N"] = round15(rec.N);
        row["T"] = round15(rec.T);
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const OrderEstimate& est, const GrowthCurve& curve) {
    json j;
    j["schema"] = kSchemaVersion;
    j["rho"] = round15(est.rho);
    j["sse"] = round15(est.sse);
    json slopes = json::array();
    for (double s : est.local_slopes) slopes.push_back(round15(s));
    j["localSlopes"] = slopes;
    j["superPolynomial"] = est.super_polynomial;
    j["pointsUsed"] = est.points_used;
    j["curve"] = to_json(curve);
    return j;
}

inline json lattice_info_json() {
    const Lattice& lat = equianharmonic_lattice();
    json j;
    j["schema"] = kSchemaVersion;
    j["omega1"] = cplx_to_json(lat.omega1);
    j["omega2"] = cplx_to_json(lat.omega2);
    j["area"] = round15(lat.area);
    j["e1"] = round15(lat.e1);
    j["omegaH"] = round15(lat.half_period);
    j["seriesTerms"] = wp_series_terms();
    const auto& zeros = wp_zeros();
    j["cellZeros"] = json::array({cplx_to_json(zeros[0]), cplx_to_json(zeros[1])});
    return j;
}

}  // namespace fermat
