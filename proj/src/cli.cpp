#include "mtrap/cli.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "mtrap/bonnet.hpp"
#include "mtrap/families.hpp"
#include "mtrap/framefield.hpp"
#include "mtrap/grid_io.hpp"
#include "mtrap/parallel.hpp"
#include "mtrap/surface.hpp"

namespace mtrap::cli {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotSpacelike:
        case ErrorKind::NotMarginallyTrapped:
        case ErrorKind::InconsistentFrameEquations:
        case ErrorKind::GaugeNotConstant:
            return kClassification;
        case ErrorKind::DegenerateType:
            return kDegenerate;
        case ErrorKind::CompatibilityViolated:
            return kIncompatible;
        default:
            return kFailure;
    }
}

// ------------------------------------------------------------ configuration

void RunConfig::validate() const {
    auto positive = [](double x, const char* what) {
        if (!(x > 0) || !std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
    };
    positive(classify_tol, "classify tolerance");
    positive(principal_tol, "principal tolerance");
    positive(canonical_tol, "canonical tolerance");
    positive(residual_tol, "residual tolerance");
    positive(compatibility_threshold, "compatibility threshold");
    positive(degenerate_tol, "degenerate tolerance");
    positive(solver_tol, "solver tolerance");
    positive(step, "step");
    positive(radius, "radius");
    if (source != "builtin" && source != "grid") throw Error(ErrorKind::InvalidArgument, "source must be builtin or grid");
    if (source == "grid" && surface_path.empty()) throw Error(ErrorKind::InvalidArgument, "grid source needs a surface file");
    if (nu < 2 || nv < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be at least 2x2");
    if (max_iterations < 1 || quadrature_nodes < 3) throw Error(ErrorKind::InvalidArgument, "invalid solver settings");
    if (domain) domain->validate();
    meridian.validate();
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        if (j.contains("surface")) {
            const auto& s = j.at("surface");
            c.source = s.value("source", c.source);
            c.builtin = s.value("builtin", c.builtin);
            c.parameters = s.value("parameters", c.parameters);
            c.surface_path = s.value("path", c.surface_path);
            c.radius = s.value("radius", c.radius);
            if (s.contains("domain")) {
                const auto d = s.at("domain").get<std::vector<double>>();
                if (d.size() != 4) throw Error(ErrorKind::InvalidArgument, "domain needs four numbers");
                c.domain = Rect{d[0], d[1], d[2], d[3]};
            }
            if (s.contains("meridian")) {
                const auto& m = s.at("meridian");
                c.meridian.a = m.value("a", c.meridian.a);
                c.meridian.b = m.value("b", c.meridian.b);
                c.meridian.c = m.value("c", c.meridian.c);
                c.meridian.branch = m.value("branch", c.meridian.branch);
                c.meridian.p = m.value("p", c.meridian.p);
            }
        }
        if (j.contains("grid")) {
            c.nu = j.at("grid").value("nu", c.nu);
            c.nv = j.at("grid").value("nv", c.nv);
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            c.classify_tol = t.value("classify", c.classify_tol);
            c.principal_tol = t.value("principal", c.principal_tol);
            c.canonical_tol = t.value("canonical", c.canonical_tol);
            c.residual_tol = t.value("residual", c.residual_tol);
            c.compatibility_threshold = t.value("compatibility", c.compatibility_threshold);
            c.degenerate_tol = t.value("degenerate", c.degenerate_tol);
        }
        if (j.contains("gauge")) {
            const auto& g = j.at("gauge");
            c.gauge = CanonicalGauge{g.at("u0").get<double>(), g.at("v0").get<double>(), g.value("c1", 0.0),
                                     g.value("c2", 0.0)};
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            c.max_iterations = s.value("max_iterations", c.max_iterations);
            c.solver_tol = s.value("tol", c.solver_tol);
            c.quadrature_nodes = s.value("quadrature_nodes", c.quadrature_nodes);
            c.step = s.value("step", c.step);
            c.seed = s.value("seed", c.seed);
        }
        if (j.contains("files")) {
            const auto& f = j.at("files");
            c.input = f.value("input", c.input);
            c.output = f.value("output", c.output);
            c.grid_output = f.value("grid_output", c.grid_output);
            c.report = f.value("report", c.report);
            c.field = f.value("field", c.field);
        }
        c.require_canonical = j.value("require_canonical", c.require_canonical);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("bad configuration: ") + e.what());
    }
    return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["surface"] = {{"source", c.source},
                    {"builtin", c.builtin},
                    {"parameters", c.parameters},
                    {"path", c.surface_path},
                    {"radius", c.radius},
                    {"meridian",
                     {{"a", c.meridian.a},
                      {"b", c.meridian.b},
                      {"c", c.meridian.c},
                      {"branch", c.meridian.branch},
                      {"p", c.meridian.p}}}};
    if (c.domain) j["surface"]["domain"] = {c.domain->u_min, c.domain->u_max, c.domain->v_min, c.domain->v_max};
    j["grid"] = {{"nu", c.nu}, {"nv", c.nv}};
    j["tolerances"] = {{"classify", c.classify_tol},   {"principal", c.principal_tol},
                       {"canonical", c.canonical_tol}, {"residual", c.residual_tol},
                       {"compatibility", c.compatibility_threshold}, {"degenerate", c.degenerate_tol}};
    if (c.gauge) j["gauge"] = {{"u0", c.gauge->u0}, {"v0", c.gauge->v0}, {"c1", c.gauge->c1}, {"c2", c.gauge->c2}};
    j["solver"] = {{"max_iterations", c.max_iterations},
                   {"tol", c.solver_tol},
                   {"quadrature_nodes", c.quadrature_nodes},
                   {"step", c.step},
                   {"seed", c.seed}};
    j["files"] = {{"input", c.input},   {"output", c.output}, {"grid_output", c.grid_output},
                  {"report", c.report}, {"field", c.field}};
    j["require_canonical"] = c.require_canonical;
    return j;
}

namespace {

// ------------------------------------------------------------ reports

// Ordered key/value report printed as "key: value" lines.
class Report {
public:
    void add(const std::string& key, bool v) { items_.emplace_back(key, v); }
    void add(const std::string& key, double v) { items_.emplace_back(key, v); }
    void add(const std::string& key, int v) { items_.emplace_back(key, v); }
    void add(const std::string& key, const std::string& v) { items_.emplace_back(key, v); }
    void add(const std::string& key, const char* v) { items_.emplace_back(key, std::string(v)); }

    void print(std::ostream& out) const {
        for (const auto& [k, v] : items_) {
            out << k << ": ";
            if (v.is_boolean())
                out << (v.get<bool>() ? "true" : "false");
            else if (v.is_number_float()) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.9g", v.get<double>());
                out << buf;
            } else if (v.is_string())
                out << v.get<std::string>();
            else
                out << v.dump();
            out << "\n";
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : items_) j[k] = v;
        return j;
    }

private:
    std::vector<std::pair<std::string, nlohmann::json>> items_;
};

void emit(const Report& r, const RunConfig& c, std::ostream& out) {
    r.print(out);
    if (!c.report.empty()) io::write_text_atomic(c.report, r.to_json().dump(1) + "\n");
}

std::string or_default(const std::string& s, const char* d) { return s.empty() ? std::string(d) : s; }

// ------------------------------------------------------------ surfaces

struct SurfaceSource {
    SurfacePatch patch;
    CanonicalGauge gauge;
    std::optional<double> u_anchor, v_anchor;
    std::string name;
};

CanonicalGauge corner_gauge(const Rect& r) { return {r.u_min, r.v_min, 0.0, 0.0}; }

SurfaceSource principal_meridian(const RunConfig& c) {
    SurfaceSource s;
    s.patch = meridian::principal_patch(c.meridian, c.domain.value_or(meridian::kPrincipalDomain));
    s.name = "meridian (principal parameters)";
    const Rect& d = s.patch.domain();
    if (c.gauge) {
        s.gauge = *c.gauge;
    } else if (c.meridian.is_default()) {
        // the example's gauge, re-based at the domain corner
        const auto t = meridian::transfer_gauge(meridian::ReferenceValues::example_gauge(), d.u_min, d.v_min);
        s.gauge = t.gauge;
        s.u_anchor = t.u_anchor;
        s.v_anchor = t.v_anchor;
    } else {
        s.gauge = corner_gauge(d);
    }
    return s;
}

CanonicalOptions canonical_options(const RunConfig& c, const SurfaceSource* s = nullptr) {
    CanonicalOptions o;
    o.nodes = c.quadrature_nodes;
    o.certify_tol = c.canonical_tol;
    o.degenerate_tol = c.degenerate_tol;
    if (s) {
        o.u_anchor = s->u_anchor;
        o.v_anchor = s->v_anchor;
    }
    return o;
}

SurfaceSource make_surface(const RunConfig& c) {
    SurfaceSource s;
    if (c.source == "grid") {
        s.patch = io::surface_from_grid(io::read_grid(c.surface_path));
        if (c.domain) s.patch = s.patch.with_domain(*c.domain);
        s.gauge = c.gauge.value_or(corner_gauge(s.patch.domain()));
        s.name = "grid file " + c.surface_path;
        return s;
    }
    if (c.builtin == "meridian") {
        if (c.parameters == "original") {
            s.patch = meridian::build_patch(c.meridian, c.domain.value_or(meridian::kOriginalDomain));
            s.gauge = c.gauge.value_or(corner_gauge(s.patch.domain()));
            s.name = "meridian (original parameters)";
            return s;
        }
        if (c.parameters == "principal") return principal_meridian(c);
        if (c.parameters == "canonical") {
            const SurfaceSource p = principal_meridian(c);
            CanonicalResult r = canonicalize(p.patch, p.gauge, canonical_options(c, &p));
            s.patch = std::move(r.patch);
            s.gauge = r.gauge;
            s.name = "meridian (canonical parameters)";
            return s;
        }
        throw Error(ErrorKind::InvalidArgument, "parameters must be original, principal or canonical");
    }
    if (c.builtin == "light_cone") {
        s.patch = families::light_cone_torus(c.radius, c.domain.value_or(Rect{-1, 1, -1, 1}));
        const double k = families::light_cone_gauge_constant(c.radius);
        const Rect& d = s.patch.domain();
        s.gauge = c.gauge.value_or(CanonicalGauge{d.u_min, d.v_min, k, k});
        s.name = "light cone torus";
        return s;
    }
    if (c.builtin == "plane") {
        s.patch = families::plane(c.domain.value_or(Rect{0, 1, 0, 1}));
        s.name = "plane";
    } else if (c.builtin == "sphere") {
        s.patch = families::euclidean_sphere(c.radius, c.domain.value_or(Rect{0.5, 2.5, 0.0, 3.0}));
        s.name = "sphere";
    } else if (c.builtin == "timelike_plane") {
        s.patch = families::timelike_plane(c.domain.value_or(Rect{0, 1, 0, 1}));
        s.name = "timelike plane";
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown builtin surface '" + c.builtin + "'");
    }
    s.gauge = c.gauge.value_or(corner_gauge(s.patch.domain()));
    return s;
}

// ------------------------------------------------------------ commands

int cmd_analyze(const RunConfig& c, std::ostream& out) {
    const SurfaceSource s = make_surface(c);
    const GridSpec grid(s.patch.domain(), c.nu, c.nv);
    const Classification cls = classify(s.patch, grid, c.classify_tol);
    bool principal = false;
    try {
        principal = cls.spacelike && principal_report(s.patch, grid, c.principal_tol).principal;
    } catch (const Error&) {
        principal = false;
    }
    io::Grid2D g(grid);
    for (const char* n : {"E", "F", "G"}) g.add(n);
    const std::size_t N = grid.size();
    std::vector<char> lmn_ok(N, 1);
    Field2D L(grid), M(grid), Nn(grid);
    parallel_for(N, [&](std::size_t k) {
        const int i = static_cast<int>(k / grid.nv), j = static_cast<int>(k % grid.nv);
        const SurfaceJet jt = s.patch.eval(grid.u(i), grid.v(j));
        g.fields["E"](i, j) = inner(jt.z_u, jt.z_u);
        g.fields["F"](i, j) = inner(jt.z_u, jt.z_v);
        g.fields["G"](i, j) = inner(jt.z_v, jt.z_v);
        try {
            const GMSecondForm f = gm_second_form(jt, normal_null_frame(jt));
            L(i, j) = f.L;
            M(i, j) = f.M;
            Nn(i, j) = f.N;
        } catch (const Error&) {
            lmn_ok[k] = 0;
        }
    });
    const bool have_lmn = std::all_of(lmn_ok.begin(), lmn_ok.end(), [](char x) { return x != 0; });
    if (have_lmn) {
        g.fields["L"] = L;
        g.fields["M"] = M;
        g.fields["N"] = Nn;
    }
    const bool functions = cls.spacelike && cls.marginally_trapped && cls.general_type && principal;
    if (functions) {
        const char* names[] = {"nu", "lambda", "mu", "gamma1", "gamma2", "beta1", "beta2", "K", "kappa"};
        for (const char* n : names) g.add(n);
        parallel_for(N, [&](std::size_t k) {
            const int i = static_cast<int>(k / grid.nv), j = static_cast<int>(k % grid.nv);
            const GeometricFunctions f = geometric_functions(s.patch, grid.u(i), grid.v(j));
            const Curvatures cv = invariants(f);
            const double vals[] = {f.nu, f.lambda, f.mu, f.gamma1, f.gamma2, f.beta1, f.beta2, cv.K, cv.kappa};
            for (int m = 0; m < 9; ++m) g.fields[names[m]](i, j) = vals[m];
        });
    }
    const std::string path = or_default(c.output, "analyze.json");
    io::write_grid(path, g);
    Report r;
    r.add("surface", s.name);
    r.add("grid", std::to_string(c.nu) + "x" + std::to_string(c.nv));
    r.add("spacelike", cls.spacelike);
    r.add("marginally_trapped", cls.marginally_trapped);
    r.add("general_type", cls.general_type);
    r.add("principal", principal);
    r.add("min_E", cls.min_E);
    r.add("min_G", cls.min_G);
    r.add("min_det", cls.min_det);
    r.add("sup_abs_HH", cls.sup_HH);
    r.add("inf_H", cls.inf_H);
    r.add("inf_general_defect", cls.inf_general_defect);
    r.add("second_form", have_lmn ? "written" : "unavailable");
    r.add("geometric_functions", functions ? "written" : "skipped");
    r.add("output", path);
    emit(r, c, out);
    if (!cls.spacelike || !cls.marginally_trapped) return kClassification;
    if (!cls.general_type) return kDegenerate;
    return kOk;
}

nlohmann::json map_to_json(const ParameterMap& m) {
    return {{"u", m.u_samples()},   {"ubar", m.ubar_samples()}, {"phi", m.phi_samples()},
            {"v", m.v_samples()},   {"vbar", m.vbar_samples()}, {"psi", m.psi_samples()}};
}

int cmd_canonicalize(const RunConfig& c, std::ostream& out) {
    Report r;
    const std::string map_path = or_default(c.output, "canonical_map.json");
    if (!c.input.empty()) {
        const io::Grid2D g = io::read_grid(c.input);
        const GriddedInvariants data{g.spec(), g.field("nu"), g.field("lambda"), g.field("mu"), g.field("E"),
                                     g.field("G")};
        const CanonicalGauge gauge = c.gauge.value_or(corner_gauge(g.rect));
        GaugeFunctions gf;
        const ParameterMap m = canonical_map(data, gauge, canonical_options(c), &gf);
        io::write_text_atomic(map_path, nlohmann::json{{"map", map_to_json(m)}}.dump(1) + "\n");
        r.add("input", c.input);
        r.add("phi_variation", gf.phi_variation);
        r.add("psi_variation", gf.psi_variation);
        r.add("map", map_path);
        emit(r, c, out);
        return kOk;
    }
    const SurfaceSource s = make_surface(c);
    const CanonicalOptions opts = canonical_options(c, &s);
    const CanonicalResult res = canonicalize(s.patch, s.gauge, opts);
    const CanonicityReport cr = is_canonical(res.patch, res.gauge, c.canonical_tol, canonical_options(c));
    const GridSpec grid(res.patch.domain(), c.nu, c.nv);
    io::Grid2D g(grid);
    for (const char* n : {"nu", "lambda", "mu", "E", "G"}) g.add(n);
    parallel_for(grid.size(), [&](std::size_t k) {
        const int i = static_cast<int>(k / grid.nv), j = static_cast<int>(k % grid.nv);
        const JetScalars js = jet_scalars(res.patch.eval(grid.u(i), grid.v(j)));
        g.fields["nu"](i, j) = js.nu;
        g.fields["lambda"](i, j) = js.lambda;
        g.fields["mu"](i, j) = js.mu;
        g.fields["E"](i, j) = js.first.E;
        g.fields["G"](i, j) = js.first.G;
    });
    const std::string grid_path = or_default(c.grid_output, "canonical_invariants.json");
    nlohmann::json mj{{"map", map_to_json(res.map)},
                      {"gauge", {{"u0", res.gauge.u0}, {"v0", res.gauge.v0}, {"c1", res.gauge.c1}, {"c2", res.gauge.c2}}}};
    io::write_text_atomic(map_path, mj.dump(1) + "\n");
    io::write_grid(grid_path, g);
    r.add("surface", s.name);
    r.add("phi_variation", res.gauge_functions.phi_variation);
    r.add("psi_variation", res.gauge_functions.psi_variation);
    r.add("sup_phi_minus_1", cr.sup_phi_dev);
    r.add("sup_psi_minus_1", cr.sup_psi_dev);
    r.add("canonical", cr.canonical);
    r.add("map", map_path);
    r.add("invariants", grid_path);
    emit(r, c, out);
    return cr.canonical ? kOk : kClassification;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const SurfaceSource s = make_surface(c);
    const GridSpec grid(s.patch.domain(), c.nu, c.nv);
    const ResidualReport rr = basic_system_residuals(s.patch, grid);
    const CanonicityReport cr = is_canonical(s.patch, s.gauge, c.canonical_tol, canonical_options(c));
    Report r;
    r.add("surface", s.name);
    for (int k = 0; k < 6; ++k) r.add("residual_" + std::to_string(k + 1), rr.r[k]);
    r.add("gauss_curvature_check", rr.k_check);
    r.add("normal_curvature_check", rr.kappa_check);
    r.add("min_positivity_u", rr.min_positivity_u);
    r.add("min_positivity_v", rr.min_positivity_v);
    const bool ok = rr.max() <= c.residual_tol;
    r.add("residuals_ok", ok);
    r.add("sup_phi_minus_1", cr.sup_phi_dev);
    r.add("sup_psi_minus_1", cr.sup_psi_dev);
    r.add("canonical", cr.canonical);
    emit(r, c, out);
    if (!ok || (c.require_canonical && !cr.canonical)) return kClassification;
    return kOk;
}

int cmd_reconstruct(const RunConfig& c, std::ostream& out) {
    bonnet::ReconstructionInput in;
    std::optional<meridian::CanonicalPatch> reference;
    std::string source;
    if (c.input.empty()) {
        if (c.source != "builtin" || c.builtin != "meridian")
            throw Error(ErrorKind::InvalidArgument, "reconstruct needs --input or the builtin meridian triple");
        reference = meridian::round_trip_patch();
        in = meridian::round_trip_input(*reference, c.step);
        source = "builtin meridian canonical triple";
    } else {
        const io::Grid2D g = io::read_grid(c.input);
        in.grid = g.spec();
        in.nu = g.field("nu");
        in.lambda = g.field("lambda");
        in.mu = g.field("mu");
        in.gauge = c.gauge.value_or(corner_gauge(g.rect));
        source = c.input;
    }
    if (c.gauge && reference) in.gauge = *c.gauge;
    in.compatibility_threshold = c.compatibility_threshold;
    in.solver_tol = c.solver_tol;
    in.max_iterations = c.max_iterations;
    in.degenerate_tol = c.degenerate_tol;
    const bonnet::ReconstructionResult res = bonnet::reconstruct(in);
    io::Grid2D g(in.grid);
    for (int m = 0; m < 4; ++m) {
        Field2D& f = g.add(io::kPositionFields[m]);
        for (int i = 0; i < in.grid.nu; ++i)
            for (int j = 0; j < in.grid.nv; ++j) f(i, j) = res.position(i, j).c[m];
    }
    g.fields["E"] = res.E;
    g.fields["G"] = res.G;
    g.fields["Phi"] = res.Phi;
    g.fields["Psi"] = res.Psi;
    g.fields["gamma1"] = res.gamma1;
    g.fields["gamma2"] = res.gamma2;
    g.fields["beta1"] = res.beta1;
    g.fields["beta2"] = res.beta2;
    const std::string path = or_default(c.output, "reconstruction.json");
    io::write_grid(path, g);
    const bonnet::Diagnostics& d = res.diagnostics;
    Report r;
    r.add("input", source);
    r.add("grid", std::to_string(in.grid.nu) + "x" + std::to_string(in.grid.nv));
    r.add("cauchy_residual", d.cauchy_residual);
    r.add("compatibility_residual_1", d.compatibility_residual_1);
    r.add("compatibility_residual_2", d.compatibility_residual_2);
    r.add("frame_commutator_residual", d.frame_commutator_residual);
    r.add("metric_drift", d.metric_drift);
    r.add("closure_defect", d.closure_defect);
    r.add("min_positivity_u", d.min_positivity_u);
    r.add("min_positivity_v", d.min_positivity_v);
    if (reference) {
        const bonnet::InvariantTable t = bonnet::compare_invariants(res, reference->patch, 1);
        for (int m = 0; m < bonnet::InvariantTable::kCount; ++m)
            r.add(std::string("compare_") + bonnet::InvariantTable::kNames[m], t.diff[m]);
    }
    r.add("output", path);
    emit(r, c, out);
    return kOk;
}

int cmd_export(const RunConfig& c, std::ostream& out) {
    if (c.input.empty()) throw Error(ErrorKind::InvalidArgument, "export needs --input");
    if (c.field.empty()) throw Error(ErrorKind::InvalidArgument, "export needs --field");
    const io::Grid2D g = io::read_grid(c.input);
    const std::string csv = io::to_csv(g, c.field);
    if (c.output.empty())
        out << csv;
    else
        io::write_text_atomic(c.output, csv);
    return kOk;
}

io::Grid2D sample_triple(const GridSpec& grid, const std::function<std::array<double, 3>(double, double)>& f) {
    io::Grid2D g(grid);
    Field2D& nu = g.add("nu");
    Field2D& la = g.add("lambda");
    Field2D& mu = g.add("mu");
    for (int i = 0; i < grid.nu; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            const auto t = f(grid.u(i), grid.v(j));
            nu(i, j) = t[0];
            la(i, j) = t[1];
            mu(i, j) = t[2];
        }
    return g;
}

int cmd_example(const RunConfig& c, const std::string& name, std::ostream& out) {
    const GridSpec unit(c.domain.value_or(Rect{0, 1, 0, 1}), c.nu, c.nv);
    std::string text;
    if (name == "config") {
        text = config_to_json(c).dump(1) + "\n";
    } else {
        io::Grid2D g;
        if (name == "meridian-triple") {
            const auto cp = meridian::round_trip_patch();
            const auto in = meridian::round_trip_input(cp, c.step);
            g = io::Grid2D(in.grid);
            g.fields["nu"] = in.nu;
            g.fields["lambda"] = in.lambda;
            g.fields["mu"] = in.mu;
        } else if (name == "constant-triple") {
            g = sample_triple(unit, [](double, double) { return std::array<double, 3>{0.0, 0.0, -0.5}; });
        } else if (name == "random-triple") {
            std::mt19937_64 rng(c.seed);
            std::uniform_real_distribution<double> k(0.5, 3.0), ph(0.0, 6.283185307179586);
            double a[9];
            for (double& x : a) x = k(rng);
            double p[3];
            for (double& x : p) x = ph(rng);
            g = sample_triple(unit, [=](double u, double v) {
                return std::array<double, 3>{0.2 * std::sin(a[0] * u + a[1] * v + p[0]),
                                             0.9 + 0.3 * std::sin(a[2] * u - a[3] * v + p[1]),
                                             1.0 + 0.4 * std::cos(a[4] * u + a[5] * v * v + p[2])};
            });
        } else if (name == "degenerate-invariants") {
            g = sample_triple(unit, [](double, double) { return std::array<double, 3>{0.5, 0.0, 1.0}; });
            g.add("E") = Field2D(unit, 1.0);
            g.fields["G"] = Field2D(unit, 1.0);
        } else if (name == "plane-surface" || name == "light-cone-surface") {
            const SurfacePatch p = name == "plane-surface"
                                       ? families::plane(unit.rect)
                                       : families::light_cone_torus(c.radius, c.domain.value_or(Rect{-1, 1, -1, 1}));
            const GridSpec grid(p.domain(), c.nu, c.nv);
            g = io::Grid2D(grid);
            for (int m = 0; m < 4; ++m) {
                Field2D& f = g.add(io::kPositionFields[m]);
                for (int i = 0; i < grid.nu; ++i)
                    for (int j = 0; j < grid.nv; ++j) f(i, j) = p.position(grid.u(i), grid.v(j)).c[m];
            }
        } else {
            throw Error(ErrorKind::InvalidArgument, "unknown example '" + name + "'");
        }
        g.validate();
        text = io::to_json(g).dump(1) + "\n";
    }
    if (c.output.empty())
        out << text;
    else
        io::write_text_atomic(c.output, text);
    return kOk;
}

// ------------------------------------------------------------ flags

struct Flags {
    std::string config, builtin, parameters, surface_file, input, output, grid_output, report, field, example;
    std::vector<double> domain;
    int nu = 0, nv = 0, max_iterations = 0, nodes = 0;
    double u0 = 0, v0 = 0, c1 = 0, c2 = 0, classify_tol = 0, canonical_tol = 0, residual_tol = 0, compat = 0,
           solver_tol = 0, step = 0, radius = 0;
    unsigned seed = 0;
    bool require_canonical = false;
    std::map<std::string, CLI::Option*> opt;
};

void add_flags(CLI::App* app, Flags& f) {
    auto& o = f.opt;
    o["config"] = app->add_option("--config", f.config, "JSON configuration file (flags override it)");
    o["builtin"] = app->add_option("--builtin", f.builtin, "builtin surface: meridian, light_cone, plane, sphere, timelike_plane");
    o["parameters"] = app->add_option("--parameters", f.parameters, "meridian parametrization: original, principal, canonical");
    o["surface"] = app->add_option("--surface-file", f.surface_file, "grid file with coordinate fields x1..x4");
    o["domain"] = app->add_option("--domain", f.domain, "u_min u_max v_min v_max")->expected(4);
    o["nu"] = app->add_option("--nu", f.nu, "grid nodes along u");
    o["nv"] = app->add_option("--nv", f.nv, "grid nodes along v");
    o["radius"] = app->add_option("--radius", f.radius, "radius of the light cone torus or sphere");
    o["u0"] = app->add_option("--u0", f.u0, "gauge base point u0");
    o["v0"] = app->add_option("--v0", f.v0, "gauge base point v0");
    o["c1"] = app->add_option("--c1", f.c1, "gauge constant c1");
    o["c2"] = app->add_option("--c2", f.c2, "gauge constant c2");
    o["classify_tol"] = app->add_option("--classify-tol", f.classify_tol, "tolerance for the classification");
    o["canonical_tol"] = app->add_option("--canonical-tol", f.canonical_tol, "tolerance for sup|phi-1|, sup|psi-1|");
    o["residual_tol"] = app->add_option("--residual-tol", f.residual_tol, "tolerance for the integrability residuals");
    o["compat"] = app->add_option("--compatibility-threshold", f.compat, "pass threshold of the compatibility residuals");
    o["max_iterations"] = app->add_option("--max-iterations", f.max_iterations, "fixed-point iteration cap");
    o["solver_tol"] = app->add_option("--solver-tol", f.solver_tol, "fixed-point tolerance");
    o["nodes"] = app->add_option("--nodes", f.nodes, "quadrature nodes per line");
    o["step"] = app->add_option("--step", f.step, "grid step of the builtin invariant triple");
    o["seed"] = app->add_option("--seed", f.seed, "random seed for generated examples");
    o["input"] = app->add_option("-i,--input", f.input, "input grid file");
    o["output"] = app->add_option("-o,--output", f.output, "output file");
    o["grid_output"] = app->add_option("--grid-output", f.grid_output, "output grid file of canonicalize");
    o["report"] = app->add_option("--report", f.report, "write the report as JSON to this file");
    o["field"] = app->add_option("--field", f.field, "field name for export");
    o["require_canonical"] = app->add_flag("--require-canonical", f.require_canonical, "fail verify unless canonical");
}

RunConfig resolve(const Flags& f) {
    auto given = [&](const char* k) { return f.opt.at(k)->count() > 0; };
    RunConfig c = f.config.empty() ? RunConfig{} : config_from_json(io::read_json(f.config));
    if (given("builtin")) {
        c.source = "builtin";
        c.builtin = f.builtin;
    }
    if (given("parameters")) c.parameters = f.parameters;
    if (given("surface")) {
        c.source = "grid";
        c.surface_path = f.surface_file;
    }
    if (given("domain")) c.domain = Rect{f.domain[0], f.domain[1], f.domain[2], f.domain[3]};
    if (given("nu")) c.nu = f.nu;
    if (given("nv")) c.nv = f.nv;
    if (given("radius")) c.radius = f.radius;
    const bool any_gauge = given("u0") || given("v0") || given("c1") || given("c2");
    if (any_gauge) {
        if (!c.gauge && !(given("u0") && given("v0")))
            throw Error(ErrorKind::InvalidArgument, "a gauge needs at least --u0 and --v0");
        CanonicalGauge g = c.gauge.value_or(CanonicalGauge{});
        if (given("u0")) g.u0 = f.u0;
        if (given("v0")) g.v0 = f.v0;
        if (given("c1")) g.c1 = f.c1;
        if (given("c2")) g.c2 = f.c2;
        c.gauge = g;
    }
    if (given("classify_tol")) c.classify_tol = f.classify_tol;
    if (given("canonical_tol")) c.canonical_tol = f.canonical_tol;
    if (given("residual_tol")) c.residual_tol = f.residual_tol;
    if (given("compat")) c.compatibility_threshold = f.compat;
    if (given("max_iterations")) c.max_iterations = f.max_iterations;
    if (given("solver_tol")) c.solver_tol = f.solver_tol;
    if (given("nodes")) c.quadrature_nodes = f.nodes;
    if (given("step")) c.step = f.step;
    if (given("seed")) c.seed = f.seed;
    if (given("input")) c.input = f.input;
    if (given("output")) c.output = f.output;
    if (given("grid_output")) c.grid_output = f.grid_output;
    if (given("report")) c.report = f.report;
    if (given("field")) c.field = f.field;
    if (f.require_canonical) c.require_canonical = true;
    c.validate();
    return c;
}

void error_line(std::ostream& err, const std::string& kind, const std::string& message) {
    err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analysis, canonicalization and reconstruction of marginally trapped surfaces in R^4_1", "mtrap"};
    app.require_subcommand(1);
    const char* names[] = {"analyze", "canonicalize", "verify", "reconstruct", "export", "example"};
    const char* help[] = {
        "fundamental forms, geometric functions and classification of a surface",
        "map principal parameters to canonical principal parameters",
        "integrability residuals and canonicity check",
        "reconstruct a surface from an invariant triple in canonical parameters",
        "flatten a grid field to CSV",
        "write example inputs: config, meridian-triple, constant-triple, random-triple, degenerate-invariants, "
        "plane-surface, light-cone-surface",
    };
    std::map<std::string, Flags> flags;
    std::map<std::string, CLI::App*> subs;
    for (int k = 0; k < 6; ++k) {
        CLI::App* s = app.add_subcommand(names[k], help[k]);
        add_flags(s, flags[names[k]]);
        subs[names[k]] = s;
    }
    subs["example"]->add_option("name", flags["example"].example, "example name")->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        error_line(err, "Usage", e.what());
        return kFailure;
    }
    try {
        for (const char* n : names) {
            if (!subs[n]->parsed()) continue;
            const std::string cmd = n;
            const RunConfig c = resolve(flags[cmd]);
            if (cmd == "analyze") return cmd_analyze(c, out);
            if (cmd == "canonicalize") return cmd_canonicalize(c, out);
            if (cmd == "verify") return cmd_verify(c, out);
            if (cmd == "reconstruct") return cmd_reconstruct(c, out);
            if (cmd == "export") return cmd_export(c, out);
            return cmd_example(c, flags[cmd].example, out);
        }
    } catch (const Error& e) {
        error_line(err, to_string(e.kind()), e.message());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        error_line(err, "Internal", e.what());
        return kFailure;
    }
    return kFailure;
}

}  // namespace mtrap::cli
