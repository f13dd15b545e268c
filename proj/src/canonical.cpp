#include "mtrap/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mtrap/errors.hpp"
#include "mtrap/parallel.hpp"

namespace mtrap {

PhiQuadruple phi_quadruple(const InvariantJet& j, double tol) {
    const double D = 4 * j.nu * j.nu + 4 * j.lambda * j.lambda - 1;
    if (std::abs(D) < tol) throw Error(ErrorKind::DegenerateType, "4 nu^2 + 4 lambda^2 - 1 vanishes");
    if (std::abs(j.mu) <= kMuTol) throw Error(ErrorKind::DegenerateType, "mu vanishes");
    const double den = 2 * j.mu * D;
    const double s = j.lambda * j.lambda + j.nu * j.nu;
    PhiQuadruple p;
    p.phi1 = -(j.mu * (2 * j.lambda * j.lambda_v + 2 * j.nu * j.nu_v - j.nu_v) + (2 * s + j.nu - 1) * j.mu_v) / den;
    p.phi2 = (2 * j.mu * (j.lambda_u * j.nu - j.lambda * j.nu_u) + j.lambda * j.mu_u - j.lambda_u * j.mu) / den;
    p.phi3 = (2 * j.mu * (j.lambda * j.nu_v - j.lambda_v * j.nu) + j.lambda * j.mu_v - j.lambda_v * j.mu) / den;
    p.phi4 = -(j.mu * (2 * j.lambda * j.lambda_u + 2 * j.nu * j.nu_u + j.nu_u) + (2 * s - j.nu - 1) * j.mu_u) / den;
    return p;
}

namespace {

double stencil_step(const SurfacePatch& p, double step) { return step > 0 ? step : 1e-3 * p.domain().diagonal(); }

struct Triple {
    double nu, lambda, mu;
};

Triple triple_at(const SurfacePatch& patch, double u, double v) {
    const JetScalars s = jet_scalars(patch.eval(u, v));
    return {s.nu, s.lambda, s.mu};
}

}  // namespace

InvariantJet invariant_jet(const SurfacePatch& patch, double u, double v, double step) {
    const double h = stencil_step(patch, step);
    const Triple c = triple_at(patch, u, v);
    Triple tu[4], tv[4];
    const double off[4] = {-2, -1, 1, 2};
    for (int k = 0; k < 4; ++k) {
        tu[k] = triple_at(patch, u + off[k] * h, v);
        tv[k] = triple_at(patch, u, v + off[k] * h);
    }
    auto d = [h](const Triple* t, double Triple::*m) { return num::d1_central4(t[0].*m, t[1].*m, t[2].*m, t[3].*m, h); };
    InvariantJet j;
    j.nu = c.nu;
    j.lambda = c.lambda;
    j.mu = c.mu;
    j.nu_u = d(tu, &Triple::nu);
    j.nu_v = d(tv, &Triple::nu);
    j.lambda_u = d(tu, &Triple::lambda);
    j.lambda_v = d(tv, &Triple::lambda);
    j.mu_u = d(tu, &Triple::mu);
    j.mu_v = d(tv, &Triple::mu);
    return j;
}

namespace {

GaugeIntegrands integrands_at(const SurfacePatch& patch, double u, double v, const CanonicalOptions& opts) {
    const InvariantJet ij = invariant_jet(patch, u, v, opts.step);
    const PhiQuadruple p = phi_quadruple(ij, opts.degenerate_tol);
    const SurfaceJet j = patch.eval(u, v);
    const double r = std::sqrt(inner(j.z_v, j.z_v) / inner(j.z_u, j.z_u));  // sqrt(G)/sqrt(E)
    return {p.phi1 + p.phi2 * r, p.phi3 / r + p.phi4};
}

}  // namespace

GaugeIntegrands gauge_integrands(const SurfacePatch& patch, double u, double v, const CanonicalOptions& opts) {
    (void)patch.jet(u, v);
    return integrands_at(patch, u, v, opts);
}

namespace {

void finish_variation(GaugeFunctions& g) {
    g.phi_variation = g.psi_variation = g.sup_phi_dev = g.sup_psi_dev = 0.0;
    for (int i = 0; i < g.grid.nu; ++i)
        for (int j = 0; j < g.grid.nv; ++j) {
            g.phi_variation = std::max(g.phi_variation, std::abs(g.phi(i, j) / g.phi_line[i] - 1));
            g.psi_variation = std::max(g.psi_variation, std::abs(g.psi(i, j) / g.psi_line[j] - 1));
            g.sup_phi_dev = std::max(g.sup_phi_dev, std::abs(g.phi(i, j) - 1));
            g.sup_psi_dev = std::max(g.sup_psi_dev, std::abs(g.psi(i, j) - 1));
        }
}

void check_base(const Rect& r, const CanonicalGauge& gauge) {
    if (!r.contains(gauge.u0, gauge.v0, 1e-12 * r.diagonal()))
        throw Error(ErrorKind::InvalidArgument, "gauge base point must lie in the domain");
}

}  // namespace

GaugeFunctions gauge_functions(const SurfacePatch& patch, const CanonicalGauge& gauge, const CanonicalOptions& opts) {
    check_base(patch.domain(), gauge);
    if (opts.nodes < 3) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 3 nodes");
    GaugeFunctions g;
    g.grid = GridSpec(patch.domain(), opts.nodes, opts.nodes);
    const GridSpec& gr = g.grid;
    const int nu = gr.nu, nv = gr.nv;
    const auto un = gr.u_nodes(), vn = gr.v_nodes();
    Field2D a(gr), b(gr), sE(gr), sG(gr);
    parallel_for(gr.size(), [&](std::size_t k) {
        const int i = static_cast<int>(k / nv), j = static_cast<int>(k % nv);
        const GaugeIntegrands ab = integrands_at(patch, un[i], vn[j], opts);
        const SurfaceJet jt = patch.eval(un[i], vn[j]);
        a(i, j) = ab.a;
        b(i, j) = ab.b;
        sE(i, j) = std::sqrt(inner(jt.z_u, jt.z_u));
        sG(i, j) = std::sqrt(inner(jt.z_v, jt.z_v));
    });
    // the two base lines
    std::vector<double> b_v0(nu), a_u0(nv), sE_v0(nu), sG_u0(nv), lnE_u(nu), lnG_v(nv);
    parallel_for(static_cast<std::size_t>(nu + nv), [&](std::size_t k) {
        if (k < static_cast<std::size_t>(nu)) {
            const int i = static_cast<int>(k);
            b_v0[i] = integrands_at(patch, un[i], gauge.v0, opts).b;
            const SurfaceJet jt = patch.eval(un[i], gauge.v0);
            const double E = inner(jt.z_u, jt.z_u);
            sE_v0[i] = std::sqrt(E);
            lnE_u[i] = inner(jt.z_uu, jt.z_u) / E;
        } else {
            const int j = static_cast<int>(k) - nu;
            a_u0[j] = integrands_at(patch, gauge.u0, vn[j], opts).a;
            const SurfaceJet jt = patch.eval(gauge.u0, vn[j]);
            const double G = inner(jt.z_v, jt.z_v);
            sG_u0[j] = std::sqrt(G);
            lnG_v[j] = inner(jt.z_vv, jt.z_v) / G;
        }
    });
    const auto B0 = num::cumulative_from_point(un, b_v0, gauge.u0,
                                               [&](double s) { return integrands_at(patch, s, gauge.v0, opts).b; });
    const auto A0 = num::cumulative_from_point(vn, a_u0, gauge.v0,
                                               [&](double s) { return integrands_at(patch, gauge.u0, s, opts).a; });
    g.phi = Field2D(gr);
    g.psi = Field2D(gr);
    parallel_for(static_cast<std::size_t>(nu + nv), [&](std::size_t k) {
        if (k < static_cast<std::size_t>(nu)) {
            const int i = static_cast<int>(k);
            const auto Ai = num::cumulative_from_point(vn, a.row(i), gauge.v0, [&](double s) {
                return integrands_at(patch, un[i], s, opts).a;
            });
            for (int j = 0; j < nv; ++j) g.phi(i, j) = sE(i, j) * std::exp(-Ai[j] - B0[i] + gauge.c1);
        } else {
            const int j = static_cast<int>(k) - nu;
            const auto Bj = num::cumulative_from_point(un, b.column(j), gauge.u0, [&](double s) {
                return integrands_at(patch, s, vn[j], opts).b;
            });
            for (int i = 0; i < nu; ++i) g.psi(i, j) = sG(i, j) * std::exp(-Bj[i] - A0[j] + gauge.c2);
        }
    });
    g.phi_line.resize(nu);
    g.dphi_line.resize(nu);
    for (int i = 0; i < nu; ++i) {
        g.phi_line[i] = sE_v0[i] * std::exp(-B0[i] + gauge.c1);
        g.dphi_line[i] = g.phi_line[i] * (lnE_u[i] - b_v0[i]);
    }
    g.psi_line.resize(nv);
    g.dpsi_line.resize(nv);
    for (int j = 0; j < nv; ++j) {
        g.psi_line[j] = sG_u0[j] * std::exp(-A0[j] + gauge.c2);
        g.dpsi_line[j] = g.psi_line[j] * (lnG_v[j] - a_u0[j]);
    }
    finish_variation(g);
    return g;
}

namespace {

void certify(const GaugeFunctions& g, double tol) {
    if (g.phi_variation > tol)
        throw Error(ErrorKind::GaugeNotConstant,
                    "phi varies along v by " + std::to_string(g.phi_variation) + " (non-principal input?)");
    if (g.psi_variation > tol)
        throw Error(ErrorKind::GaugeNotConstant,
                    "psi varies along u by " + std::to_string(g.psi_variation) + " (non-principal input?)");
}

}  // namespace

GaugeFunctions varphi_psi(const SurfacePatch& patch, const CanonicalGauge& gauge, const CanonicalOptions& opts) {
    GaugeFunctions g = gauge_functions(patch, gauge, opts);
    certify(g, opts.certify_tol);
    return g;
}

GaugeFunctions gauge_functions(const GriddedInvariants& d, const CanonicalGauge& gauge, const CanonicalOptions& opts) {
    const GridSpec& gr = d.grid;
    gr.validate();
    const int nu = gr.nu, nv = gr.nv;
    for (const Field2D* f : {&d.nu, &d.lambda, &d.mu, &d.E, &d.G})
        if (f->nu() != nu || f->nv() != nv) throw Error(ErrorKind::InvalidGrid, "field shape does not match the grid");
    const double du = gr.du(), dv = gr.dv();
    const int i0 = static_cast<int>(std::lround((gauge.u0 - gr.rect.u_min) / du));
    const int j0 = static_cast<int>(std::lround((gauge.v0 - gr.rect.v_min) / dv));
    if (i0 < 0 || i0 >= nu || j0 < 0 || j0 >= nv || std::abs(gr.u(i0) - gauge.u0) > 1e-9 * du ||
        std::abs(gr.v(j0) - gauge.v0) > 1e-9 * dv)
        throw Error(ErrorKind::InvalidArgument, "for gridded input the gauge base point must be a grid node");
    const Field2D nu_u = num::partial_u(d.nu, du), nu_v = num::partial_v(d.nu, dv);
    const Field2D la_u = num::partial_u(d.lambda, du), la_v = num::partial_v(d.lambda, dv);
    const Field2D mu_u = num::partial_u(d.mu, du), mu_v = num::partial_v(d.mu, dv);
    Field2D a(gr), b(gr), sE(gr), sG(gr);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const InvariantJet ij{d.nu(i, j),   d.lambda(i, j), d.mu(i, j),   nu_u(i, j), nu_v(i, j),
                                  la_u(i, j), la_v(i, j),     mu_u(i, j), mu_v(i, j)};
            const PhiQuadruple p = phi_quadruple(ij, opts.degenerate_tol);
            if (!(d.E(i, j) > 0) || !(d.G(i, j) > 0)) throw Error(ErrorKind::NotSpacelike, "E and G must be positive");
            sE(i, j) = std::sqrt(d.E(i, j));
            sG(i, j) = std::sqrt(d.G(i, j));
            const double r = sG(i, j) / sE(i, j);
            a(i, j) = p.phi1 + p.phi2 * r;
            b(i, j) = p.phi3 / r + p.phi4;
        }
    GaugeFunctions g;
    g.grid = gr;
    g.phi = Field2D(gr);
    g.psi = Field2D(gr);
    const auto B0 = num::cumulative_simpson(b.column(j0), du, i0);
    const auto A0 = num::cumulative_simpson(a.row(i0), dv, j0);
    for (int i = 0; i < nu; ++i) {
        const auto Ai = num::cumulative_simpson(a.row(i), dv, j0);
        for (int j = 0; j < nv; ++j) g.phi(i, j) = sE(i, j) * std::exp(-Ai[j] - B0[i] + gauge.c1);
    }
    for (int j = 0; j < nv; ++j) {
        const auto Bj = num::cumulative_simpson(b.column(j), du, i0);
        for (int i = 0; i < nu; ++i) g.psi(i, j) = sG(i, j) * std::exp(-Bj[i] - A0[j] + gauge.c2);
    }
    g.phi_line = g.phi.column(j0);
    g.psi_line = g.psi.row(i0);
    g.dphi_line = num::derivative(g.phi_line, du);
    g.dpsi_line = num::derivative(g.psi_line, dv);
    finish_variation(g);
    return g;
}

// ------------------------------------------------------------ ParameterMap

ParameterMap::ParameterMap(std::vector<double> u, std::vector<double> ubar, std::vector<double> phi,
                           std::vector<double> v, std::vector<double> vbar, std::vector<double> psi)
    : fu_(num::CubicHermite::monotone_with_slopes(std::move(u), std::move(ubar), std::move(phi))),
      fv_(num::CubicHermite::monotone_with_slopes(std::move(v), std::move(vbar), std::move(psi))) {
    if (!monotone()) throw Error(ErrorKind::InvalidArgument, "parameter map must be strictly increasing");
}

Rect ParameterMap::image(const Rect& r) const { return {ubar(r.u_min), ubar(r.u_max), vbar(r.v_min), vbar(r.v_max)}; }

SurfacePatch ParameterMap::compose(const SurfacePatch& patch) const {
    const ParameterMap m = *this;
    return reparametrize(patch, image(patch.domain()), [m](double p, double q) {
        ChartJet c{};
        c.u = m.u_of(p);
        c.v = m.v_of(q);
        const double up = 1.0 / m.dubar(c.u), vq = 1.0 / m.dvbar(c.v);
        c.u_p = up;
        c.v_q = vq;
        c.u_pp = -m.d2ubar(c.u) * up * up * up;
        c.v_qq = -m.d2vbar(c.v) * vq * vq * vq;
        return c;
    });
}

namespace {

ParameterMap build_map(const GaugeFunctions& g, const CanonicalGauge& gauge, const CanonicalOptions& opts) {
    const auto un = g.grid.u_nodes(), vn = g.grid.v_nodes();
    const num::CubicHermite phi_h(un, g.phi_line, g.dphi_line);
    const num::CubicHermite psi_h(vn, g.psi_line, g.dpsi_line);
    auto Iu = num::cumulative_from_point(un, g.phi_line, gauge.u0, [&](double s) { return phi_h(s); });
    auto Iv = num::cumulative_from_point(vn, g.psi_line, gauge.v0, [&](double s) { return psi_h(s); });
    const double ua = opts.u_anchor.value_or(gauge.u0), va = opts.v_anchor.value_or(gauge.v0);
    for (double& x : Iu) x += ua;
    for (double& x : Iv) x += va;
    for (double x : g.phi_line)
        if (!(x > 0)) throw Error(ErrorKind::InvalidArgument, "phi must be positive");
    for (double x : g.psi_line)
        if (!(x > 0)) throw Error(ErrorKind::InvalidArgument, "psi must be positive");
    return ParameterMap(un, Iu, g.phi_line, vn, Iv, g.psi_line);
}

}  // namespace

CanonicalResult canonicalize(const SurfacePatch& patch, const CanonicalGauge& gauge, const CanonicalOptions& opts) {
    CanonicalResult r;
    r.gauge_functions = varphi_psi(patch, gauge, opts);
    r.map = build_map(r.gauge_functions, gauge, opts);
    r.patch = r.map.compose(patch);
    r.gauge = {r.map.ubar(gauge.u0), r.map.vbar(gauge.v0), gauge.c1, gauge.c2};
    return r;
}

ParameterMap canonical_map(const GriddedInvariants& data, const CanonicalGauge& gauge, const CanonicalOptions& opts,
                           GaugeFunctions* out) {
    GaugeFunctions g = gauge_functions(data, gauge, opts);
    certify(g, opts.certify_tol);
    ParameterMap m = build_map(g, gauge, opts);
    if (out) *out = std::move(g);
    return m;
}

CanonicityReport is_canonical(const SurfacePatch& patch, const CanonicalGauge& gauge, double tol,
                              const CanonicalOptions& opts) {
    const GaugeFunctions g = gauge_functions(patch, gauge, opts);
    return {g.sup_phi_dev <= tol && g.sup_psi_dev <= tol, g.sup_phi_dev, g.sup_psi_dev};
}

// ------------------------------------------------------------ PMCV

PmcvReport pmcv_report(const SurfacePatch& patch, const GridSpec& grid, double tol, const FrameFunctionOptions& opts) {
    grid.validate();
    struct Node {
        double beta, nu, ratio, metric;
    };
    std::vector<Node> nodes(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        const int i = static_cast<int>(k / grid.nv), j = static_cast<int>(k % grid.nv);
        const double u = grid.u(i), v = grid.v(j);
        const GeometricFunctions g = geometric_functions(patch, u, v, opts);
        const FirstForm f = first_form(patch.jet(u, v));
        nodes[k] = {std::max(std::abs(g.beta1), std::abs(g.beta2)), std::abs(g.nu), g.lambda / g.mu,
                    std::max(std::abs(f.E * std::abs(g.mu) - 1), std::abs(f.G * std::abs(g.mu) - 1))};
    });
    PmcvReport r;
    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin, rsum = 0;
    for (const Node& n : nodes) {
        r.sup_beta = std::max(r.sup_beta, n.beta);
        r.sup_nu = std::max(r.sup_nu, n.nu);
        r.metric_defect = std::max(r.metric_defect, n.metric);
        rmin = std::min(rmin, n.ratio);
        rmax = std::max(rmax, n.ratio);
        rsum += n.ratio;
    }
    r.ratio_variation = rmax - rmin;
    r.beta_zero = r.sup_beta <= tol;
    r.nu_zero = r.sup_nu <= tol;
    if (r.ratio_variation <= tol) r.lambda_over_mu = rsum / static_cast<double>(nodes.size());
    r.canonical_metric_ok = r.metric_defect <= tol;
    return r;
}

}  // namespace mtrap
