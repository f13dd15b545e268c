#include "mtrap/framefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mtrap/errors.hpp"
#include "mtrap/numerics.hpp"
#include "mtrap/parallel.hpp"

namespace mtrap {

double frame_defect(const FrameField& f) {
    const Vector4 v[4] = {f.x, f.y, f.frame.n1, f.frame.n2};
    static constexpr double gram[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, -1}, {0, 0, -1, 0}};
    double d = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) d = std::max(d, std::abs(inner(v[a], v[b]) - gram[a][b]));
    return d;
}

namespace {

constexpr double kTinyH = 1e-8;

NullNormalFrame h_frame(const SurfaceJet& j, const Vector4& H) {
    const double nH = norm_inf(H);
    if (nH < kTinyH) throw Error(ErrorKind::NotMarginallyTrapped, "mean curvature vector vanishes");
    if (std::abs(inner(H, H)) > kLightlikeTol * std::max(1.0, nH * nH))
        throw Error(ErrorKind::NotMarginallyTrapped, "mean curvature vector is not lightlike");
    return complete_null_frame(H, normal_seed(j, H));
}

}  // namespace

FrameField geometric_frame(const SurfaceJet& j) {
    const FirstForm f = first_form(j);
    const Vector4 H = mean_curvature_vector(j);
    return {j.z_u / std::sqrt(f.E), j.z_v / std::sqrt(f.G), h_frame(j, H)};
}

JetScalars jet_scalars(const SurfaceJet& j) {
    JetScalars s;
    s.first = first_form(j);
    s.frame = geometric_frame(j);
    const double E = s.first.E, G = s.first.G, sE = std::sqrt(E), sG = std::sqrt(G);
    const double Eu = 2 * inner(j.z_uu, j.z_u), Ev = 2 * inner(j.z_uv, j.z_u);
    const double Gu = 2 * inner(j.z_uv, j.z_v), Gv = 2 * inner(j.z_vv, j.z_v);
    // Derivatives of the unit tangents, differentiated in closed form.
    const Vector4 xu = j.z_uu / sE - (Eu / (2 * E * sE)) * j.z_u;
    const Vector4 xv = j.z_uv / sE - (Ev / (2 * E * sE)) * j.z_u;
    const Vector4 yu = j.z_uv / sG - (Gu / (2 * G * sG)) * j.z_v;
    const Vector4 yv = j.z_vv / sG - (Gv / (2 * G * sG)) * j.z_v;
    const Vector4 Dux = xu / sE, Dvx = xv / sG, Duy = yu / sE, Dvy = yv / sG;
    const Vector4& x = s.frame.x;
    const Vector4& y = s.frame.y;
    const Vector4& n1 = s.frame.frame.n1;
    const Vector4& n2 = s.frame.frame.n2;
    s.gamma1 = inner(Dux, y);
    s.gamma2 = inner(Dvy, x);
    const double nu_a = -inner(Dux, n2) - 1.0, nu_b = 1.0 + inner(Dvy, n2);
    const double la_a = -inner(Duy, n2), la_b = -inner(Dvx, n2);
    const double mu_a = -inner(Duy, n1), mu_b = -inner(Dvx, n1);
    s.nu = 0.5 * (nu_a + nu_b);
    s.lambda = 0.5 * (la_a + la_b);
    s.mu = 0.5 * (mu_a + mu_b);
    s.cross = {std::abs(nu_a - nu_b), std::abs(la_a - la_b), std::abs(mu_a - mu_b)};
    return s;
}

namespace {

double default_step(const SurfacePatch& p, double step) { return step > 0 ? step : 1e-3 * p.domain().diagonal(); }

GeometricFunctions functions_at(const SurfacePatch& patch, double u, double v, const FrameFunctionOptions& opts,
                                CrossCheck* cross) {
    const JetScalars s = jet_scalars(patch.eval(u, v));
    auto ok = [&](double d, double a) { return d <= opts.cross_abs + opts.cross_rel * std::abs(a); };
    if (!ok(s.cross.nu, 1.0 + std::abs(s.nu)) || !ok(s.cross.lambda, s.lambda) || !ok(s.cross.mu, s.mu))
        throw Error(ErrorKind::InconsistentFrameEquations,
                    "frame equation cross-checks disagree (nu " + std::to_string(s.cross.nu) + ", lambda " +
                        std::to_string(s.cross.lambda) + ", mu " + std::to_string(s.cross.mu) + ")");
    if (std::abs(s.mu) <= kMuTol) throw Error(ErrorKind::DegenerateType, "mu vanishes");
    if (cross) *cross = s.cross;
    const double h = default_step(patch, opts.step);
    auto H_at = [&](double uu, double vv) { return mean_curvature_vector(patch.eval(uu, vv)); };
    const Vector4 Hu = num::d1_stencil([&](double t) { return H_at(t, v); }, u, h);
    const Vector4 Hv = num::d1_stencil([&](double t) { return H_at(u, t); }, v, h);
    GeometricFunctions g;
    g.nu = s.nu;
    g.lambda = s.lambda;
    g.mu = s.mu;
    g.gamma1 = s.gamma1;
    g.gamma2 = s.gamma2;
    g.beta1 = -inner(Hu, s.frame.frame.n2) / std::sqrt(s.first.E);
    g.beta2 = -inner(Hv, s.frame.frame.n2) / std::sqrt(s.first.G);
    return g;
}

}  // namespace

GeometricFunctions geometric_functions(const SurfacePatch& patch, double u, double v, const FrameFunctionOptions& opts,
                                       CrossCheck* cross) {
    (void)patch.jet(u, v);  // domain check
    return functions_at(patch, u, v, opts, cross);
}

double general_type_defect(const SurfaceJet& j) {
    const FirstForm f = first_form(j);
    const Vector4 H = mean_curvature_vector(j);
    const NullNormalFrame fr = h_frame(j, H);
    const NormalParts s = normal_parts(j);
    // n1-components of sigma in coordinates, relative to the metric
    const double a11 = -inner(s.uu, fr.n2), a12 = -inner(s.uv, fr.n2), a22 = -inner(s.vv, fr.n2);
    const double d = (a11 - f.E) * (a22 - f.G) - (a12 - f.F) * (a12 - f.F);
    const double nu2_la2 = -d / f.det();
    return 4.0 * nu2_la2 - 1.0;
}

double ResidualReport::max() const { return *std::max_element(r, r + 6); }

ResidualReport basic_system_residuals(const SurfacePatch& patch, const GridSpec& grid, const ResidualOptions& opts) {
    grid.validate();
    if (grid.nu < 3 || grid.nv < 3) throw Error(ErrorKind::InvalidGrid, "residuals need interior nodes");
    const double h = default_step(patch, opts.step);
    struct Sample {
        GeometricFunctions g;
        double E, G, Ev, Gu;
    };
    auto sample = [&](double u, double v) {
        Sample s;
        s.g = functions_at(patch, u, v, opts.frame, nullptr);
        if (opts.perturb) opts.perturb(u, v, s.g);
        const SurfaceJet j = patch.eval(u, v);
        s.E = inner(j.z_u, j.z_u);
        s.G = inner(j.z_v, j.z_v);
        s.Ev = 2 * inner(j.z_uv, j.z_u);
        s.Gu = 2 * inner(j.z_uv, j.z_v);
        return s;
    };
    const int niu = grid.nu - 2, niv = grid.nv - 2;
    struct Out {
        double r[6], k, kappa, pu, pv;
    };
    std::vector<Out> out(static_cast<std::size_t>(niu) * niv);
    parallel_for(out.size(), [&](std::size_t k) {
        const int i = 1 + static_cast<int>(k / niv), j = 1 + static_cast<int>(k % niv);
        const double u = grid.u(i), v = grid.v(j);
        const Sample c = sample(u, v);
        Sample su[4], sv[4];
        const double off[4] = {-2, -1, 1, 2};
        for (int m = 0; m < 4; ++m) {
            su[m] = sample(u + off[m] * h, v);
            sv[m] = sample(u, v + off[m] * h);
        }
        auto du = [&](auto f) { return num::d1_central4(f(su[0]), f(su[1]), f(su[2]), f(su[3]), h); };
        auto dv = [&](auto f) { return num::d1_central4(f(sv[0]), f(sv[1]), f(sv[2]), f(sv[3]), h); };
        const GeometricFunctions& g = c.g;
        const double sE = std::sqrt(c.E), sG = std::sqrt(c.G);
        const double mu_u = du([](const Sample& s) { return s.g.mu; });
        const double mu_v = dv([](const Sample& s) { return s.g.mu; });
        const double la_u = du([](const Sample& s) { return s.g.lambda; });
        const double la_v = dv([](const Sample& s) { return s.g.lambda; });
        const double nu_u = du([](const Sample& s) { return s.g.nu; });
        const double nu_v = dv([](const Sample& s) { return s.g.nu; });
        const double g1_v = dv([](const Sample& s) { return s.g.gamma1; });
        const double g2_u = du([](const Sample& s) { return s.g.gamma2; });
        const double b1_v = dv([](const Sample& s) { return s.g.beta1; });
        const double b2_u = du([](const Sample& s) { return s.g.beta2; });
        Out& o = out[k];
        o.r[0] = std::abs(2 * g.mu * g.gamma2 + g.mu * g.beta1 - mu_u / sE);
        o.r[1] = std::abs(2 * g.mu * g.gamma1 + g.mu * g.beta2 - mu_v / sG);
        o.r[2] = std::abs(2 * g.lambda * g.mu - (g2_u / sE + g1_v / sG - (g.gamma1 * g.gamma1 + g.gamma2 * g.gamma2)));
        o.r[3] = std::abs(2 * g.lambda * g.gamma2 - 2 * g.nu * g.gamma1 - g.lambda * g.beta1 + (1 + g.nu) * g.beta2 -
                          (la_u / sE - nu_v / sG));
        o.r[4] = std::abs(2 * g.lambda * g.gamma1 + 2 * g.nu * g.gamma2 + (1 - g.nu) * g.beta1 - g.lambda * g.beta2 -
                          (nu_u / sE + la_v / sG));
        o.r[5] = std::abs(g.gamma1 * g.beta1 - g.gamma2 * g.beta2 + 2 * g.nu * g.mu - (-b2_u / sE + b1_v / sG));
        // intrinsic curvature of the orthogonal metric E du^2 + G dv^2
        const double P_v = dv([](const Sample& s) { return s.Ev / std::sqrt(s.E * s.G); });
        const double Q_u = du([](const Sample& s) { return s.Gu / std::sqrt(s.E * s.G); });
        const double K_int = -(P_v + Q_u) / (2 * sE * sG);
        o.k = std::abs(2 * g.lambda * g.mu - K_int);
        // curvature of the normal connection from the connection form
        const double w_u = du([](const Sample& s) { return std::sqrt(s.G) * s.g.beta2; });
        const double w_v = dv([](const Sample& s) { return std::sqrt(s.E) * s.g.beta1; });
        o.kappa = std::abs(-2 * g.mu * g.nu - (w_u - w_v) / (sE * sG));
        o.pu = mu_u / (g.mu * (2 * g.gamma2 + g.beta1));
        o.pv = mu_v / (g.mu * (2 * g.gamma1 + g.beta2));
    });
    ResidualReport rep;
    rep.min_positivity_u = rep.min_positivity_v = std::numeric_limits<double>::infinity();
    for (const Out& o : out) {
        for (int m = 0; m < 6; ++m) rep.r[m] = std::max(rep.r[m], o.r[m]);
        rep.k_check = std::max(rep.k_check, o.k);
        rep.kappa_check = std::max(rep.kappa_check, o.kappa);
        rep.min_positivity_u = std::min(rep.min_positivity_u, o.pu);
        rep.min_positivity_v = std::min(rep.min_positivity_v, o.pv);
    }
    return rep;
}

}  // namespace mtrap
