#include "mtrap/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "mtrap/errors.hpp"
#include "mtrap/framefield.hpp"
#include "mtrap/parallel.hpp"

namespace mtrap {

// ------------------------------------------------------------ SurfacePatch

SurfacePatch SurfacePatch::analytic(const Rect& domain, JetFn jet) {
    domain.validate();
    SurfacePatch p;
    p.domain_ = domain;
    p.mode_ = DerivativeMode::Analytic;
    p.jet_ = std::make_shared<const JetFn>(std::move(jet));
    return p;
}

SurfacePatch SurfacePatch::finite_difference(const Rect& domain, PositionFn position, double h) {
    domain.validate();
    SurfacePatch p;
    p.domain_ = domain;
    p.mode_ = DerivativeMode::FiniteDifference;
    p.h_ = h > 0 ? h : 1e-4 * domain.diagonal();
    p.pos_ = std::make_shared<const PositionFn>(std::move(position));
    const double step = p.h_;
    auto pos = p.pos_;
    p.jet_ = std::make_shared<const JetFn>([pos, step](double u, double v) {
        const auto& z = *pos;
        SurfaceJet j;
        j.z = z(u, v);
        const Vector4 up = z(u + step, v), um = z(u - step, v);
        const Vector4 vp = z(u, v + step), vm = z(u, v - step);
        j.z_u = (up - um) / (2 * step);
        j.z_v = (vp - vm) / (2 * step);
        j.z_uu = (up - 2.0 * j.z + um) / (step * step);
        j.z_vv = (vp - 2.0 * j.z + vm) / (step * step);
        j.z_uv = (z(u + step, v + step) - z(u + step, v - step) - z(u - step, v + step) + z(u - step, v - step)) /
                 (4 * step * step);
        return j;
    });
    return p;
}

SurfaceJet SurfacePatch::jet(double u, double v) const {
    const double slack = 1e-12 * std::max(1.0, domain_.diagonal());
    bool ok = domain_.contains(u, v, slack);
    if (ok && mode_ == DerivativeMode::FiniteDifference) {
        const double m = 2 * h_ - slack;
        ok = u - domain_.u_min >= m && domain_.u_max - u >= m && v - domain_.v_min >= m && domain_.v_max - v >= m;
    }
    if (!ok) throw Error(ErrorKind::OutOfDomain, "jet requested outside the patch domain");
    return eval(u, v);
}

SurfaceJet SurfacePatch::eval(double u, double v) const { return (*jet_)(u, v); }

Vector4 SurfacePatch::position(double u, double v) const { return pos_ ? (*pos_)(u, v) : eval(u, v).z; }

SurfacePatch SurfacePatch::with_domain(const Rect& domain) const {
    domain.validate();
    SurfacePatch p = *this;
    p.domain_ = domain;
    return p;
}

SurfacePatch reparametrize(const SurfacePatch& patch, const Rect& new_domain,
                           std::function<ChartJet(double, double)> chart) {
    auto base = patch;
    return SurfacePatch::analytic(new_domain, [base, chart = std::move(chart)](double p, double q) {
        const ChartJet m = chart(p, q);
        const SurfaceJet j = base.eval(m.u, m.v);
        SurfaceJet r;
        r.z = j.z;
        r.z_u = m.u_p * j.z_u + m.v_p * j.z_v;
        r.z_v = m.u_q * j.z_u + m.v_q * j.z_v;
        r.z_uu = (m.u_p * m.u_p) * j.z_uu + (2 * m.u_p * m.v_p) * j.z_uv + (m.v_p * m.v_p) * j.z_vv +
                 m.u_pp * j.z_u + m.v_pp * j.z_v;
        r.z_uv = (m.u_p * m.u_q) * j.z_uu + (m.u_p * m.v_q + m.u_q * m.v_p) * j.z_uv + (m.v_p * m.v_q) * j.z_vv +
                 m.u_pq * j.z_u + m.v_pq * j.z_v;
        r.z_vv = (m.u_q * m.u_q) * j.z_uu + (2 * m.u_q * m.v_q) * j.z_uv + (m.v_q * m.v_q) * j.z_vv +
                 m.u_qq * j.z_u + m.v_qq * j.z_v;
        return r;
    });
}

SurfacePatch reparametrize_affine(const SurfacePatch& patch, double su, double cu, double sv, double cv) {
    if (su == 0.0 || sv == 0.0) throw Error(ErrorKind::InvalidArgument, "affine reparametrization must be invertible");
    const Rect& d = patch.domain();
    const double p1 = (d.u_min - cu) / su, p2 = (d.u_max - cu) / su;
    const double q1 = (d.v_min - cv) / sv, q2 = (d.v_max - cv) / sv;
    const Rect nd{std::min(p1, p2), std::max(p1, p2), std::min(q1, q2), std::max(q1, q2)};
    return reparametrize(patch, nd, [=](double p, double q) {
        return ChartJet{su * p + cu, sv * q + cv, su, 0.0, 0.0, sv, 0, 0, 0, 0, 0, 0};
    });
}

SurfacePatch transform(const SurfacePatch& patch, const LorentzMotion& motion) {
    auto base = patch;
    return SurfacePatch::analytic(patch.domain(), [base, motion](double u, double v) {
        const SurfaceJet j = base.eval(u, v);
        return SurfaceJet{motion.apply(j.z),         motion.linear(j.z_u),  motion.linear(j.z_v),
                          motion.linear(j.z_uu), motion.linear(j.z_uv), motion.linear(j.z_vv)};
    });
}

// ------------------------------------------------------------ forms

FirstForm first_form(const SurfaceJet& j) {
    const FirstForm f{inner(j.z_u, j.z_u), inner(j.z_u, j.z_v), inner(j.z_v, j.z_v)};
    if (!(f.E > 0) || !(f.G > 0) || !(f.det() > 0))
        throw Error(ErrorKind::NotSpacelike, "induced metric is not positive definite");
    return f;
}

namespace {

Vector4 tangential_part(const Vector4& w, const SurfaceJet& j, const FirstForm& f) {
    const double a = inner(w, j.z_u), b = inner(w, j.z_v), det = f.det();
    const double cu = (f.G * a - f.F * b) / det, cv = (-f.F * a + f.E * b) / det;
    return cu * j.z_u + cv * j.z_v;
}

}  // namespace

NormalParts normal_parts(const SurfaceJet& j) {
    const FirstForm f = first_form(j);
    return {j.z_uu - tangential_part(j.z_uu, j, f), j.z_uv - tangential_part(j.z_uv, j, f),
            j.z_vv - tangential_part(j.z_vv, j, f)};
}

Vector4 mean_curvature_vector(const SurfaceJet& j) {
    const FirstForm f = first_form(j);
    const NormalParts s = normal_parts(j);
    return (f.G * s.uu - 2 * f.F * s.uv + f.E * s.vv) / (2 * f.det());
}

void null_coordinates(const Vector4& w, const NullNormalFrame& fr, double out[2]) {
    out[0] = -inner(w, fr.n2);
    out[1] = -inner(w, fr.n1);
}

SecondFormDecomposed decompose_second_form(const SurfaceJet& j, const NullNormalFrame& frame) {
    const NormalParts s = normal_parts(j);
    SecondFormDecomposed d{};
    null_coordinates(s.uu, frame, d.c11);
    null_coordinates(s.uv, frame, d.c12);
    null_coordinates(s.vv, frame, d.c22);
    return d;
}

GMSecondForm gm_second_form(const SurfaceJet& j, const NullNormalFrame& frame) {
    if (null_frame_defect(frame) > 1e-8 * std::max(1.0, norm_inf(frame.n1) * norm_inf(frame.n2)))
        throw Error(ErrorKind::DegeneratePlane, "normal frame is not pseudo-orthonormal");
    const FirstForm f = first_form(j);
    const SecondFormDecomposed d = decompose_second_form(j, frame);
    const double W = std::sqrt(f.det());
    auto det2 = [](const double a[2], const double b[2]) { return a[0] * b[1] - a[1] * b[0]; };
    return {kGMSecondFormSign * 2.0 / W * det2(d.c11, d.c12), kGMSecondFormSign * 1.0 / W * det2(d.c11, d.c22),
            kGMSecondFormSign * 2.0 / W * det2(d.c12, d.c22)};
}

namespace {

// Normal projections of the ambient basis vectors.
std::array<Vector4, 4> normal_projections(const SurfaceJet& j) {
    const FirstForm f = first_form(j);
    std::array<Vector4, 4> r;
    const Vector4 e[4] = {basis::e1, basis::e2, basis::e3, basis::e4};
    for (int k = 0; k < 4; ++k) r[k] = e[k] - tangential_part(e[k], j, f);
    return r;
}

}  // namespace

Vector4 normal_seed(const SurfaceJet& j, const Vector4& n1) {
    const auto proj = normal_projections(j);
    double largest = 0.0;
    for (const auto& p : proj) largest = std::max(largest, norm_inf(p));
    Vector4 best = proj[0];
    double score = -1.0;
    for (const auto& p : proj) {
        // projections of (nearly) tangent basis vectors are round-off only
        if (norm_inf(p) < 1e-6 * largest) continue;
        const double s = std::abs(inner(p, n1)) / norm_inf(p);
        if (s > score) {
            score = s;
            best = p;
        }
    }
    return best;
}

NullNormalFrame normal_null_frame(const SurfaceJet& j) {
    const Vector4 H = mean_curvature_vector(j);
    const double nH = norm_inf(H);
    if (nH > 1e-8 && std::abs(inner(H, H)) <= kLightlikeTol * std::max(1.0, nH * nH))
        return complete_null_frame(H, normal_seed(j, H));
    // Generic pseudo-orthonormal null pair of the (Lorentzian) normal plane.
    const auto proj = normal_projections(j);
    int k1 = 0;
    for (int k = 1; k < 4; ++k)
        if (norm_inf(proj[k]) > norm_inf(proj[k1])) k1 = k;
    const Vector4 w1 = proj[k1];
    int k2 = -1;
    double best = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (k == k1) continue;
        const double a = inner(w1, w1), b = inner(w1, proj[k]), c = inner(proj[k], proj[k]);
        const double g = std::abs(a * c - b * b);
        if (g > best) {
            best = g;
            k2 = k;
        }
    }
    if (k2 < 0) throw Error(ErrorKind::DegeneratePlane, "normal plane could not be resolved");
    const Vector4 w2 = proj[k2];
    const double a = inner(w1, w1), b = inner(w1, w2), c = inner(w2, w2);
    Vector4 l1, l2;
    if (std::abs(c) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
        const double disc = std::sqrt(std::max(0.0, b * b - a * c));
        l1 = w1 + ((-b + disc) / c) * w2;
        l2 = w1 + ((-b - disc) / c) * w2;
    } else {
        l1 = w2;
        l2 = w1 + (-a / (2 * b)) * w2;
    }
    return complete_null_frame(l1, l2);
}

// ------------------------------------------------------------- predicates

Classification classify(const SurfacePatch& patch, const GridSpec& grid, double tol) {
    grid.validate();
    const std::size_t n = grid.size();
    struct Node {
        bool spacelike = false;
        double E = 0, G = 0, det = 0, HH = 0, Hn = 0, defect = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<Node> nodes(n);
    parallel_for(n, [&](std::size_t k) {
        const int i = static_cast<int>(k / grid.nv), jj = static_cast<int>(k % grid.nv);
        const SurfaceJet j = patch.jet(grid.u(i), grid.v(jj));
        Node& r = nodes[k];
        r.E = inner(j.z_u, j.z_u);
        r.G = inner(j.z_v, j.z_v);
        r.det = r.E * r.G - inner(j.z_u, j.z_v) * inner(j.z_u, j.z_v);
        r.spacelike = r.E > 0 && r.G > 0 && r.det > 0;
        if (!r.spacelike) return;
        const Vector4 H = mean_curvature_vector(j);
        r.HH = inner(H, H);
        r.Hn = norm_inf(H);
        try {
            r.defect = general_type_defect(j);
        } catch (const Error&) {
        }
    });
    Classification c;
    c.spacelike = true;
    c.min_E = c.min_G = c.min_det = std::numeric_limits<double>::infinity();
    c.inf_H = c.inf_general_defect = std::numeric_limits<double>::infinity();
    bool defect_available = true;
    for (const Node& r : nodes) {
        c.spacelike = c.spacelike && r.spacelike;
        c.min_E = std::min(c.min_E, r.E);
        c.min_G = std::min(c.min_G, r.G);
        c.min_det = std::min(c.min_det, r.det);
        if (!r.spacelike) continue;
        c.sup_HH = std::max(c.sup_HH, std::abs(r.HH));
        c.inf_H = std::min(c.inf_H, r.Hn);
        if (std::isnan(r.defect))
            defect_available = false;
        else
            c.inf_general_defect = std::min(c.inf_general_defect, std::abs(r.defect));
    }
    c.marginally_trapped = c.spacelike && c.sup_HH <= tol && c.inf_H > tol;
    c.general_type = c.marginally_trapped && defect_available && c.inf_general_defect > tol;
    return c;
}

PrincipalReport principal_report(const SurfacePatch& patch, const GridSpec& grid, double tol) {
    grid.validate();
    const std::size_t n = grid.size();
    std::vector<std::array<double, 6>> vals(n);
    parallel_for(n, [&](std::size_t k) {
        const int i = static_cast<int>(k / grid.nv), jj = static_cast<int>(k % grid.nv);
        const SurfaceJet j = patch.jet(grid.u(i), grid.v(jj));
        const FirstForm f = first_form(j);
        const GMSecondForm s = gm_second_form(j, normal_null_frame(j));
        vals[k] = {std::abs(f.F), std::max(f.E, f.G), std::abs(s.M), std::abs(s.L), std::abs(s.N), 0.0};
    });
    PrincipalReport r;
    for (const auto& v : vals) {
        r.sup_F = std::max(r.sup_F, v[0]);
        r.sup_EG = std::max(r.sup_EG, v[1]);
        r.sup_M = std::max(r.sup_M, v[2]);
        r.sup_L = std::max(r.sup_L, v[3]);
        r.sup_N = std::max(r.sup_N, v[4]);
    }
    r.principal = r.sup_F <= tol * r.sup_EG && r.sup_M <= tol * (r.sup_L + r.sup_N + 1.0);
    return r;
}

}  // namespace mtrap
