#include "mtrap/meridian.hpp"

#include <cmath>
#include <numbers>

#include "mtrap/errors.hpp"
#include "mtrap/parallel.hpp"

namespace mtrap::meridian {

using basis::e1;
using basis::e2;
using basis::xi1;
using basis::xi2;

void MeridianConfig::validate() const {
    if (a == 0.0) throw Error(ErrorKind::InvalidArgument, "meridian constant a must be nonzero");
    if (c == 0.0) throw Error(ErrorKind::InvalidArgument, "meridian constant c must be nonzero");
    if (branch != 1 && branch != -1) throw Error(ErrorKind::InvalidArgument, "branch must be +1 or -1");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(p))
        throw Error(ErrorKind::InvalidArgument, "meridian constants must be finite");
}

bool MeridianConfig::is_default() const { return a == -1.0 && b == 0.0 && c == 1.0 && branch == 1 && p == 0.0; }

namespace {

double D(const MeridianConfig& cfg, double u) { return cfg.c - cfg.branch * cfg.a * u; }

}  // namespace

double g(const MeridianConfig& cfg, double u) {
    const double d = D(cfg, u), s = cfg.branch, a = cfg.a, c = cfg.c;
    // (a^2u^2 - 2sauc)/(c - sau) simplifies to D - c^2/D
    return s / (2 * a * a * a) * (d - c * c / d - 2 * c * std::log(std::abs(d)) + cfg.b);
}

double g_prime(const MeridianConfig& cfg, double u) {
    const double d = D(cfg, u);
    return -u * u / (2 * d * d);
}

double g_second(const MeridianConfig& cfg, double u) {
    const double d = D(cfg, u);
    return -cfg.c * u / (d * d * d);
}

double omega(const MeridianConfig& cfg, double v) { return -2.0 / cfg.a * std::cos(v + cfg.p); }

double kappa_m(const MeridianConfig& cfg, double u) {
    // f = u: (f' g'' - g' f'') / (-2 f' g')^{3/2}
    return g_second(cfg, u) / std::pow(-2 * g_prime(cfg, u), 1.5);
}

namespace {

struct Curve {
    double C, S, Q;        // w cos v, w sin v, w^2/2
    double Cv, Sv, Qv;     // first derivatives
    double Cvv, Svv, Qvv;  // second derivatives
};

Curve curve(const MeridianConfig& cfg, double v) {
    const double k = -2.0 / cfg.a;
    const double w = k * std::cos(v + cfg.p), wv = -k * std::sin(v + cfg.p), wvv = -w;
    const double cv = std::cos(v), sv = std::sin(v);
    Curve r;
    r.C = w * cv;
    r.S = w * sv;
    r.Q = 0.5 * w * w;
    r.Cv = wv * cv - w * sv;
    r.Sv = wv * sv + w * cv;
    r.Qv = w * wv;
    r.Cvv = wvv * cv - 2 * wv * sv - w * cv;
    r.Svv = wvv * sv + 2 * wv * cv - w * sv;
    r.Qvv = wv * wv + w * wvv;
    return r;
}

SurfaceJet original_jet(const MeridianConfig& cfg, double u, double v) {
    const Curve k = curve(cfg, v);
    const double gu = g(cfg, u), g1 = g_prime(cfg, u), g2 = g_second(cfg, u);
    SurfaceJet j;
    j.z = (u * k.C) * e1 + (u * k.S) * e2 + (u * k.Q + gu) * xi1 + u * xi2;
    j.z_u = k.C * e1 + k.S * e2 + (k.Q + g1) * xi1 + xi2;
    j.z_v = u * (k.Cv * e1 + k.Sv * e2 + k.Qv * xi1);
    j.z_uu = g2 * xi1;
    j.z_uv = k.Cv * e1 + k.Sv * e2 + k.Qv * xi1;
    j.z_vv = u * (k.Cvv * e1 + k.Svv * e2 + k.Qvv * xi1);
    return j;
}

void check_u_interval(const MeridianConfig& cfg, double u_min, double u_max) {
    if (!(u_min > 0)) throw Error(ErrorKind::InvalidDomain, "meridian requires f(u) = u > 0");
    const double d1 = D(cfg, u_min), d2 = D(cfg, u_max);
    if (!(d1 * d2 > 0)) throw Error(ErrorKind::InvalidDomain, "c - s a u vanishes on the u-interval (-f'g' = 0)");
}

// Principal chart: d = ubar - vbar, q = e^{-s a d} = c - s a u.
ChartJet principal_chart(const MeridianConfig& cfg, double ub, double vb) {
    const double sa = cfg.branch * cfg.a, k = -2.0 / cfg.a;
    const double q = std::exp(-sa * (ub - vb));
    ChartJet m;
    m.u = (cfg.c - q) / sa;
    m.v = (ub + vb) / k;
    m.u_p = q;
    m.u_q = -q;
    m.v_p = 1.0 / k;
    m.v_q = 1.0 / k;
    m.u_pp = -sa * q;
    m.u_pq = sa * q;
    m.u_qq = -sa * q;
    m.v_pp = m.v_pq = m.v_qq = 0.0;
    return m;
}

}  // namespace

SurfacePatch build_patch(const MeridianConfig& cfg, const Rect& domain) {
    cfg.validate();
    domain.validate();
    check_u_interval(cfg, domain.u_min, domain.u_max);
    return SurfacePatch::analytic(domain, [cfg](double u, double v) { return original_jet(cfg, u, v); });
}

SurfacePatch principal_patch(const MeridianConfig& cfg, const Rect& domain) {
    cfg.validate();
    domain.validate();
    // u increases with ubar - vbar; the smallest value sits at (u_min, v_max)
    const ChartJet lo = principal_chart(cfg, domain.u_min, domain.v_max);
    const ChartJet hi = principal_chart(cfg, domain.u_max, domain.v_min);
    if (!(lo.u > 0)) throw Error(ErrorKind::InvalidDomain, "principal rectangle reaches u <= 0");
    const SurfacePatch base = SurfacePatch::analytic(Rect{lo.u, hi.u, -1e300, 1e300}, [cfg](double u, double v) {
        return original_jet(cfg, u, v);
    });
    check_u_interval(cfg, lo.u, hi.u);
    return reparametrize(base, domain, [cfg](double p, double q) { return principal_chart(cfg, p, q); });
}

// ------------------------------------------------------------ ReferenceValues

Vector4 ReferenceValues::unit_normal_1(double, double v) {
    return std::cos(2 * v) * e1 + std::sin(2 * v) * e2 + (2 * std::cos(v) * std::cos(v)) * xi1;
}

Vector4 ReferenceValues::unit_normal_2(double u, double v) {
    const double c2 = 2 * std::cos(v) * std::cos(v);
    return ((u + 1) / u) * (c2 * e1 + std::sin(2 * v) * e2 + (c2 + u * u / (2 * (u + 1) * (u + 1))) * xi1 + xi2);
}

double ReferenceValues::Ebar(double ub, double vb) {
    const double s = t(ub, vb) - 1;
    return 2 * s * s;
}

double ReferenceValues::lambda(double ub, double vb) {
    const double tt = t(ub, vb);
    return tt / (tt - 1);
}

double ReferenceValues::mu(double ub, double vb) {
    const double s = t(ub, vb) - 1;
    return 1.0 / (2 * s * s * s);
}

double ReferenceValues::gamma1(double ub, double vb) {
    const double tt = t(ub, vb);
    return tt / (std::numbers::sqrt2 * (tt - 1) * (tt - 1));
}

FrameField ReferenceValues::frame(double ub, double vb) {
    const MeridianConfig cfg;
    const double tt = t(ub, vb), u = tt - 1, v = 0.5 * (ub + vb);
    const SurfaceJet j = original_jet(cfg, u, v);
    // z_ubar = t z_u + z_v / 2, z_vbar = -t z_u + z_v / 2
    const double s = std::sqrt(Ebar(ub, vb));
    const Vector4 x = (tt * j.z_u + 0.5 * j.z_v) / s;
    const Vector4 y = (-tt * j.z_u + 0.5 * j.z_v) / s;
    const Vector4 n1 = unit_normal_1(u, v), n2 = unit_normal_2(u, v);
    return {x, y, {(-1.0 / (2 * u)) * (n1 - n2), u * (n1 + n2)}};
}

PhiQuadruple ReferenceValues::phi_printed(double ub, double vb) {
    const double tt = t(ub, vb);
    return {0.0, -1.0 / (2 * (tt + 1)), 0.0, (tt + 3) / (2 * (tt * tt - 1))};
}

PhiQuadruple ReferenceValues::phi_principal(double ub, double vb) {
    const double tt = t(ub, vb);
    const double q = tt * (tt + 3) / (2 * (tt * tt - 1)), r = tt / (2 * (tt + 1));
    return {-q, -r, r, q};
}

double ReferenceValues::a_printed(double ub, double vb) { return -1.0 / (2 * (t(ub, vb) + 1)); }

double ReferenceValues::b_printed(double ub, double vb) {
    const double tt = t(ub, vb);
    return (tt + 3) / (2 * (tt * tt - 1));
}

double ReferenceValues::gauge_c1(double u0, double v0) {
    const double a = std::exp(u0), b = std::exp(v0);
    return -0.5 * std::log((a - b) * (a - b) * (a + b)) + 1.5 * u0;
}

double ReferenceValues::gauge_c2(double u0, double v0) { return 1.5 * u0 + 0.5 * std::log(std::exp(u0) + std::exp(v0)); }

CanonicalGauge ReferenceValues::example_gauge() {
    const double u0 = 0.0, v0 = std::numbers::ln2;
    return {u0, v0, gauge_c1(u0, v0), gauge_c2(u0, v0)};
}

double ReferenceValues::varphi_printed(double ub, double vb, double v0) {
    const double tt = t(ub, vb);
    return std::numbers::sqrt2 * (tt - 1) * std::sqrt(tt + 1) / (std::exp(2 * ub) - std::exp(2 * v0)) *
           std::exp(0.5 * (3 * ub + vb));
}

double ReferenceValues::psi_printed(double ub, double vb, double u0) {
    const double tt = t(ub, vb);
    return std::numbers::sqrt2 * (std::exp(2 * (u0 - vb)) - 1) / std::sqrt(tt + 1) * std::exp(0.5 * (3 * ub + vb));
}

namespace {

double arccoth(double x) { return 0.5 * std::log((x + 1) / (x - 1)); }

}  // namespace

double ReferenceValues::u_tilde_printed(double ub, double vb) {
    const double ev = std::exp(vb), r = std::exp(vb - ub);
    const double s1 = 2 * std::sqrt(r + 1), s2 = std::sqrt(2 * (ev + 2));
    const double A = 0.5 * (1 - 2 / ev) * std::sqrt(ev + 2) *
                     (std::log((s1 + s2) / std::abs(s1 - s2)) - 2 * std::atanh(s2 / (2 * std::sqrt(ev + 1))));
    const double B = -std::numbers::sqrt2 * (arccoth(std::sqrt(r + 1)) - arccoth(std::sqrt(ev + 1)) +
                                             std::sqrt(ev + 1) / ev - std::sqrt(std::exp(ub - vb) * (std::exp(ub - vb) + 1)));
    const double m = std::abs(ev - 2);
    const double C = (1 + 2 / ev) * std::sqrt(m) *
                     (std::atan(std::sqrt(2 * (r + 1) / m)) - std::atan(std::sqrt(2 * (ev + 1) / m)));
    return A + B + C;
}

double ReferenceValues::v_tilde_printed(double ub, double vb) {
    const double eu = std::exp(ub), q = std::exp(ub - vb);
    return std::numbers::sqrt2 * (arccoth(std::sqrt(std::exp(vb - ub) + 1)) - arccoth(std::sqrt(2 / eu + 1))) +
           std::numbers::sqrt2 * (0.5 * std::sqrt(eu * (eu + 2)) * (4 * eu + 1) -
                                  std::sqrt(q * (q + 1)) * (2 * std::exp(ub + vb) + 1)) +
           std::numbers::ln2;
}

double ReferenceValues::varphi_exact(const CanonicalGauge& gauge) {
    return std::sqrt(Gbar(gauge.u0, gauge.v0)) * std::exp(gauge.c1);
}

double ReferenceValues::psi_exact(const CanonicalGauge& gauge) {
    return std::sqrt(Ebar(gauge.u0, gauge.v0)) * std::exp(gauge.c2);
}

ReferenceValues reference(const MeridianConfig& cfg) {
    cfg.validate();
    if (!cfg.is_default())
        throw Error(ErrorKind::UnsupportedConfig, "closed-form reference values exist only for a=-1, b=0, c=1, p=0");
    return {};
}

TransferredGauge transfer_gauge(const CanonicalGauge& gauge, double u1, double v1) {
    using R = ReferenceValues;
    TransferredGauge t;
    t.gauge.u0 = u1;
    t.gauge.v0 = v1;
    t.gauge.c1 = gauge.c1 + 0.5 * std::log(R::Gbar(gauge.u0, gauge.v0)) - 0.5 * std::log(R::Gbar(u1, v1));
    t.gauge.c2 = gauge.c2 + 0.5 * std::log(R::Ebar(gauge.u0, gauge.v0)) - 0.5 * std::log(R::Ebar(u1, v1));
    t.u_anchor = R::u_tilde_exact(u1, gauge);
    t.v_anchor = R::v_tilde_exact(v1, gauge);
    return t;
}

}  // namespace mtrap::meridian

namespace mtrap::meridian {

CanonicalPatch round_trip_patch() {
    const SurfacePatch principal = principal_patch(MeridianConfig{}, Rect{1.0, 1.5, -0.5, 0.0});
    const double c = -std::log(4.0);
    CanonicalOptions opts;
    opts.u_anchor = 0.0;
    opts.v_anchor = 0.0;
    CanonicalResult r = canonicalize(principal, CanonicalGauge{1.0, -0.5, c, c}, opts);
    return {std::move(r.patch), r.gauge};
}

bonnet::ReconstructionInput round_trip_input(const CanonicalPatch& cp, double step) {
    if (!(step > 0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
    const int n = static_cast<int>(std::lround(kRoundTripSide / step));
    if (n < 4 || std::abs(n * step - kRoundTripSide) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "step must divide the round-trip square side");
    bonnet::ReconstructionInput in;
    in.grid = GridSpec(Rect{0.0, kRoundTripSide, 0.0, kRoundTripSide}, n + 1, n + 1);
    in.nu = Field2D(in.grid);
    in.lambda = Field2D(in.grid);
    in.mu = Field2D(in.grid);
    parallel_for(in.grid.size(), [&](std::size_t k) {
        const int i = static_cast<int>(k / in.grid.nv), j = static_cast<int>(k % in.grid.nv);
        const JetScalars s = jet_scalars(cp.patch.eval(in.grid.u(i), in.grid.v(j)));
        in.nu(i, j) = s.nu;
        in.lambda(i, j) = s.lambda;
        in.mu(i, j) = s.mu;
    });
    in.gauge = cp.gauge;
    return in;
}

}  // namespace mtrap::meridian
