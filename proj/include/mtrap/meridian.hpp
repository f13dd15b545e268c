#pragma once

#include <array>

#include "mtrap/bonnet.hpp"
#include "mtrap/canonical.hpp"
#include "mtrap/framefield.hpp"
#include "mtrap/surface.hpp"

namespace mtrap::meridian {

// Meridian surface of parabolic type: meridian f(u) = u with
// g(u) = (s/(2a^3)) ((a^2u^2 - 2sauc)/(c - sau) - 2c ln|c - sau| + b),
// spherical curve of constant curvature a with w(v) = -(2/a) cos(v + p)
// (w = 2 cos(v + p) for a = -1).
struct MeridianConfig {
    double a = -1.0;
    double b = 0.0;
    double c = 1.0;
    int branch = 1;  // s = +1 or -1
    double p = 0.0;

    void validate() const;  // throws InvalidArgument
    bool is_default() const;
};

double g(const MeridianConfig& cfg, double u);
double g_prime(const MeridianConfig& cfg, double u);
double g_second(const MeridianConfig& cfg, double u);
double omega(const MeridianConfig& cfg, double v);
// Curvature of the meridian curve (f' g'' - g' f'') / (-2 f' g')^{3/2}.
double kappa_m(const MeridianConfig& cfg, double u);

// Default sampling rectangles.
inline constexpr Rect kOriginalDomain{0.5, 2.0, -0.6, 0.6};
inline constexpr Rect kPrincipalDomain{0.3, 2.0, -1.0, 0.0};

// Original parameters (u, v). Throws InvalidDomain unless f > 0 and
// -f'g' > 0 (c - sau != 0) on the u-interval.
SurfacePatch build_patch(const MeridianConfig& cfg, const Rect& domain = kOriginalDomain);

// Principal parameters (ubar, vbar): ubar - vbar = -ln(c - sau)/(sa),
// ubar + vbar = k v with k = -2/a; for the default configuration
// u = e^{ubar - vbar} - 1, v = (ubar + vbar)/2. Throws InvalidDomain unless
// u > 0 on the whole rectangle.
SurfacePatch principal_patch(const MeridianConfig& cfg, const Rect& domain = kPrincipalDomain);

// Closed-form reference values of the default configuration (a=-1, b=0, c=1,
// s=1, p=0). t denotes e^{ubar - vbar}.
class ReferenceValues {
public:
    // ---- original parameters
    static double E(double u) { return u * u / ((u + 1) * (u + 1)); }
    static double F(double) { return 0.0; }
    static double G(double u) { return 4 * u * u; }
    static double L(double) { return 0.0; }
    static double M(double u) { return -2.0 / (u * (u + 1)); }
    static double N(double) { return 0.0; }
    // The unit normals n1 (spacelike) and n2 (timelike) of the original
    // parametrization, in terms of which H = -(n1 - n2)/(2u).
    static Vector4 unit_normal_1(double u, double v);
    static Vector4 unit_normal_2(double u, double v);

    // ---- principal parameters
    static double t(double ub, double vb) { return std::exp(ub - vb); }
    static double Ebar(double ub, double vb);
    static double Gbar(double ub, double vb) { return Ebar(ub, vb); }
    static double nu(double, double) { return 0.0; }
    static double lambda(double ub, double vb);
    static double mu(double ub, double vb);
    static double gamma1(double ub, double vb);
    static double gamma2(double ub, double vb) { return -gamma1(ub, vb); }
    static double beta1(double ub, double vb) { return -gamma1(ub, vb); }
    static double beta2(double ub, double vb) { return gamma1(ub, vb); }
    static double K(double ub, double vb) { return 2 * lambda(ub, vb) * mu(ub, vb); }
    // Geometric frame {x, y, n1 = H, n2}.
    static FrameField frame(double ub, double vb);

    // phi_1..phi_4 as printed with the example (these are the closed forms
    // evaluated with derivatives in the original parameter u = t - 1).
    static PhiQuadruple phi_printed(double ub, double vb);
    // phi_1..phi_4 with derivatives in the principal parameters.
    static PhiQuadruple phi_principal(double ub, double vb);
    // Gauge integrands as printed with the example.
    static double a_printed(double ub, double vb);
    static double b_printed(double ub, double vb);
    // Gauge integrands in principal parameters: (ln sqrt Ebar)_vbar, (ln sqrt Gbar)_ubar.
    static double a_principal(double ub, double vb) { return -t(ub, vb) / (t(ub, vb) - 1); }
    static double b_principal(double ub, double vb) { return t(ub, vb) / (t(ub, vb) - 1); }

    // Gauge constants chosen with the example for base point (u0, v0).
    static double gauge_c1(double u0, double v0);
    static double gauge_c2(double u0, double v0);
    // The example's base point (0, ln 2) with those constants.
    static CanonicalGauge example_gauge();

    // Gauge functions and canonical parameters as printed with the example.
    static double varphi_printed(double ub, double vb, double v0);
    static double psi_printed(double ub, double vb, double u0);
    static double u_tilde_printed(double ub, double vb);
    static double v_tilde_printed(double ub, double vb);

    // Exact gauge functions (constants, since Ebar = Gbar) and canonical
    // parameters for an arbitrary gauge, continued along the closed forms.
    static double varphi_exact(const CanonicalGauge& gauge);
    static double psi_exact(const CanonicalGauge& gauge);
    static double u_tilde_exact(double ub, const CanonicalGauge& gauge) {
        return gauge.u0 + varphi_exact(gauge) * (ub - gauge.u0);
    }
    static double v_tilde_exact(double vb, const CanonicalGauge& gauge) {
        return gauge.v0 + psi_exact(gauge) * (vb - gauge.v0);
    }
};

// Throws UnsupportedConfig for non-default configurations.
ReferenceValues reference(const MeridianConfig& cfg);

// A gauge whose base point lies outside the sampling rectangle, re-expressed
// with a base point inside it: the constants are adjusted by the closed-form
// values of sqrt(E), sqrt(G) at both points, and the anchors are the values of
// the canonical parameters at the new base point.
struct TransferredGauge {
    CanonicalGauge gauge;
    double u_anchor = 0, v_anchor = 0;
};

TransferredGauge transfer_gauge(const CanonicalGauge& gauge, double u1, double v1);

// Canonical patch of the default configuration over the principal rectangle
// [1, 1.5] x [-0.5, 0] with base point (1, -0.5), gauge c1 = c2 = -ln 4 and
// canonical anchors (0, 0); the canonical image is about [0, 0.6155]^2.
struct CanonicalPatch {
    SurfacePatch patch;     // canonical parameters
    CanonicalGauge gauge;   // base point (0, 0) in canonical parameters
};
CanonicalPatch round_trip_patch();

// Invariant triple of round_trip_patch() sampled on the square [0, L]^2 with
// the given step (L = 39/64, a multiple of 1/64), ready for reconstruction.
inline constexpr double kRoundTripSide = 39.0 / 64.0;
bonnet::ReconstructionInput round_trip_input(const CanonicalPatch& cp, double step);

}  // namespace mtrap::meridian
