#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "mtrap/framefield.hpp"
#include "mtrap/grid.hpp"
#include "mtrap/numerics.hpp"
#include "mtrap/surface.hpp"

namespace mtrap {

struct PhiQuadruple {
    double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0;
};

// nu, lambda, mu with their first partials at one point.
struct InvariantJet {
    double nu = 0, lambda = 0, mu = 0;
    double nu_u = 0, nu_v = 0, lambda_u = 0, lambda_v = 0, mu_u = 0, mu_v = 0;
};

inline constexpr double kDegenerateTol = 1e-8;

// True when 4 nu^2 + 4 lambda^2 - 1 is within tol of zero.
inline bool degenerate_by_functions(double nu, double lambda, double tol) {
    return std::abs(4 * nu * nu + 4 * lambda * lambda - 1) < tol;
}
// The same condition through the curvatures: |K^2 + kappa^2 - mu^2| < tol mu^2.
inline bool degenerate_by_invariants(double K, double kappa, double mu, double tol) {
    return std::abs(K * K + kappa * kappa - mu * mu) < tol * mu * mu;
}

// The four coefficient functions of the linear system
// (sqrt E)_v = phi1 sqrt E + phi2 sqrt G, (sqrt G)_u = phi3 sqrt E + phi4 sqrt G.
// Throws DegenerateType if |4 nu^2 + 4 lambda^2 - 1| < tol or mu = 0.
PhiQuadruple phi_quadruple(const InvariantJet& j, double tol = kDegenerateTol);

struct CanonicalOptions {
    int nodes = 129;              // quadrature nodes per line
    double certify_tol = 1e-5;    // admissible relative cross-parameter variation
    double step = 0.0;            // stencil step for partials; <= 0 -> 1e-3 * diagonal
    double degenerate_tol = kDegenerateTol;
    std::optional<double> u_anchor;  // value of the new u at u0 (default u0)
    std::optional<double> v_anchor;  // value of the new v at v0 (default v0)
};

// nu, lambda, mu and partials at a point of a principal-parameter patch.
InvariantJet invariant_jet(const SurfacePatch& patch, double u, double v, double step = 0.0);

struct GaugeIntegrands {
    double a = 0;  // phi1 + phi2 sqrt(G)/sqrt(E) = (ln sqrt E)_v
    double b = 0;  // phi3 sqrt(E)/sqrt(G) + phi4 = (ln sqrt G)_u
};

GaugeIntegrands gauge_integrands(const SurfacePatch& patch, double u, double v, const CanonicalOptions& opts = {});

// Base point and gauge constants of the gauge functions.
struct CanonicalGauge {
    double u0 = 0, v0 = 0, c1 = 0, c2 = 0;
    double c() const { return std::exp(c2 - c1); }
};

// Gauge functions sampled on the quadrature grid.
struct GaugeFunctions {
    GridSpec grid;
    Field2D phi, psi;                  // full-grid samples
    std::vector<double> phi_line;      // phi(u_i) along v = v0
    std::vector<double> psi_line;      // psi(v_j) along u = u0
    std::vector<double> dphi_line;     // d phi / du along v = v0
    std::vector<double> dpsi_line;     // d psi / dv along u = u0
    double phi_variation = 0;          // sup |phi(u,v)/phi(u) - 1|
    double psi_variation = 0;
    double sup_phi_dev = 0;            // sup |phi - 1|
    double sup_psi_dev = 0;
};

// Samples phi and psi by nested Simpson quadrature (v-line at fixed u, then
// the u-line at v0; symmetrically for psi). Does not certify.
GaugeFunctions gauge_functions(const SurfacePatch& patch, const CanonicalGauge& gauge, const CanonicalOptions& opts = {});

// As gauge_functions, but throws GaugeNotConstant when phi varies in v or psi
// in u by more than opts.certify_tol.
GaugeFunctions varphi_psi(const SurfacePatch& patch, const CanonicalGauge& gauge, const CanonicalOptions& opts = {});

// Gridded input: fields sampled on a principal-parameter grid, base point at a
// node. Partials by finite differences of the fields.
struct GriddedInvariants {
    GridSpec grid;
    Field2D nu, lambda, mu, E, G;
};

GaugeFunctions gauge_functions(const GriddedInvariants& data, const CanonicalGauge& gauge,
                               const CanonicalOptions& opts = {});

// Monotone maps ubar(u), vbar(v) with inverses.
class ParameterMap {
public:
    ParameterMap() = default;
    ParameterMap(std::vector<double> u, std::vector<double> ubar, std::vector<double> phi, std::vector<double> v,
                 std::vector<double> vbar, std::vector<double> psi);

    double ubar(double u) const { return fu_(u); }
    double vbar(double v) const { return fv_(v); }
    double u_of(double ubar) const { return fu_.inverse(ubar); }
    double v_of(double vbar) const { return fv_.inverse(vbar); }
    double dubar(double u) const { return fu_.derivative(u); }
    double dvbar(double v) const { return fv_.derivative(v); }
    double d2ubar(double u) const { return fu_.second_derivative(u); }
    double d2vbar(double v) const { return fv_.second_derivative(v); }

    const std::vector<double>& u_samples() const { return fu_.x(); }
    const std::vector<double>& ubar_samples() const { return fu_.y(); }
    const std::vector<double>& phi_samples() const { return fu_.slopes(); }
    const std::vector<double>& v_samples() const { return fv_.x(); }
    const std::vector<double>& vbar_samples() const { return fv_.y(); }
    const std::vector<double>& psi_samples() const { return fv_.slopes(); }
    bool monotone() const { return fu_.increasing() && fv_.increasing(); }

    // Image rectangle of a rectangle in the old parameters.
    Rect image(const Rect& r) const;
    // z(u(ubar), v(vbar)) over the image of the patch domain.
    SurfacePatch compose(const SurfacePatch& patch) const;

private:
    num::CubicHermite fu_, fv_;
};

struct CanonicalResult {
    ParameterMap map;
    SurfacePatch patch;              // the composed patch in canonical parameters
    GaugeFunctions gauge_functions;  // certified gauge functions of the input
    CanonicalGauge gauge;            // the same gauge expressed in the new parameters
};

CanonicalResult canonicalize(const SurfacePatch& patch, const CanonicalGauge& gauge, const CanonicalOptions& opts = {});

// Map only, from gridded invariants.
ParameterMap canonical_map(const GriddedInvariants& data, const CanonicalGauge& gauge, const CanonicalOptions& opts = {},
                           GaugeFunctions* out = nullptr);

struct CanonicityReport {
    bool canonical = false;
    double sup_phi_dev = 0, sup_psi_dev = 0;
};

CanonicityReport is_canonical(const SurfacePatch& patch, const CanonicalGauge& gauge, double tol = 1e-5,
                              const CanonicalOptions& opts = {});

struct PmcvReport {
    bool beta_zero = false;
    bool nu_zero = false;
    std::optional<double> lambda_over_mu;  // empty: not constant
    bool canonical_metric_ok = false;
    double sup_beta = 0, sup_nu = 0, ratio_variation = 0, metric_defect = 0;
};

PmcvReport pmcv_report(const SurfacePatch& patch, const GridSpec& grid, double tol,
                       const FrameFunctionOptions& opts = {});

}  // namespace mtrap
