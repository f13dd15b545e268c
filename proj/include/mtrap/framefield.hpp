#pragma once

#include <functional>

#include "mtrap/grid.hpp"
#include "mtrap/minkowski.hpp"
#include "mtrap/surface.hpp"

namespace mtrap {

// Orthonormal geometric frame {x, y, n1, n2}: x, y along the parameter
// lines, n1 = H, n2 the complementary null normal.
struct FrameField {
    Vector4 x, y;
    NullNormalFrame frame;
};

// Largest violation of the orthonormality relations of a frame.
double frame_defect(const FrameField& f);

// Throws NotMarginallyTrapped when H is not a nonzero lightlike vector
// (|H|_inf < 1e-8 counts as zero).
FrameField geometric_frame(const SurfaceJet& jet);

struct GeometricFunctions {
    double nu = 0, lambda = 0, mu = 0, gamma1 = 0, gamma2 = 0, beta1 = 0, beta2 = 0;
};

inline constexpr double kMuTol = 1e-12;

struct FrameFunctionOptions {
    double cross_abs = 1e-5;  // cross-check tolerance: abs + rel * scale
    double cross_rel = 1e-5;
    double step = 0.0;        // stencil step for derivatives of H; <= 0 -> 1e-3 * domain diagonal
};

// Differences between the two estimates of nu, lambda and mu.
struct CrossCheck {
    double nu = 0, lambda = 0, mu = 0;
};

// The part of the geometric functions determined by the 2-jet alone.
struct JetScalars {
    FrameField frame;
    FirstForm first;
    double nu, lambda, mu, gamma1, gamma2;
    CrossCheck cross;
};

JetScalars jet_scalars(const SurfaceJet& jet);

// Seven geometric functions at (u,v) of a principal-parameter patch. Throws
// InconsistentFrameEquations if a cross-check pair disagrees and
// DegenerateType if |mu| <= kMuTol.
GeometricFunctions geometric_functions(const SurfacePatch& patch, double u, double v,
                                       const FrameFunctionOptions& opts = {}, CrossCheck* cross = nullptr);

struct Curvatures {
    double K, kappa;
};

// K = 2 lambda mu, kappa = -2 mu nu.
inline Curvatures invariants(const GeometricFunctions& g) { return {2 * g.lambda * g.mu, -2 * g.mu * g.nu}; }

// 4 nu^2 + 4 lambda^2 - 1 computed without principal directions
// (via the n1-component of sigma relative to the metric).
double general_type_defect(const SurfaceJet& jet);

struct ResidualReport {
    double r[6] = {0, 0, 0, 0, 0, 0};
    double k_check = 0;      // sup |2 lambda mu - intrinsic Gauss curvature|
    double kappa_check = 0;  // sup |-2 mu nu - curvature of the normal connection|
    double min_positivity_u = 0;  // min mu_u / (mu (2 gamma2 + beta1))
    double min_positivity_v = 0;  // min mu_v / (mu (2 gamma1 + beta2))
    double max() const;
};

struct ResidualOptions {
    FrameFunctionOptions frame;
    double step = 0.0;  // stencil step for partials of the functions; <= 0 -> 1e-3 * diagonal
    // Optional modification of the functions before the residuals are formed
    // (sensitivity studies).
    std::function<void(double u, double v, GeometricFunctions&)> perturb;
};

// Residuals of the six-equation integrability system at the interior nodes.
ResidualReport basic_system_residuals(const SurfacePatch& patch, const GridSpec& grid,
                                      const ResidualOptions& opts = {});

}  // namespace mtrap
