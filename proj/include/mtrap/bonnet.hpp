#pragma once

#include <array>
#include <vector>

#include "mtrap/canonical.hpp"
#include "mtrap/framefield.hpp"
#include "mtrap/grid.hpp"
#include "mtrap/minkowski.hpp"
#include "mtrap/numerics.hpp"
#include "mtrap/surface.hpp"

namespace mtrap::bonnet {

// Prescribed invariants in canonical parameters. The gauge base point
// (u0, v0) must be a grid node.
struct ReconstructionInput {
    GridSpec grid;
    Field2D nu, lambda, mu;
    CanonicalGauge gauge;
    double compatibility_threshold = 1e-3;
    double solver_tol = 1e-12;
    int max_iterations = 50;
    double degenerate_tol = kDegenerateTol;
    FrameField initial_frame{basis::e1, basis::e2, {basis::xi1, basis::xi2}};
    Vector4 initial_position{};
    // Stencils for the partials of nu, lambda, mu at the two nodes nearest each edge.
    num::EdgeOrder edge_order = num::EdgeOrder::Fourth;
    bool check_drift = true;  // throw MetricDriftExceeded when the Gram drift exceeds 100 step^2

    void validate() const;  // InvalidGrid / InvalidArgument / DegenerateType
    int i0() const;
    int j0() const;
};

struct PhiFields {
    Field2D phi1, phi2, phi3, phi4;
};

// phi_1..phi_4 at every node, with partials of the gridded invariants by
// 4th-order central differences (one-sided at the edges, see edge_order).
PhiFields phi_fields(const ReconstructionInput& in);

struct InitialData {
    std::vector<double> g1;  // along v = v0, indexed by u-node
    std::vector<double> g2;  // along u = u0, indexed by v-node
};

InitialData initial_data(const ReconstructionInput& in, const PhiFields& phi);
InitialData initial_data(const ReconstructionInput& in);

struct CauchySolution {
    Field2D Phi, Psi;
    double cauchy_residual = 0;  // max PDE defect at cell centres
    int max_sweeps = 0;          // largest number of fixed-point sweeps used by a row
};

// Row-marching solver of Phi_v = phi1 Phi + phi2 Psi, Psi_u = phi3 Phi + phi4 Psi
// with Phi(u, v0) = g1, Psi(u0, v) = g2.
CauchySolution solve_cauchy(const ReconstructionInput& in, const PhiFields& phi, const InitialData& init);
CauchySolution solve_cauchy(const ReconstructionInput& in);

struct CompatibilityResiduals {
    double res1 = 0;  // Gauss equation
    double res2 = 0;  // normal curvature equation
};

// Sup-norms over nodes at least `margin` nodes away from the boundary.
CompatibilityResiduals compatibility_residuals(const Field2D& Phi, const Field2D& Psi, const ReconstructionInput& in,
                                               int margin = 4);

struct DerivedCoefficients {
    Field2D gamma1, gamma2, beta1, beta2;
    double min_positivity_u = 0;  // min mu_u / (mu (2 gamma2 + beta1))
    double min_positivity_v = 0;  // min mu_v / (mu (2 gamma1 + beta2))
};

DerivedCoefficients derived_coefficients(const Field2D& Phi, const Field2D& Psi, const ReconstructionInput& in,
                                         const PhiFields& phi);

// Frame grid: for each node the rows (x, y, n1, n2).
using Frame = std::array<Vector4, 4>;

struct FrameGrid {
    int nu = 0, nv = 0;
    std::vector<Frame> frames;
    Frame& operator()(int i, int j) { return frames[static_cast<std::size_t>(i) * nv + j]; }
    const Frame& operator()(int i, int j) const { return frames[static_cast<std::size_t>(i) * nv + j]; }
};

struct FrameIntegration {
    FrameGrid frame;
    double metric_drift = 0;
    double frame_commutator_residual = 0;
};

FrameIntegration integrate_frame(const ReconstructionInput& in, const Field2D& Phi, const Field2D& Psi,
                                 const DerivedCoefficients& coeffs);

struct PositionIntegration {
    std::vector<Vector4> z;  // row-major (u index outer)
    double closure_defect = 0;
};

PositionIntegration integrate_position(const ReconstructionInput& in, const Field2D& Phi, const Field2D& Psi,
                                       const FrameGrid& frame);

struct Diagnostics {
    double cauchy_residual = 0;
    double compatibility_residual_1 = 0;
    double compatibility_residual_2 = 0;
    double frame_commutator_residual = 0;
    double metric_drift = 0;
    double closure_defect = 0;
    double min_positivity_u = 0;
    double min_positivity_v = 0;
};

struct ReconstructionResult {
    GridSpec grid;
    Field2D Phi, Psi, E, G;
    Field2D gamma1, gamma2, beta1, beta2;
    FrameGrid frame;
    std::vector<Vector4> z;
    Diagnostics diagnostics;

    const Vector4& position(int i, int j) const { return z[static_cast<std::size_t>(i) * grid.nv + j]; }
};

// initial_data -> solve_cauchy -> compatibility check (CompatibilityViolated)
// -> derived_coefficients -> integrate_frame -> integrate_position.
ReconstructionResult reconstruct(const ReconstructionInput& in);

// Sup-norm differences of the nine functions E, G, nu, lambda, mu, gamma1,
// gamma2, beta1, beta2 between the reconstruction (recomputed from its
// position and frame grids by finite differences) and a reference patch.
struct InvariantTable {
    static constexpr int kCount = 9;
    static constexpr const char* kNames[kCount] = {"E",      "G",      "nu",    "lambda", "mu",
                                                   "gamma1", "gamma2", "beta1", "beta2"};
    std::array<double, kCount> diff{};
    double max() const;
};

// Compares at every node of `grid`; each node must coincide with a node of the
// reconstruction grid lying at least two nodes from its boundary.
InvariantTable compare_invariants(const ReconstructionResult& result, const SurfacePatch& reference,
                                  const GridSpec& grid, const FrameFunctionOptions& opts = {});
// Compares at every `stride`-th node at least two nodes from the boundary.
InvariantTable compare_invariants(const ReconstructionResult& result, const SurfacePatch& reference, int stride = 1,
                                  const FrameFunctionOptions& opts = {});

// The nine functions of a reference patch at a point, in table order.
std::array<double, InvariantTable::kCount> reference_invariants(const SurfacePatch& reference, double u, double v,
                                                                const FrameFunctionOptions& opts = {});

}  // namespace mtrap::bonnet
