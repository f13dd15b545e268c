#pragma once

#include <functional>
#include <memory>

#include "mtrap/grid.hpp"
#include "mtrap/minkowski.hpp"

namespace mtrap {

// Position and first/second partial derivatives at one parameter point.
struct SurfaceJet {
    Vector4 z, z_u, z_v, z_uu, z_uv, z_vv;
};

enum class DerivativeMode { Analytic, FiniteDifference };

// Evaluable parametrization z(u,v) over a rectangle. Immutable and cheap to
// copy (the evaluator is shared).
class SurfacePatch {
public:
    using JetFn = std::function<SurfaceJet(double, double)>;
    using PositionFn = std::function<Vector4(double, double)>;

    // Hand-coded jets.
    static SurfacePatch analytic(const Rect& domain, JetFn jet);
    // Jets from central differences of the position map with step h
    // (h <= 0 selects the default 1e-4 * domain diagonal).
    static SurfacePatch finite_difference(const Rect& domain, PositionFn position, double h = 0.0);

    const Rect& domain() const { return domain_; }
    DerivativeMode mode() const { return mode_; }
    double fd_step() const { return h_; }

    // Checked evaluation: throws OutOfDomain outside the domain (for
    // finite-difference patches, closer than 2h to the boundary).
    SurfaceJet jet(double u, double v) const;
    // Unchecked evaluation, used by derivative stencils that straddle the
    // boundary; the evaluator must be defined in a neighbourhood.
    SurfaceJet eval(double u, double v) const;
    Vector4 position(double u, double v) const;

    // Same surface with the domain replaced (no reparametrization).
    SurfacePatch with_domain(const Rect& domain) const;

private:
    Rect domain_;
    DerivativeMode mode_ = DerivativeMode::Analytic;
    double h_ = 0.0;
    std::shared_ptr<const JetFn> jet_;
    std::shared_ptr<const PositionFn> pos_;
};

inline SurfaceJet jet(const SurfacePatch& patch, double u, double v) { return patch.jet(u, v); }

// Second-order chart map (u,v) = m(p,q) with derivatives, used to
// reparametrize patches.
struct ChartJet {
    double u, v;
    double u_p, u_q, v_p, v_q;
    double u_pp, u_pq, u_qq, v_pp, v_pq, v_qq;
};

// Patch p(p,q) = z(m(p,q)) over the given new domain (chain rule on jets).
SurfacePatch reparametrize(const SurfacePatch& patch, const Rect& new_domain,
                           std::function<ChartJet(double, double)> chart);

// Affine change u = su*p + cu, v = sv*q + cv (s may be negative: flips).
SurfacePatch reparametrize_affine(const SurfacePatch& patch, double su, double cu, double sv, double cv);

// Patch composed with a Lorentz motion of the ambient space.
SurfacePatch transform(const SurfacePatch& patch, const LorentzMotion& motion);

// ------------------------------------------------------------- forms

struct FirstForm {
    double E, F, G;
    double det() const { return E * G - F * F; }
};

// Throws NotSpacelike unless E > 0, G > 0, EG - F^2 > 0.
FirstForm first_form(const SurfaceJet& jet);

// Normal parts sigma(z_a, z_b) of the second derivatives.
struct NormalParts {
    Vector4 uu, uv, vv;
};

NormalParts normal_parts(const SurfaceJet& jet);

Vector4 mean_curvature_vector(const SurfaceJet& jet);

// Component pairs (along n1, along n2) of sigma values.
struct SecondFormDecomposed {
    double c11[2], c12[2], c22[2];
};

// Coordinates in the null frame use the dual basis: the coefficient along n1
// is -<w,n2> and along n2 is -<w,n1>.
void null_coordinates(const Vector4& w, const NullNormalFrame& f, double out[2]);

SecondFormDecomposed decompose_second_form(const SurfaceJet& jet, const NullNormalFrame& frame);

struct GMSecondForm {
    double L, M, N;
};

// Global sign calibrating the determinant formulas against the reference
// meridian values (L, M, N) = (0, -2/(u(u+1)), 0) in the H-based null frame.
inline constexpr double kGMSecondFormSign = -1.0;

GMSecondForm gm_second_form(const SurfaceJet& jet, const NullNormalFrame& frame);

// A null frame of the normal plane: n1 = H when H is a nonzero null vector,
// otherwise an arbitrary pseudo-orthonormal null pair of the normal plane.
NullNormalFrame normal_null_frame(const SurfaceJet& jet);

// Normal projection of an ambient basis vector maximizing |<m,n1>|/|m|; an
// admissible seed for complete_null_frame.
Vector4 normal_seed(const SurfaceJet& jet, const Vector4& n1);

// ------------------------------------------------------------- predicates

struct Classification {
    bool spacelike = false;
    bool marginally_trapped = false;
    bool general_type = false;
    double min_E = 0, min_G = 0, min_det = 0;  // spacelike witnesses
    double sup_HH = 0;                          // sup |<H,H>|
    double inf_H = 0;                           // inf |H|_inf
    double inf_general_defect = 0;              // inf |4 nu^2 + 4 lambda^2 - 1|
};

// Evaluated on the nodes of the grid (default 33x33 in callers).
Classification classify(const SurfacePatch& patch, const GridSpec& grid, double tol = 1e-9);

struct PrincipalReport {
    bool principal = false;
    double sup_F = 0, sup_EG = 0, sup_M = 0, sup_L = 0, sup_N = 0;
};

PrincipalReport principal_report(const SurfacePatch& patch, const GridSpec& grid, double tol = 1e-8);
inline bool is_principal(const SurfacePatch& patch, const GridSpec& grid, double tol = 1e-8) {
    return principal_report(patch, grid, tol).principal;
}

}  // namespace mtrap
