#include "mtrap/bonnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mtrap/errors.hpp"
#include "mtrap/numerics.hpp"
#include "mtrap/parallel.hpp"

namespace mtrap::bonnet {

namespace {

int node_index(double x, double lo, double h, int n, const char* what) {
    const int k = static_cast<int>(std::lround((x - lo) / h));
    if (k < 0 || k >= n || std::abs(lo + k * h - x) > 1e-9 * h)
        throw Error(ErrorKind::InvalidArgument, std::string("base point ") + what + " must be a grid node");
    return k;
}

}  // namespace

int ReconstructionInput::i0() const { return node_index(gauge.u0, grid.rect.u_min, grid.du(), grid.nu, "u0"); }
int ReconstructionInput::j0() const { return node_index(gauge.v0, grid.rect.v_min, grid.dv(), grid.nv, "v0"); }

void ReconstructionInput::validate() const {
    grid.validate();
    if (grid.nu < 5 || grid.nv < 5) throw Error(ErrorKind::InvalidGrid, "reconstruction needs at least 5x5 nodes");
    for (const Field2D* f : {&nu, &lambda, &mu})
        if (f->nu() != grid.nu || f->nv() != grid.nv)
            throw Error(ErrorKind::InvalidGrid, "field shape does not match the grid");
    (void)i0();
    (void)j0();
    for (int i = 0; i < grid.nu; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            if (!std::isfinite(nu(i, j)) || !std::isfinite(lambda(i, j)) || !std::isfinite(mu(i, j)))
                throw Error(ErrorKind::InvalidGrid, "non-finite invariant value");
            if (std::abs(mu(i, j)) <= kMuTol) throw Error(ErrorKind::DegenerateType, "mu vanishes at a node");
            if (degenerate_by_functions(nu(i, j), lambda(i, j), degenerate_tol))
                throw Error(ErrorKind::DegenerateType, "4 nu^2 + 4 lambda^2 - 1 vanishes at a node");
        }
    if (frame_defect(initial_frame) > 1e-10)
        throw Error(ErrorKind::InvalidArgument, "initial frame violates the frame metric conditions");
    if (!(solver_tol > 0) || max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "invalid solver settings");
}

PhiFields phi_fields(const ReconstructionInput& in) {
    const double du = in.grid.du(), dv = in.grid.dv();
    const Field2D nu_u = num::partial_u(in.nu, du, in.edge_order), nu_v = num::partial_v(in.nu, dv, in.edge_order);
    const Field2D la_u = num::partial_u(in.lambda, du, in.edge_order), la_v = num::partial_v(in.lambda, dv, in.edge_order);
    const Field2D mu_u = num::partial_u(in.mu, du, in.edge_order), mu_v = num::partial_v(in.mu, dv, in.edge_order);
    PhiFields p{Field2D(in.grid), Field2D(in.grid), Field2D(in.grid), Field2D(in.grid)};
    for (int i = 0; i < in.grid.nu; ++i)
        for (int j = 0; j < in.grid.nv; ++j) {
            const InvariantJet ij{in.nu(i, j),   in.lambda(i, j), in.mu(i, j),   nu_u(i, j), nu_v(i, j),
                                  la_u(i, j),    la_v(i, j),      mu_u(i, j),    mu_v(i, j)};
            const PhiQuadruple q = phi_quadruple(ij, in.degenerate_tol);
            p.phi1(i, j) = q.phi1;
            p.phi2(i, j) = q.phi2;
            p.phi3(i, j) = q.phi3;
            p.phi4(i, j) = q.phi4;
        }
    return p;
}

InitialData initial_data(const ReconstructionInput& in, const PhiFields& phi) {
    const int i0 = in.i0(), j0 = in.j0();
    const double c = in.gauge.c();
    std::vector<double> b(in.grid.nu), a(in.grid.nv);
    for (int i = 0; i < in.grid.nu; ++i) b[i] = c * phi.phi3(i, j0) + phi.phi4(i, j0);
    for (int j = 0; j < in.grid.nv; ++j) a[j] = phi.phi1(i0, j) + phi.phi2(i0, j) / c;
    InitialData d;
    d.g1 = num::cumulative_simpson(b, in.grid.du(), i0);
    d.g2 = num::cumulative_simpson(a, in.grid.dv(), j0);
    for (double& x : d.g1) x = std::exp(x - in.gauge.c1);
    for (double& x : d.g2) x = std::exp(x - in.gauge.c2);
    return d;
}

InitialData initial_data(const ReconstructionInput& in) {
    in.validate();
    return initial_data(in, phi_fields(in));
}

namespace {

// Trapezoidal march of Psi_u = phi3 Phi + phi4 Psi along row j from u0,
// Phi given on the row.
void march_psi_row(const PhiFields& p, int j, int i0, double du, const std::vector<double>& Phi, double psi0,
                   std::vector<double>& Psi) {
    const int n = static_cast<int>(Phi.size());
    Psi[i0] = psi0;
    auto step = [&](int k, int i, double d) {
        const double rhs = p.phi3(k, j) * Phi[k] + p.phi4(k, j) * Psi[k] + p.phi3(i, j) * Phi[i];
        Psi[i] = (Psi[k] + 0.5 * d * rhs) / (1.0 - 0.5 * d * p.phi4(i, j));
    };
    for (int i = i0 + 1; i < n; ++i) step(i - 1, i, du);
    for (int i = i0 - 1; i >= 0; --i) step(i + 1, i, -du);
}

}  // namespace

CauchySolution solve_cauchy(const ReconstructionInput& in, const PhiFields& p, const InitialData& init) {
    const int nu = in.grid.nu, nv = in.grid.nv, i0 = in.i0(), j0 = in.j0();
    const double du = in.grid.du(), dv = in.grid.dv();
    CauchySolution s{Field2D(in.grid), Field2D(in.grid)};
    std::vector<double> Phi(nu), Psi(nu), PhiOld(nu), PsiOld(nu);
    // row v0
    for (int i = 0; i < nu; ++i) Phi[i] = init.g1[i];
    march_psi_row(p, j0, i0, du, Phi, init.g2[j0], Psi);
    for (int i = 0; i < nu; ++i) {
        s.Phi(i, j0) = Phi[i];
        s.Psi(i, j0) = Psi[i];
    }
    auto advance = [&](int jp, int j, double d) {
        for (int i = 0; i < nu; ++i) Psi[i] = s.Psi(i, jp);  // predictor
        for (int i = 0; i < nu; ++i) Phi[i] = s.Phi(i, jp);
        int sweep = 0;
        for (;; ++sweep) {
            if (sweep >= in.max_iterations)
                throw Error(ErrorKind::NoConvergence,
                            "row fixed point did not converge at v = " + std::to_string(in.grid.v(j)));
            PhiOld = Phi;
            PsiOld = Psi;
            for (int i = 0; i < nu; ++i) {
                const double prev = s.Phi(i, jp) + 0.5 * d * (p.phi1(i, jp) * s.Phi(i, jp) + p.phi2(i, jp) * s.Psi(i, jp));
                Phi[i] = (prev + 0.5 * d * p.phi2(i, j) * Psi[i]) / (1.0 - 0.5 * d * p.phi1(i, j));
            }
            march_psi_row(p, j, i0, du, Phi, init.g2[j], Psi);
            double change = 0, scale = 1;
            for (int i = 0; i < nu; ++i) {
                change = std::max({change, std::abs(Phi[i] - PhiOld[i]), std::abs(Psi[i] - PsiOld[i])});
                scale = std::max({scale, std::abs(Phi[i]), std::abs(Psi[i])});
            }
            if (!std::isfinite(change))
                throw Error(ErrorKind::NoConvergence, "row fixed point diverged at v = " + std::to_string(in.grid.v(j)));
            if (change <= in.solver_tol * scale) break;
        }
        s.max_sweeps = std::max(s.max_sweeps, sweep + 1);
        for (int i = 0; i < nu; ++i) {
            s.Phi(i, j) = Phi[i];
            s.Psi(i, j) = Psi[i];
        }
    };
    for (int j = j0 + 1; j < nv; ++j) advance(j - 1, j, dv);
    for (int j = j0 - 1; j >= 0; --j) advance(j + 1, j, -dv);
    // PDE defect at cell centres
    for (int i = 0; i + 1 < nu; ++i)
        for (int j = 0; j + 1 < nv; ++j) {
            auto avg = [&](auto f) { return 0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1)); };
            auto rv = [&](int a, int b) { return p.phi1(a, b) * s.Phi(a, b) + p.phi2(a, b) * s.Psi(a, b); };
            auto ru = [&](int a, int b) { return p.phi3(a, b) * s.Phi(a, b) + p.phi4(a, b) * s.Psi(a, b); };
            const double Phi_v = (s.Phi(i, j + 1) + s.Phi(i + 1, j + 1) - s.Phi(i, j) - s.Phi(i + 1, j)) / (2 * dv);
            const double Psi_u = (s.Psi(i + 1, j) + s.Psi(i + 1, j + 1) - s.Psi(i, j) - s.Psi(i, j + 1)) / (2 * du);
            s.cauchy_residual = std::max({s.cauchy_residual, std::abs(Phi_v - avg(rv)), std::abs(Psi_u - avg(ru))});
        }
    return s;
}

CauchySolution solve_cauchy(const ReconstructionInput& in) {
    in.validate();
    const PhiFields p = phi_fields(in);
    return solve_cauchy(in, p, initial_data(in, p));
}

CompatibilityResiduals compatibility_residuals(const Field2D& Phi, const Field2D& Psi, const ReconstructionInput& in,
                                               int margin) {
    const int nu = in.grid.nu, nv = in.grid.nv;
    const double du = in.grid.du(), dv = in.grid.dv();
    const Field2D Phi_v = num::partial_v(Phi, dv), Psi_u = num::partial_u(Psi, du);
    Field2D P(in.grid), Q(in.grid), L(in.grid);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            P(i, j) = Phi_v(i, j) / Psi(i, j);
            Q(i, j) = Psi_u(i, j) / Phi(i, j);
            L(i, j) = std::log(std::abs(Psi(i, j))) - std::log(std::abs(Phi(i, j)));
        }
    const Field2D P_v = num::partial_v(P, dv), Q_u = num::partial_u(Q, du);
    const Field2D L_uv = num::partial_v(num::partial_u(L, du), dv);
    const int mu_ = std::min(margin, (nu - 1) / 2), mv_ = std::min(margin, (nv - 1) / 2);
    CompatibilityResiduals r;
    for (int i = mu_; i < nu - mu_; ++i)
        for (int j = mv_; j < nv - mv_; ++j) {
            const double pp = Phi(i, j) * Psi(i, j);
            const double lm = in.lambda(i, j) * in.mu(i, j), nm = in.nu(i, j) * in.mu(i, j);
            r.res1 = std::max(r.res1, std::abs(2 * lm + (P_v(i, j) + Q_u(i, j)) / pp));
            r.res2 = std::max(r.res2, std::abs(2 * nm - 2 * L_uv(i, j) / pp));
        }
    return r;
}

DerivedCoefficients derived_coefficients(const Field2D& Phi, const Field2D& Psi, const ReconstructionInput& in,
                                         const PhiFields& p) {
    const Field2D mu_u = num::partial_u(in.mu, in.grid.du(), in.edge_order), mu_v = num::partial_v(in.mu, in.grid.dv(), in.edge_order);
    DerivedCoefficients d{Field2D(in.grid), Field2D(in.grid), Field2D(in.grid), Field2D(in.grid)};
    d.min_positivity_u = d.min_positivity_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < in.grid.nu; ++i)
        for (int j = 0; j < in.grid.nv; ++j) {
            const double F = Phi(i, j), S = Psi(i, j), m = in.mu(i, j);
            // the canonical system supplies the cross derivatives exactly
            const double F_v = p.phi1(i, j) * F + p.phi2(i, j) * S;
            const double S_u = p.phi3(i, j) * F + p.phi4(i, j) * S;
            d.gamma1(i, j) = -F_v / (F * S);
            d.gamma2(i, j) = -S_u / (F * S);
            d.beta1(i, j) = (S * mu_u(i, j) / m + 2 * S_u) / (F * S);
            d.beta2(i, j) = (F * mu_v(i, j) / m + 2 * F_v) / (F * S);
            const double du_den = m * (2 * d.gamma2(i, j) + d.beta1(i, j));
            const double dv_den = m * (2 * d.gamma1(i, j) + d.beta2(i, j));
            if (std::abs(du_den) > 1e-14) d.min_positivity_u = std::min(d.min_positivity_u, mu_u(i, j) / du_den);
            if (std::abs(dv_den) > 1e-14) d.min_positivity_v = std::min(d.min_positivity_v, mu_v(i, j) / dv_den);
        }
    return d;
}

// ------------------------------------------------------------ frame

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

Frame mat_apply(const Mat4& M, const Frame& F) {
    Frame out{};
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
            if (M[r][s] != 0.0) out[r] += M[r][s] * F[s];
    return out;
}

Frame axpy(const Frame& F, double h, const Frame& K) {
    Frame out;
    for (int r = 0; r < 4; ++r) out[r] = F[r] + h * K[r];
    return out;
}

// Phi A for the u-direction of the frame equations, rows (x, y, n1, n2).
Mat4 matrix_u(double Phi, double nu, double la, double mu, double g1, double b1) {
    Mat4 A{{{0, g1, 1 + nu, 0}, {-g1, 0, la, mu}, {0, mu, b1, 0}, {1 + nu, la, 0, -b1}}};
    for (auto& row : A)
        for (double& a : row) a *= Phi;
    return A;
}

// Psi B for the v-direction.
Mat4 matrix_v(double Psi, double nu, double la, double mu, double g2, double b2) {
    Mat4 B{{{0, -g2, la, mu}, {g2, 0, 1 - nu, 0}, {mu, 0, b2, 0}, {la, 1 - nu, 0, -b2}}};
    for (auto& row : B)
        for (double& b : row) b *= Psi;
    return B;
}

// Entrywise midpoint value between line nodes k and k+1: cubic through four
// nodes, quadratic at the ends.
Mat4 midpoint(const std::vector<Mat4>& line, int k) {
    const int n = static_cast<int>(line.size());
    Mat4 out{};
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
            auto f = [&](int m) { return line[m][r][s]; };
            double v;
            if (n < 3)
                v = 0.5 * (f(k) + f(k + 1));
            else if (k == 0)
                v = (3 * f(0) + 6 * f(1) - f(2)) / 8;
            else if (k + 2 >= n)
                v = (-f(k - 1) + 6 * f(k) + 3 * f(k + 1)) / 8;
            else
                v = (-f(k - 1) + 9 * f(k) + 9 * f(k + 1) - f(k + 2)) / 16;
            out[r][s] = v;
        }
    return out;
}

Frame rk4(const Frame& F, double h, const Mat4& M0, const Mat4& Mm, const Mat4& M1) {
    const Frame k1 = mat_apply(M0, F);
    const Frame k2 = mat_apply(Mm, axpy(F, 0.5 * h, k1));
    const Frame k3 = mat_apply(Mm, axpy(F, 0.5 * h, k2));
    const Frame k4 = mat_apply(M1, axpy(F, h, k3));
    Frame out;
    for (int r = 0; r < 4; ++r) out[r] = F[r] + (h / 6) * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
    return out;
}

// March along a line of matrices from index k0 in both directions.
void march(const std::vector<Mat4>& line, int k0, double h, const Frame& F0, std::vector<Frame>& out) {
    const int n = static_cast<int>(line.size());
    out.assign(n, Frame{});
    out[k0] = F0;
    for (int k = k0; k + 1 < n; ++k) out[k + 1] = rk4(out[k], h, line[k], midpoint(line, k), line[k + 1]);
    for (int k = k0; k > 0; --k) out[k - 1] = rk4(out[k], -h, line[k], midpoint(line, k - 1), line[k - 1]);
}

double gram_defect(const Frame& F) {
    return frame_defect(FrameField{F[0], F[1], {F[2], F[3]}});
}

}  // namespace

FrameIntegration integrate_frame(const ReconstructionInput& in, const Field2D& Phi, const Field2D& Psi,
                                 const DerivedCoefficients& c) {
    const int nu = in.grid.nu, nv = in.grid.nv, i0 = in.i0(), j0 = in.j0();
    const double du = in.grid.du(), dv = in.grid.dv();
    std::vector<Mat4> MA(static_cast<std::size_t>(nu) * nv), MB(MA.size());
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * nv + j;
            MA[k] = matrix_u(Phi(i, j), in.nu(i, j), in.lambda(i, j), in.mu(i, j), c.gamma1(i, j), c.beta1(i, j));
            MB[k] = matrix_v(Psi(i, j), in.nu(i, j), in.lambda(i, j), in.mu(i, j), c.gamma2(i, j), c.beta2(i, j));
        }
    FrameIntegration out;
    out.frame.nu = nu;
    out.frame.nv = nv;
    out.frame.frames.resize(MA.size());
    const FrameField& f0 = in.initial_frame;
    const Frame F0{f0.x, f0.y, f0.frame.n1, f0.frame.n2};
    std::vector<Mat4> row(nu);
    for (int i = 0; i < nu; ++i) row[i] = MA[static_cast<std::size_t>(i) * nv + j0];
    std::vector<Frame> base;
    march(row, i0, du, F0, base);
    parallel_for(static_cast<std::size_t>(nu), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        std::vector<Mat4> col(MB.begin() + static_cast<std::ptrdiff_t>(i) * nv,
                              MB.begin() + static_cast<std::ptrdiff_t>(i + 1) * nv);
        std::vector<Frame> line;
        march(col, j0, dv, base[i], line);
        for (int j = 0; j < nv; ++j) out.frame(i, j) = line[j];
    });
    for (const Frame& F : out.frame.frames) out.metric_drift = std::max(out.metric_drift, gram_defect(F));
    // commutator of the two derivative formulas at interior nodes
    for (int i = 1; i + 1 < nu; ++i)
        for (int j = 1; j + 1 < nv; ++j) {
            auto PA = [&](int a, int b) { return mat_apply(MA[static_cast<std::size_t>(a) * nv + b], out.frame(a, b)); };
            auto PB = [&](int a, int b) { return mat_apply(MB[static_cast<std::size_t>(a) * nv + b], out.frame(a, b)); };
            const Frame av = PA(i, j + 1), bv = PA(i, j - 1), au = PB(i + 1, j), bu = PB(i - 1, j);
            for (int r = 0; r < 4; ++r) {
                const Vector4 d = (av[r] - bv[r]) / (2 * dv) - (au[r] - bu[r]) / (2 * du);
                out.frame_commutator_residual = std::max(out.frame_commutator_residual, norm_inf(d));
            }
        }
    const double h = std::max(du, dv);
    if (in.check_drift && out.metric_drift > 100 * h * h)
        throw Error(ErrorKind::MetricDriftExceeded,
                    "frame Gram drift " + std::to_string(out.metric_drift) + " exceeds 100 step^2");
    return out;
}

PositionIntegration integrate_position(const ReconstructionInput& in, const Field2D& Phi, const Field2D& Psi,
                                       const FrameGrid& frame) {
    const int nu = in.grid.nu, nv = in.grid.nv, i0 = in.i0(), j0 = in.j0();
    const double du = in.grid.du(), dv = in.grid.dv();
    auto along_u = [&](int j) {
        std::array<std::vector<double>, 4> comp;
        for (int c = 0; c < 4; ++c) {
            std::vector<double> f(nu);
            for (int i = 0; i < nu; ++i) f[i] = Phi(i, j) * frame(i, j)[0].c[c];
            comp[c] = num::cumulative_simpson(f, du, i0);
        }
        return comp;
    };
    auto along_v = [&](int i) {
        std::array<std::vector<double>, 4> comp;
        for (int c = 0; c < 4; ++c) {
            std::vector<double> f(nv);
            for (int j = 0; j < nv; ++j) f[j] = Psi(i, j) * frame(i, j)[1].c[c];
            comp[c] = num::cumulative_simpson(f, dv, j0);
        }
        return comp;
    };
    PositionIntegration out;
    out.z.assign(static_cast<std::size_t>(nu) * nv, Vector4{});
    std::vector<Vector4> alt(out.z.size());
    // u first along v0, then up the columns
    const auto r0 = along_u(j0);
    parallel_for(static_cast<std::size_t>(nu), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const auto col = along_v(i);
        for (int j = 0; j < nv; ++j)
            for (int c = 0; c < 4; ++c)
                out.z[static_cast<std::size_t>(i) * nv + j].c[c] = in.initial_position.c[c] + r0[c][i] + col[c][j];
    });
    // v first along u0, then along the rows
    const auto c0 = along_v(i0);
    parallel_for(static_cast<std::size_t>(nv), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        const auto rw = along_u(j);
        for (int i = 0; i < nu; ++i)
            for (int c = 0; c < 4; ++c)
                alt[static_cast<std::size_t>(i) * nv + j].c[c] = in.initial_position.c[c] + c0[c][j] + rw[c][i];
    });
    for (std::size_t k = 0; k < alt.size(); ++k) out.closure_defect = std::max(out.closure_defect, norm_inf(out.z[k] - alt[k]));
    return out;
}

ReconstructionResult reconstruct(const ReconstructionInput& in) {
    in.validate();
    const PhiFields p = phi_fields(in);
    const InitialData init = initial_data(in, p);
    CauchySolution sol = solve_cauchy(in, p, init);
    const CompatibilityResiduals cr = compatibility_residuals(sol.Phi, sol.Psi, in);
    if (cr.res1 > in.compatibility_threshold || cr.res2 > in.compatibility_threshold)
        throw Error(ErrorKind::CompatibilityViolated, "compatibility residuals " + std::to_string(cr.res1) + ", " +
                                                          std::to_string(cr.res2) + " exceed the threshold");
    DerivedCoefficients dc = derived_coefficients(sol.Phi, sol.Psi, in, p);
    FrameIntegration fi = integrate_frame(in, sol.Phi, sol.Psi, dc);
    PositionIntegration pi = integrate_position(in, sol.Phi, sol.Psi, fi.frame);
    ReconstructionResult r;
    r.grid = in.grid;
    r.E = Field2D(in.grid);
    r.G = Field2D(in.grid);
    for (int i = 0; i < in.grid.nu; ++i)
        for (int j = 0; j < in.grid.nv; ++j) {
            r.E(i, j) = sol.Phi(i, j) * sol.Phi(i, j);
            r.G(i, j) = sol.Psi(i, j) * sol.Psi(i, j);
        }
    r.Phi = std::move(sol.Phi);
    r.Psi = std::move(sol.Psi);
    r.gamma1 = std::move(dc.gamma1);
    r.gamma2 = std::move(dc.gamma2);
    r.beta1 = std::move(dc.beta1);
    r.beta2 = std::move(dc.beta2);
    r.frame = std::move(fi.frame);
    r.z = std::move(pi.z);
    r.diagnostics = {sol.cauchy_residual, cr.res1, cr.res2, fi.frame_commutator_residual, fi.metric_drift,
                     pi.closure_defect, dc.min_positivity_u, dc.min_positivity_v};
    return r;
}

// ------------------------------------------------------------ comparison

double InvariantTable::max() const { return *std::max_element(diff.begin(), diff.end()); }

std::array<double, InvariantTable::kCount> reference_invariants(const SurfacePatch& reference, double u, double v,
                                                                const FrameFunctionOptions& opts) {
    const FirstForm f = first_form(reference.jet(u, v));
    const GeometricFunctions g = geometric_functions(reference, u, v, opts);
    return {f.E, f.G, g.nu, g.lambda, g.mu, g.gamma1, g.gamma2, g.beta1, g.beta2};
}

namespace {

template <class T>
T d4(const T& fm2, const T& fm1, const T& fp1, const T& fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) * (1.0 / (12.0 * h));
}

std::array<double, InvariantTable::kCount> result_invariants(const ReconstructionResult& r, int i, int j) {
    const double du = r.grid.du(), dv = r.grid.dv();
    auto zu = d4(r.position(i - 2, j), r.position(i - 1, j), r.position(i + 1, j), r.position(i + 2, j), du);
    auto zv = d4(r.position(i, j - 2), r.position(i, j - 1), r.position(i, j + 1), r.position(i, j + 2), dv);
    auto fu = [&](int k) {
        return d4(r.frame(i - 2, j)[k], r.frame(i - 1, j)[k], r.frame(i + 1, j)[k], r.frame(i + 2, j)[k], du);
    };
    auto fv = [&](int k) {
        return d4(r.frame(i, j - 2)[k], r.frame(i, j - 1)[k], r.frame(i, j + 1)[k], r.frame(i, j + 2)[k], dv);
    };
    const Frame& F = r.frame(i, j);
    const double E = inner(zu, zu), G = inner(zv, zv), sE = std::sqrt(E), sG = std::sqrt(G);
    const Vector4 xu = fu(0), yu = fu(1), n1u = fu(2), yv = fv(1), n1v = fv(2);
    return {E,
            G,
            -inner(xu, F[3]) / sE - 1.0,
            -inner(yu, F[3]) / sE,
            -inner(yu, F[2]) / sE,
            inner(xu, F[1]) / sE,
            inner(yv, F[0]) / sG,
            -inner(n1u, F[3]) / sE,
            -inner(n1v, F[3]) / sG};
}

InvariantTable compare_at(const ReconstructionResult& r, const SurfacePatch& reference,
                          const std::vector<std::pair<int, int>>& nodes, const FrameFunctionOptions& opts) {
    std::vector<std::array<double, InvariantTable::kCount>> d(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t k) {
        const auto [i, j] = nodes[k];
        const auto a = result_invariants(r, i, j);
        const auto b = reference_invariants(reference, r.grid.u(i), r.grid.v(j), opts);
        for (int m = 0; m < InvariantTable::kCount; ++m) d[k][m] = std::abs(a[m] - b[m]);
    });
    InvariantTable t;
    for (const auto& row : d)
        for (int m = 0; m < InvariantTable::kCount; ++m) t.diff[m] = std::max(t.diff[m], row[m]);
    return t;
}

}  // namespace

InvariantTable compare_invariants(const ReconstructionResult& result, const SurfacePatch& reference,
                                  const GridSpec& grid, const FrameFunctionOptions& opts) {
    grid.validate();
    const GridSpec& g = result.grid;
    auto locate = [](double x, double lo, double h, int n) {
        const int k = static_cast<int>(std::lround((x - lo) / h));
        if (k < 2 || k > n - 3 || std::abs(lo + k * h - x) > 1e-9 * h)
            throw Error(ErrorKind::InvalidGrid, "comparison nodes must be interior nodes of the reconstruction grid");
        return k;
    };
    std::vector<std::pair<int, int>> nodes;
    for (int a = 0; a < grid.nu; ++a)
        for (int b = 0; b < grid.nv; ++b)
            nodes.emplace_back(locate(grid.u(a), g.rect.u_min, g.du(), g.nu), locate(grid.v(b), g.rect.v_min, g.dv(), g.nv));
    return compare_at(result, reference, nodes, opts);
}

InvariantTable compare_invariants(const ReconstructionResult& result, const SurfacePatch& reference, int stride,
                                  const FrameFunctionOptions& opts) {
    if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be positive");
    std::vector<std::pair<int, int>> nodes;
    for (int i = 2; i <= result.grid.nu - 3; i += stride)
        for (int j = 2; j <= result.grid.nv - 3; j += stride) nodes.emplace_back(i, j);
    if (nodes.empty()) throw Error(ErrorKind::InvalidGrid, "reconstruction grid too small to compare");
    return compare_at(result, reference, nodes, opts);
}

}  // namespace mtrap::bonnet
