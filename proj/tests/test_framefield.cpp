#include <cmath>

#include "doctest.h"

#include "mtrap/errors.hpp"
#include "mtrap/families.hpp"
#include "mtrap/framefield.hpp"
#include "mtrap/meridian.hpp"

using namespace mtrap;
using meridian::ReferenceValues;

namespace {
bool close(const Vector4& a, const Vector4& b, double tol) { return norm_inf(a - b) < tol; }

struct Oracle {
    double u, v, E, lambda, mu, gamma1;
};
// 40-digit evaluation of the geometric functions of the principal meridian
// patch (nu = 0, gamma2 = beta1 = -gamma1, beta2 = gamma1 at every point).
const Oracle kOracle[] = {
    {std::log(2.0) + 1.0 / 3.0, 1.0 / 3.0, 2.0, 2.0, 0.5, 1.414213562373095},
    {1.0, -0.5, 24.244317565023076, 1.2872169167888682, 0.011846772589847276, 0.2614247832966515},
    {1.5, -0.2, 40.032410527885228, 1.2235162625848273, 0.0055833825552206857, 0.19337658010139273},
    {0.8, -0.9, 40.032410527885228, 1.2235162625848273, 0.0055833825552206857, 0.19337658010139273},
};
}  // namespace

TEST_SUITE("framefield") {
    TEST_CASE("geometric functions match the high-precision oracle") {
        const SurfacePatch p = meridian::principal_patch({}, Rect{0.6, 2.0, -1.0, 0.4});
        for (const Oracle& o : kOracle) {
            const GeometricFunctions g = geometric_functions(p, o.u, o.v);
            CHECK(std::abs(g.nu) < 1e-7);
            CHECK(g.lambda == doctest::Approx(o.lambda).epsilon(1e-7));
            CHECK(g.mu == doctest::Approx(o.mu).epsilon(1e-7));
            CHECK(g.gamma1 == doctest::Approx(o.gamma1).epsilon(1e-6));
            CHECK(g.gamma2 == doctest::Approx(-o.gamma1).epsilon(1e-6));
            CHECK(g.beta1 == doctest::Approx(-o.gamma1).epsilon(1e-6));
            CHECK(g.beta2 == doctest::Approx(o.gamma1).epsilon(1e-6));
            CHECK(first_form(p.jet(o.u, o.v)).E == doctest::Approx(o.E).epsilon(1e-12));
        }
    }

    TEST_CASE("geometric frame") {
        const SurfacePatch p = meridian::principal_patch({});
        for (double u : {0.5, 1.2, 1.9})
            for (double v : {-0.8, -0.2}) {
                const SurfaceJet j = p.jet(u, v);
                const FrameField f = geometric_frame(j);
                CHECK(frame_defect(f) < 1e-9);
                CHECK(close(f.frame.n1, mean_curvature_vector(j), 1e-12));
                const FrameField r = ReferenceValues::frame(u, v);
                CHECK(close(f.x, r.x, 1e-9));
                CHECK(close(f.y, r.y, 1e-9));
                CHECK(close(f.frame.n1, r.frame.n1, 1e-9));
                CHECK(close(f.frame.n2, r.frame.n2, 1e-8));
            }
        // continuity between neighbouring nodes
        const double h = 1e-3;
        const FrameField a = geometric_frame(p.jet(1.0, -0.5)), b = geometric_frame(p.jet(1.0 + h, -0.5));
        CHECK(norm_inf(a.frame.n2 - b.frame.n2) < 100 * h);
        const SurfacePatch pl = families::plane();
        CHECK_THROWS_AS(geometric_frame(pl.jet(0.5, 0.5)), Error);
    }

    TEST_CASE("second fundamental form in the geometric frame") {
        const SurfacePatch p = meridian::principal_patch({});
        const double u = 1.1, v = -0.4;
        const SurfaceJet j = p.jet(u, v);
        const GeometricFunctions g = geometric_functions(p, u, v);
        const FrameField f = geometric_frame(j);
        const FirstForm ff = first_form(j);
        const NormalParts s = normal_parts(j);
        const Vector4& n1 = f.frame.n1;
        const Vector4& n2 = f.frame.n2;
        CHECK(close(s.uu / ff.E, (1 + g.nu) * n1, 1e-8));
        CHECK(close(s.uv / std::sqrt(ff.E * ff.G), g.lambda * n1 + g.mu * n2, 1e-8));
        CHECK(close(s.vv / ff.G, (1 - g.nu) * n1, 1e-8));
        // gamma1 = -(ln sqrt E)_v / sqrt G, gamma2 = -(ln sqrt G)_u / sqrt E
        const double h = 1e-5;
        const double lnE_v = (std::log(first_form(p.jet(u, v + h)).E) - std::log(first_form(p.jet(u, v - h)).E)) / (4 * h);
        const double lnG_u = (std::log(first_form(p.jet(u + h, v)).G) - std::log(first_form(p.jet(u - h, v)).G)) / (4 * h);
        CHECK(g.gamma1 == doctest::Approx(-lnE_v / std::sqrt(ff.G)).epsilon(1e-7));
        CHECK(g.gamma2 == doctest::Approx(-lnG_u / std::sqrt(ff.E)).epsilon(1e-7));
    }

    TEST_CASE("curvature invariants") {
        const Curvatures c = invariants(GeometricFunctions{0, 2, 0.5, 0, 0, 0, 0});
        CHECK(c.K == 2.0);
        CHECK(c.kappa == 0.0);
        CHECK(invariants(GeometricFunctions{0.3, 0, 0.7, 0, 0, 0, 0}).K == 0.0);
    }

    TEST_CASE("integrability residuals") {
        const SurfacePatch p = meridian::principal_patch({});
        const GridSpec g(p.domain(), 17, 17);
        const ResidualReport r = basic_system_residuals(p, g);
        for (double x : r.r) CHECK(x < 1e-5);
        CHECK(r.k_check < 1e-5);
        CHECK(r.kappa_check < 1e-4);
        CHECK(r.min_positivity_u > 0);
        CHECK(r.min_positivity_v > 0);
        ResidualOptions o;
        o.perturb = [](double u, double v, GeometricFunctions& f) { f.mu *= 1 + 0.01 * std::sin(3 * u + 2 * v); };
        const ResidualReport q = basic_system_residuals(p, g, o);
        CHECK(q.r[0] > 1e-3);
    }

    TEST_CASE("light cone torus is a parallel-mean-curvature surface") {
        const double R = 0.7;
        const SurfacePatch p = families::light_cone_torus(R);
        const GeometricFunctions g = geometric_functions(p, 0.2, -0.3);
        CHECK(std::abs(g.nu) < 1e-8);
        CHECK(std::abs(g.lambda) < 1e-8);
        CHECK(g.mu == doctest::Approx(-1 / (2 * R * R)).epsilon(1e-8));
        CHECK(std::abs(g.beta1) < 1e-7);
        CHECK(std::abs(g.beta2) < 1e-7);
        const ResidualReport r = basic_system_residuals(p, GridSpec(p.domain(), 9, 9));
        CHECK(r.max() < 1e-6);
    }
}
