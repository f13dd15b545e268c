#include <cmath>

#include "doctest.h"

#include "mtrap/errors.hpp"
#include "mtrap/families.hpp"
#include "mtrap/meridian.hpp"
#include "mtrap/surface.hpp"

using namespace mtrap;
using meridian::ReferenceValues;

namespace {
bool close(const Vector4& a, const Vector4& b, double tol) { return norm_inf(a - b) < tol; }
const Rect kWide{0.8, 2.0, -0.5, 0.5};  // principal rectangle containing e^{u-v} = 2 at v = 1/3
const double kUb = std::log(2.0) + 1.0 / 3.0, kVb = 1.0 / 3.0;
}  // namespace

TEST_SUITE("surface") {
    TEST_CASE("first fundamental form of the meridian patch") {
        const SurfacePatch p = meridian::build_patch({});
        const FirstForm f = first_form(p.jet(1.0, 0.0));
        CHECK(f.E == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(std::abs(f.F) < 1e-14);
        CHECK(f.G == doctest::Approx(4.0).epsilon(1e-14));
        const SurfacePatch q = meridian::principal_patch({}, kWide);
        const FirstForm g = first_form(q.jet(kUb, kVb));
        CHECK(g.E == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(g.G == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(std::abs(g.F) < 1e-13);
    }

    TEST_CASE("plane patch") {
        const SurfacePatch p = families::plane();
        const SurfaceJet j = p.jet(0.3, 0.4);
        CHECK(norm_inf(j.z_uu) == 0.0);
        CHECK(norm_inf(j.z_uv) == 0.0);
        CHECK(norm_inf(j.z_vv) == 0.0);
        const FirstForm f = first_form(j);
        CHECK(f.E == 1.0);
        CHECK(f.F == 0.0);
        CHECK(f.G == 1.0);
        CHECK(norm_inf(mean_curvature_vector(j)) == 0.0);
        CHECK(is_principal(p, GridSpec(p.domain(), 5, 5)));
        const Classification c = classify(p, GridSpec(p.domain(), 9, 9));
        CHECK(c.spacelike);
        CHECK_FALSE(c.marginally_trapped);
    }

    TEST_CASE("finite-difference jets agree with analytic jets") {
        const SurfacePatch a = meridian::build_patch({});
        const SurfacePatch f = SurfacePatch::finite_difference(a.domain(), [a](double u, double v) { return a.position(u, v); });
        const double h = f.fd_step();
        const GridSpec g = GridSpec(a.domain(), 10, 10).inset(0.05);
        double worst = 0;
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j) {
                const SurfaceJet x = a.jet(g.u(i), g.v(j)), y = f.jet(g.u(i), g.v(j));
                worst = std::max({worst, norm_inf(x.z_u - y.z_u), norm_inf(x.z_v - y.z_v)});
            }
        CHECK(worst < 10 * h * h);
        CHECK_THROWS_AS(a.jet(10.0, 0.0), Error);
    }

    TEST_CASE("mean curvature vector of the meridian patch") {
        // oracle: 40-digit evaluation of H at e^{u-v} = 2, v = 1/3
        const SurfacePatch q = meridian::principal_patch({}, kWide);
        const Vector4 H = mean_curvature_vector(q.jet(kUb, kVb));
        CHECK(close(H, Vector4{1.1047103472363754, 0.48891281756734267, -0.19112364635371622, 1.2230899160193788}, 1e-12));
        // H = -(n1 - n2)/(2u) with the unit normals of the original parametrization
        const SurfacePatch p = meridian::build_patch({});
        for (double u : {0.6, 1.0, 1.7}) {
            const Vector4 h = mean_curvature_vector(p.jet(u, 0.2));
            const Vector4 ref = (-1.0 / (2 * u)) * (ReferenceValues::unit_normal_1(u, 0.2) - ReferenceValues::unit_normal_2(u, 0.2));
            CHECK(close(h, ref, 1e-12));
            CHECK(std::abs(inner(h, h)) < 1e-12);
        }
    }

    TEST_CASE("classification") {
        const SurfacePatch p = meridian::build_patch({});
        const Classification c = classify(p, GridSpec(p.domain(), 5, 5));
        CHECK(c.spacelike);
        CHECK(c.marginally_trapped);
        CHECK(c.general_type);
        CHECK(c.sup_HH < 1e-9);
        const SurfacePatch q = meridian::principal_patch({}, kWide);
        CHECK(general_type_defect(q.jet(kUb, kVb)) == doctest::Approx(15.0).epsilon(1e-10));
        const SurfacePatch s = families::euclidean_sphere();
        const Classification cs = classify(s, GridSpec(s.domain(), 9, 9));
        CHECK(cs.spacelike);
        CHECK_FALSE(cs.marginally_trapped);
        const SurfacePatch t = families::timelike_plane();
        CHECK_FALSE(classify(t, GridSpec(t.domain(), 5, 5)).spacelike);
        CHECK_THROWS_AS(first_form(t.jet(0.5, 0.5)), Error);
    }

    TEST_CASE("second fundamental form and principal parameters") {
        const SurfacePatch p = meridian::build_patch({});
        const SurfaceJet j = p.jet(1.0, 0.1);
        const GMSecondForm f = gm_second_form(j, normal_null_frame(j));
        CHECK(std::abs(f.L) < 1e-12);
        CHECK(f.M == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::abs(f.N) < 1e-12);
        for (double u : {0.7, 1.3, 1.9}) {
            const SurfaceJet k = p.jet(u, -0.3);
            CHECK(gm_second_form(k, normal_null_frame(k)).M == doctest::Approx(ReferenceValues::M(u)).epsilon(1e-10));
        }
        CHECK_FALSE(is_principal(p, GridSpec(p.domain(), 9, 9)));
        const SurfacePatch q = meridian::principal_patch({});
        const PrincipalReport r = principal_report(q, GridSpec(q.domain(), 9, 9));
        CHECK(r.principal);
        CHECK(r.sup_M < 1e-10);
        const SurfacePatch pl = families::plane();
        const SurfaceJet k = pl.jet(0.5, 0.5);
        const GMSecondForm z = gm_second_form(k, kStandardNullFrame);
        CHECK(z.L == 0.0);
        CHECK(z.M == 0.0);
        CHECK(z.N == 0.0);
    }

    TEST_CASE("reparametrization and motions") {
        const SurfacePatch p = meridian::principal_patch({});
        const SurfacePatch f = reparametrize_affine(p, -1.0, 1.0, 1.0, -0.5);
        const Rect& d = f.domain();
        CHECK(d.u_min == doctest::Approx(-1.0));
        CHECK(d.u_max == doctest::Approx(0.7));
        const SurfaceJet a = p.jet(1.2, -0.4), b = f.jet(-0.2, 0.1);
        CHECK(close(a.z, b.z, 1e-13));
        CHECK(close(a.z_u, -1.0 * b.z_u, 1e-13));
        CHECK(close(a.z_uv, -1.0 * b.z_uv, 1e-13));
        std::mt19937_64 rng(3);
        const LorentzMotion m = families::random_motion(rng);
        const SurfacePatch t = transform(p, m);
        const FirstForm x = first_form(p.jet(1.0, -0.5)), y = first_form(t.jet(1.0, -0.5));
        CHECK(y.E == doctest::Approx(x.E).epsilon(1e-12));
        CHECK(y.G == doctest::Approx(x.G).epsilon(1e-12));
    }
}
