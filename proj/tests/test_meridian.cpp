#include <cmath>

#include "doctest.h"

#include "mtrap/errors.hpp"
#include "mtrap/meridian.hpp"

using namespace mtrap;
using namespace mtrap::meridian;

namespace {
struct Probe {
    double u, v, ut, vt, phi, psi;
};
// 30-digit evaluation of the closed forms printed with the example
// (base point (0, ln 2)).
const Probe kProbes[] = {
    {1.0, -0.5, 0.91536058555107849, 1.3450745547971122, 11.872755536666035, 3.6225992965811169},
    {1.5, -0.2, 4.3788408325619422, 3.1795961423119462, 8.5918765427761208, 2.3467881391346103},
    {0.8, -0.9, -3.2127817465223043, -0.54652913364360259, 35.760504627491689, 5.9417221013559477},
    {1.8, -0.6, 10.988104214444457, 1.4853252636472031, 16.620445383252533, 10.430905648367623},
    {0.6, -0.3, -2.0525479025178129, 1.4392928476893926, -11.954999098880749, 1.3232969137646224},
};
}  // namespace

TEST_SUITE("meridian") {
    TEST_CASE("default configuration") {
        const MeridianConfig c;
        CHECK(c.is_default());
        CHECK(g(c, 1.0) == doctest::Approx(-0.75 + std::log(2.0)).epsilon(1e-15));
        CHECK(kappa_m(c, 1.0) == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(kappa_m(c, 2.0) == doctest::Approx(-0.25).epsilon(1e-13));
        CHECK(omega(c, 0.0) == doctest::Approx(2.0));
        const SurfacePatch p = build_patch(c);
        const SurfaceJet j = p.jet(1.0, 0.0);
        CHECK(j.z[3] - j.z[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));  // the xi2 component f(1) = 1
    }

    TEST_CASE("principal patch first form") {
        const SurfacePatch p = principal_patch({});
        for (double u : {0.4, 1.0, 1.8})
            for (double v : {-0.9, -0.3}) {
                const FirstForm f = first_form(p.jet(u, v));
                const double t = std::exp(u - v);
                CHECK(f.E == doctest::Approx(2 * (t - 1) * (t - 1)).epsilon(1e-12));
                CHECK(f.G == doctest::Approx(f.E).epsilon(1e-12));
                CHECK(std::abs(f.F) < 1e-12);
                CHECK(ReferenceValues::Ebar(u, v) == doctest::Approx(f.E).epsilon(1e-13));
            }
        CHECK(is_principal(p, GridSpec(p.domain(), 9, 9)));
        CHECK_THROWS_AS(principal_patch({}, Rect{0.0, 1.0, 0.2, 0.5}), Error);
        CHECK_THROWS_AS(build_patch({}, Rect{-1.0, 1.0, 0.0, 1.0}), Error);
    }

    TEST_CASE("reference values") {
        const double u = std::log(2.0), v = 0.0;
        CHECK(ReferenceValues::nu(u, v) == 0.0);
        CHECK(ReferenceValues::lambda(u, v) == doctest::Approx(2.0));
        CHECK(ReferenceValues::mu(u, v) == doctest::Approx(0.5));
        CHECK(ReferenceValues::K(u, v) == doctest::Approx(2.0));
        const PhiQuadruple q = ReferenceValues::phi_principal(u, v);
        CHECK(q.phi1 == doctest::Approx(-5.0 / 3));
        CHECK(q.phi2 == doctest::Approx(-1.0 / 3));
        CHECK(q.phi3 == doctest::Approx(1.0 / 3));
        CHECK(q.phi4 == doctest::Approx(5.0 / 3));
        MeridianConfig other;
        other.c = 2.0;
        CHECK_THROWS_AS(reference(other), Error);
        CHECK_NOTHROW(reference({}));
    }

    TEST_CASE("printed closed forms of the canonical parameters") {
        for (const Probe& p : kProbes) {
            CHECK(ReferenceValues::u_tilde_printed(p.u, p.v) == doctest::Approx(p.ut).epsilon(1e-12));
            CHECK(ReferenceValues::v_tilde_printed(p.u, p.v) == doctest::Approx(p.vt).epsilon(1e-12));
            CHECK(ReferenceValues::varphi_printed(p.u, p.v, std::log(2.0)) == doctest::Approx(p.phi).epsilon(1e-12));
            CHECK(ReferenceValues::psi_printed(p.u, p.v, 0.0) == doctest::Approx(p.psi).epsilon(1e-12));
        }
    }

    TEST_CASE("gauge transfer keeps the canonical parameters") {
        const CanonicalGauge g = ReferenceValues::example_gauge();
        CHECK(g.u0 == 0.0);
        CHECK(g.v0 == doctest::Approx(std::log(2.0)));
        const TransferredGauge t = transfer_gauge(g, 0.3, -1.0);
        CHECK(t.u_anchor == doctest::Approx(ReferenceValues::u_tilde_exact(0.3, g)).epsilon(1e-14));
        CHECK(t.v_anchor == doctest::Approx(ReferenceValues::v_tilde_exact(-1.0, g)).epsilon(1e-14));
        CHECK(ReferenceValues::varphi_exact(t.gauge) == doctest::Approx(ReferenceValues::varphi_exact(g)).epsilon(1e-13));
        CHECK(ReferenceValues::psi_exact(t.gauge) == doctest::Approx(ReferenceValues::psi_exact(g)).epsilon(1e-13));
    }

    TEST_CASE("other configurations feed the generic pipeline") {
        MeridianConfig c;
        c.b = 0.3;
        c.c = 1.5;
        c.p = 0.2;
        const SurfacePatch p = principal_patch(c, Rect{0.8, 1.4, -0.3, 0.2});
        const GridSpec grid(p.domain(), 9, 9);
        const Classification k = classify(p, grid);
        CHECK(k.spacelike);
        CHECK(k.marginally_trapped);
        CHECK(k.general_type);
        CHECK(is_principal(p, grid));
        CHECK(basic_system_residuals(p, grid).max() < 1e-5);
    }

    TEST_CASE("round-trip triple") {
        const CanonicalPatch cp = round_trip_patch();
        CHECK(is_canonical(cp.patch, cp.gauge).canonical);
        const auto in = round_trip_input(cp, 1.0 / 64);
        CHECK(in.grid.nu == 40);
        CHECK(in.grid.rect.u_max == doctest::Approx(kRoundTripSide));
        CHECK_THROWS_AS(round_trip_input(cp, 0.3), Error);
    }
}
