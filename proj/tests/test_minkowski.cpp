#include <cmath>
#include <random>

#include "doctest.h"

#include "mtrap/errors.hpp"
#include "mtrap/families.hpp"
#include "mtrap/minkowski.hpp"

using namespace mtrap;

namespace {
bool close(const Vector4& a, const Vector4& b, double tol) { return norm_inf(a - b) < tol; }
}  // namespace

TEST_SUITE("minkowski") {
    TEST_CASE("inner product of basis vectors") {
        CHECK(inner(basis::e4, basis::e4) == -1.0);
        CHECK(inner(basis::e1, basis::e1) == 1.0);
        CHECK(inner(basis::e1, basis::e2) == 0.0);
        CHECK(inner(basis::xi1, basis::xi2) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(std::abs(inner(basis::xi1, basis::xi1)) < 1e-15);
        CHECK(null_frame_defect(kStandardNullFrame) < 1e-15);
    }

    TEST_CASE("causal character") {
        CHECK(causal_character(basis::e1) == CausalCharacter::Spacelike);
        CHECK(causal_character(basis::e4) == CausalCharacter::Timelike);
        CHECK(causal_character(basis::xi1) == CausalCharacter::Lightlike);
        CHECK(causal_character(Vector4{1, 0, 0, 1}) == CausalCharacter::Lightlike);
        try {
            causal_character(Vector4{});
            FAIL("zero vector accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ZeroVector);
        }
    }

    TEST_CASE("null frame completion") {
        // in span{xi1, e3}: n2 = xi2 (solved by hand: e3 = (xi1 - xi2)/sqrt 2)
        const NullNormalFrame f = complete_null_frame(basis::xi1, basis::e3);
        CHECK(close(f.n2, basis::xi2, 1e-14));
        CHECK(close(complete_null_frame(basis::xi1, basis::xi2).n2, basis::xi2, 1e-14));
        try {
            complete_null_frame(basis::xi1, basis::xi1);
            FAIL("degenerate plane accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegeneratePlane);
        }
        try {
            complete_null_frame(basis::e1, basis::e3);
            FAIL("spacelike n1 accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotLightlike);
        }
        // generic null vector and generic seed
        const Vector4 n1{0.3, -0.4, 1.2, 1.3};
        const NullNormalFrame g = complete_null_frame(n1, Vector4{0.1, 0.7, -0.2, 0.5});
        CHECK(null_frame_defect(g) < 1e-12);
    }

    TEST_CASE("Lorentz motions are isometries") {
        std::mt19937_64 rng(7);
        for (int k = 0; k < 20; ++k) {
            const LorentzMotion m = families::random_motion(rng);
            CHECK(m.isometry_defect() < 1e-12);
            const Vector4 a{0.2, 1.0, -0.7, 0.4}, b{-1.1, 0.3, 0.5, 2.0};
            CHECK(inner(m.linear(a), m.linear(b)) == doctest::Approx(inner(a, b)).epsilon(1e-12));
            CHECK(close(m.apply(a) - m.apply(b), m.linear(a - b), 1e-12));
        }
        const LorentzMotion b = LorentzMotion::boost34(0.5);
        CHECK(close(b.linear(basis::xi1), std::exp(0.5) * basis::xi1, 1e-14));
        const LorentzMotion r = LorentzMotion::rotation12(0.3) * LorentzMotion::rotation12(-0.3);
        CHECK(close(r.linear(Vector4{1, 2, 3, 4}), Vector4{1, 2, 3, 4}, 1e-14));
    }
}
