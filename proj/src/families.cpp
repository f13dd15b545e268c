#include "mtrap/families.hpp"

#include <cmath>
#include <numbers>

#include "mtrap/errors.hpp"

namespace mtrap::families {

SurfacePatch plane(const Rect& domain) {
    return SurfacePatch::analytic(domain, [](double u, double v) {
        return SurfaceJet{{u, v, 0, 0}, basis::e1, basis::e2, {}, {}, {}};
    });
}

SurfacePatch euclidean_sphere(double r, const Rect& domain) {
    if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    return SurfacePatch::analytic(domain, [r](double t, double p) {
        const double st = std::sin(t), ct = std::cos(t), sp = std::sin(p), cp = std::cos(p);
        SurfaceJet j;
        j.z = {r * st * cp, r * st * sp, r * ct, 0};
        j.z_u = {r * ct * cp, r * ct * sp, -r * st, 0};
        j.z_v = {-r * st * sp, r * st * cp, 0, 0};
        j.z_uu = {-r * st * cp, -r * st * sp, -r * ct, 0};
        j.z_uv = {-r * ct * sp, r * ct * cp, 0, 0};
        j.z_vv = {-r * st * cp, -r * st * sp, 0, 0};
        return j;
    });
}

SurfacePatch timelike_plane(const Rect& domain) {
    return SurfacePatch::analytic(domain, [](double u, double v) {
        return SurfaceJet{{u, 0, 0, v}, basis::e1, basis::e4, {}, {}, {}};
    });
}

SurfacePatch light_cone_torus(double R, const Rect& domain) {
    if (!(R > 0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    return SurfacePatch::analytic(domain, [R](double p, double q) {
        const double a = p + q, b = p - q;
        const double ca = R * std::cos(a), sa = R * std::sin(a), ch = R * std::cosh(b), sh = R * std::sinh(b);
        SurfaceJet j;
        j.z = {ca, sa, sh, ch};
        j.z_u = {-sa, ca, ch, sh};
        j.z_v = {-sa, ca, -ch, -sh};
        j.z_uu = {-ca, -sa, sh, ch};
        j.z_uv = {-ca, -sa, -sh, -ch};
        j.z_vv = {-ca, -sa, sh, ch};
        return j;
    });
}

double light_cone_gauge_constant(double R) { return -std::log(std::numbers::sqrt2 * R); }

LorentzMotion random_motion(std::mt19937_64& rng, double max_rapidity, double max_shift) {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> rapidity(-max_rapidity, max_rapidity);
    std::uniform_real_distribution<double> shift(-max_shift, max_shift);
    const LorentzMotion L = LorentzMotion::rotation12(angle(rng)) * LorentzMotion::rotation23(angle(rng)) *
                            LorentzMotion::boost34(rapidity(rng));
    const Vector4 t{shift(rng), shift(rng), shift(rng), shift(rng)};
    return LorentzMotion::translation(t) * L;
}

}  // namespace mtrap::families
