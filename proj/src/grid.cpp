#include "mtrap/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mtrap/errors.hpp"

namespace mtrap {

double Rect::diagonal() const { return std::hypot(width(), height()); }

void Rect::validate() const {
    if (!std::isfinite(u_min) || !std::isfinite(u_max) || !std::isfinite(v_min) || !std::isfinite(v_max))
        throw Error(ErrorKind::InvalidDomain, "domain bounds must be finite");
    if (!(u_max > u_min) || !(v_max > v_min))
        throw Error(ErrorKind::InvalidDomain, "domain must have positive side lengths");
}

std::vector<double> GridSpec::u_nodes() const {
    std::vector<double> r(nu);
    for (int i = 0; i < nu; ++i) r[i] = u(i);
    return r;
}

std::vector<double> GridSpec::v_nodes() const {
    std::vector<double> r(nv);
    for (int j = 0; j < nv; ++j) r[j] = v(j);
    return r;
}

void GridSpec::validate() const {
    if (nu < 2 || nv < 2) throw Error(ErrorKind::InvalidGrid, "grid needs at least 2 nodes per axis");
    try {
        rect.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::InvalidGrid, e.what());
    }
}

GridSpec GridSpec::inset(double fraction) const {
    Rect r = rect;
    const double su = fraction * rect.width(), sv = fraction * rect.height();
    r.u_min += su;
    r.u_max -= su;
    r.v_min += sv;
    r.v_max -= sv;
    return GridSpec(r, nu, nv);
}

std::vector<double> Field2D::row(int i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i) * nv_, data_.begin() + static_cast<std::ptrdiff_t>(i + 1) * nv_};
}

std::vector<double> Field2D::column(int j) const {
    std::vector<double> r(nu_);
    for (int i = 0; i < nu_; ++i) r[i] = (*this)(i, j);
    return r;
}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace mtrap
