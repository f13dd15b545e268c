#include "mtrap/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "mtrap/errors.hpp"

namespace mtrap::num {

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    std::size_t intervals = n - 1;
    double tail = 0.0;
    if (intervals % 2 == 1) {
        // 3/8 rule on the last three intervals
        const std::size_t k = n - 4;
        tail = 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
        intervals -= 3;
    }
    double s = 0.0;
    for (std::size_t k = 0; k + 2 <= intervals; k += 2) s += f[k] + 4.0 * f[k + 1] + f[k + 2];
    return s * h / 3.0 + tail;
}

namespace {

// Forward cumulative integral of g with g[0] at the base.
std::vector<double> cumulative_forward(const std::vector<double>& g, double h) {
    const std::size_t n = g.size();
    std::vector<double> F(n, 0.0);
    if (n < 2) return F;
    if (n == 2) {
        F[1] = 0.5 * h * (g[0] + g[1]);
        return F;
    }
    F[1] = h * (5.0 * g[0] + 8.0 * g[1] - g[2]) / 12.0;
    for (std::size_t k = 2; k < n; ++k) {
        if (k % 2 == 0)
            F[k] = F[k - 2] + h * (g[k - 2] + 4.0 * g[k - 1] + g[k]) / 3.0;
        else
            F[k] = F[k - 1] + h * (-g[k - 2] + 8.0 * g[k - 1] + 5.0 * g[k]) / 12.0;
    }
    return F;
}

}  // namespace

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h, int base) {
    const int n = static_cast<int>(f.size());
    if (base < 0 || base >= n) throw Error(ErrorKind::InvalidArgument, "cumulative integral base outside the line");
    std::vector<double> F(n, 0.0);
    std::vector<double> fwd(f.begin() + base, f.end());
    const auto Ff = cumulative_forward(fwd, h);
    for (int j = base; j < n; ++j) F[j] = Ff[j - base];
    std::vector<double> bwd(f.rend() - base - 1, f.rend());
    const auto Fb = cumulative_forward(bwd, h);
    for (int j = 0; j < base; ++j) F[j] = -Fb[base - j];
    return F;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

std::vector<double> cumulative_from_point(const std::vector<double>& nodes, const std::vector<double>& f_nodes,
                                          double s0, const std::function<double(double)>& f) {
    const int n = static_cast<int>(nodes.size());
    if (n < 2 || static_cast<int>(f_nodes.size()) != n)
        throw Error(ErrorKind::InvalidArgument, "line samples do not match the nodes");
    const double h = (nodes.back() - nodes.front()) / (n - 1);
    int k = static_cast<int>(std::lround((s0 - nodes.front()) / h));
    k = std::clamp(k, 0, n - 1);
    double partial = 0.0;
    if (std::abs(nodes[k] - s0) > 1e-14 * std::max(1.0, std::abs(s0))) partial = simpson(f, s0, nodes[k], 8);
    auto F = cumulative_simpson(f_nodes, h, k);
    for (double& x : F) x += partial;
    return F;
}

std::vector<double> derivative(const std::vector<double>& f, double h, EdgeOrder edge) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    if (n == 2) {
        d[0] = d[1] = (f[1] - f[0]) / h;
        return d;
    }
    if (edge == EdgeOrder::Fourth && n >= 5) {
        for (std::size_t i = 2; i + 2 < n; ++i) d[i] = d1_central4(f[i - 2], f[i - 1], f[i + 1], f[i + 2], h);
        const std::size_t m = n - 1;
        d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
        d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
        d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / (12.0 * h);
        d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h);
        return d;
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i >= 2 && i + 2 < n)
            d[i] = d1_central4(f[i - 2], f[i - 1], f[i + 1], f[i + 2], h);
        else
            d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    return d;
}

Field2D partial_u(const Field2D& f, double du, EdgeOrder edge) {
    Field2D r(f.nu(), f.nv());
    for (int j = 0; j < f.nv(); ++j) {
        const auto d = derivative(f.column(j), du, edge);
        for (int i = 0; i < f.nu(); ++i) r(i, j) = d[i];
    }
    return r;
}

Field2D partial_v(const Field2D& f, double dv, EdgeOrder edge) {
    Field2D r(f.nu(), f.nv());
    for (int i = 0; i < f.nu(); ++i) {
        const auto d = derivative(f.row(i), dv, edge);
        for (int j = 0; j < f.nv(); ++j) r(i, j) = d[j];
    }
    return r;
}

// ------------------------------------------------------------ CubicHermite

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
    if (x_.size() < 2 || y_.size() != x_.size() || d_.size() != x_.size())
        throw Error(ErrorKind::InvalidArgument, "Hermite interpolant needs matching samples (at least 2)");
    for (std::size_t k = 0; k + 1 < x_.size(); ++k)
        if (!(x_[k + 1] > x_[k])) throw Error(ErrorKind::InvalidArgument, "interpolation nodes must increase");
}

namespace {

void fritsch_carlson_limit(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& d) {
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double delta = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        if (delta == 0.0) {
            d[k] = d[k + 1] = 0.0;
            continue;
        }
        double a = d[k] / delta, b = d[k + 1] / delta;
        if (a < 0) d[k] = a = 0.0;
        if (b < 0) d[k + 1] = b = 0.0;
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            d[k] = tau * a * delta;
            d[k + 1] = tau * b * delta;
        }
    }
}

}  // namespace

CubicHermite CubicHermite::monotone(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n >= 2) {
        std::vector<double> delta(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        d[0] = delta[0];
        d[n - 1] = delta[n - 2];
        for (std::size_t k = 1; k + 1 < n; ++k)
            d[k] = (delta[k - 1] * delta[k] <= 0.0) ? 0.0 : 0.5 * (delta[k - 1] + delta[k]);
        fritsch_carlson_limit(x, y, d);
    }
    return CubicHermite(std::move(x), std::move(y), std::move(d));
}

CubicHermite CubicHermite::monotone_with_slopes(std::vector<double> x, std::vector<double> y,
                                                std::vector<double> slopes) {
    if (slopes.size() == x.size() && x.size() == y.size()) fritsch_carlson_limit(x, y, slopes);
    return CubicHermite(std::move(x), std::move(y), std::move(slopes));
}

std::size_t CubicHermite::interval(double t) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::ptrdiff_t k = (it - x_.begin()) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(x_.size()) - 2);
    return static_cast<std::size_t>(k);
}

double CubicHermite::operator()(double t) const {
    const std::size_t k = interval(t);
    const double h = x_[k + 1] - x_[k], s = (t - x_[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * h * d_[k] + (-2 * s3 + 3 * s2) * y_[k + 1] +
           (s3 - s2) * h * d_[k + 1];
}

double CubicHermite::derivative(double t) const {
    const std::size_t k = interval(t);
    const double h = x_[k + 1] - x_[k], s = (t - x_[k]) / h;
    const double s2 = s * s;
    return (6 * s2 - 6 * s) / h * y_[k] + (3 * s2 - 4 * s + 1) * d_[k] + (-6 * s2 + 6 * s) / h * y_[k + 1] +
           (3 * s2 - 2 * s) * d_[k + 1];
}

double CubicHermite::second_derivative(double t) const {
    const std::size_t k = interval(t);
    const double h = x_[k + 1] - x_[k], s = (t - x_[k]) / h;
    return (12 * s - 6) / (h * h) * y_[k] + (6 * s - 4) / h * d_[k] + (-12 * s + 6) / (h * h) * y_[k + 1] +
           (6 * s - 2) / h * d_[k + 1];
}

bool CubicHermite::increasing() const {
    for (std::size_t k = 0; k + 1 < y_.size(); ++k)
        if (!(y_[k + 1] > y_[k])) return false;
    return true;
}

double CubicHermite::inverse(double y) const {
    if (!increasing()) throw Error(ErrorKind::InvalidArgument, "inverse requires strictly increasing samples");
    const auto it = std::upper_bound(y_.begin(), y_.end(), y);
    std::ptrdiff_t k = (it - y_.begin()) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(y_.size()) - 2);
    double lo = x_[k], hi = x_[k + 1];
    // initial guess: linear within the bracketing interval (or linear extrapolation)
    double t = lo + (y - y_[k]) / (y_[k + 1] - y_[k]) * (hi - lo);
    const bool inside = y >= y_[k] && y <= y_[k + 1];
    for (int it2 = 0; it2 < 100; ++it2) {
        const double r = (*this)(t) - y;
        const double dr = derivative(t);
        if (inside) {
            if (r > 0)
                hi = t;
            else
                lo = t;
        }
        double tn = (dr > 0) ? t - r / dr : 0.5 * (lo + hi);
        if (inside && (tn <= lo || tn >= hi)) tn = 0.5 * (lo + hi);
        if (std::abs(tn - t) <= 1e-15 * std::max(1.0, std::abs(t))) {
            t = tn;
            break;
        }
        t = tn;
    }
    return t;
}

// ------------------------------------------------------------ NaturalSpline

NaturalSpline::NaturalSpline(double x0, double h, std::vector<double> y) : x0_(x0), h_(h), y_(std::move(y)) {
    const std::size_t n = y_.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "spline needs at least 2 samples");
    m_.assign(n, 0.0);
    if (n < 3) return;
    // Thomas algorithm for m[i-1] + 4 m[i] + m[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / h^2
    const std::size_t k = n - 2;
    std::vector<double> c(k, 0.0), d(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double rhs = 6.0 * (y_[i + 2] - 2.0 * y_[i + 1] + y_[i]) / (h_ * h_);
        const double denom = 4.0 - (i > 0 ? c[i - 1] : 0.0);
        c[i] = 1.0 / denom;
        d[i] = (rhs - (i > 0 ? d[i - 1] : 0.0)) / denom;
    }
    for (std::size_t i = k; i-- > 0;) m_[i + 1] = d[i] - (i + 1 < k ? c[i] * m_[i + 2] : 0.0);
}

void NaturalSpline::eval(double t, double& f, double& df, double& d2f) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y_.size());
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(std::floor((t - x0_) / h_));
    k = std::clamp<std::ptrdiff_t>(k, 0, n - 2);
    const double a = x0_ + k * h_;
    const double s = (t - a) / h_;  // local coordinate in [0,1]
    const double A = 1.0 - s, B = s;
    const double mk = m_[k], mk1 = m_[k + 1];
    f = A * y_[k] + B * y_[k + 1] + ((A * A * A - A) * mk + (B * B * B - B) * mk1) * h_ * h_ / 6.0;
    df = (y_[k + 1] - y_[k]) / h_ + (-(3 * A * A - 1) * mk + (3 * B * B - 1) * mk1) * h_ / 6.0;
    d2f = A * mk + B * mk1;
}

}  // namespace mtrap::num
