#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mtrap/grid.hpp"

namespace mtrap::num {

// ---------------------------------------------------------------- quadrature

// Composite Simpson rule on uniformly spaced samples. An odd number of
// intervals is closed with the 3/8 rule; two samples fall back to the
// trapezoid rule.
double simpson(const std::vector<double>& f, double h);

// F[j] = integral from node `base` to node j of the sampled function
// (negative for j < base). Each partial integral uses Simpson pairs from the
// base plus, for an odd offset, one interval of the 3-point rule.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h, int base = 0);

// Composite Simpson on [a,b] with n (even) subintervals of a callable.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 8);

// Cumulative integrals from an arbitrary base point s0 to every node of a
// uniform line. f_nodes holds samples at the nodes; f is used only for the
// short partial segment between s0 and the nearest node.
std::vector<double> cumulative_from_point(const std::vector<double>& nodes, const std::vector<double>& f_nodes,
                                          double s0, const std::function<double(double)>& f);

// ------------------------------------------------------- finite differences

// Fourth-order central first derivative from samples at x-2h..x+2h.
inline double d1_central4(double fm2, double fm1, double fp1, double fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

template <class F>
auto d1_stencil(const F& f, double x, double h) {
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) * (1.0 / (12.0 * h));
}

// First derivative of a uniformly sampled line: 4th-order central where the
// stencil fits, 2nd-order central one node from the ends, 2nd-order one-sided
// at the ends.
// Accuracy of the one-sided stencils used at the two nodes nearest each end.
enum class EdgeOrder { Second, Fourth };

std::vector<double> derivative(const std::vector<double>& f, double h, EdgeOrder edge = EdgeOrder::Second);

// Partial derivatives of a gridded field (axis 0 = u, axis 1 = v).
Field2D partial_u(const Field2D& f, double du, EdgeOrder edge = EdgeOrder::Second);
Field2D partial_v(const Field2D& f, double dv, EdgeOrder edge = EdgeOrder::Second);

// ---------------------------------------------------------- interpolation

// Piecewise cubic Hermite interpolant. Outside the node range the end cubic
// is extended.
class CubicHermite {
public:
    CubicHermite() = default;
    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

    // Fritsch-Carlson monotone slopes from the data alone.
    static CubicHermite monotone(std::vector<double> x, std::vector<double> y);
    // Given slopes, limited with the Fritsch-Carlson condition so that
    // monotone data stay monotone.
    static CubicHermite monotone_with_slopes(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

    double operator()(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    // Solves p(t) = y for strictly increasing data (bracketed Newton).
    double inverse(double y) const;

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }
    const std::vector<double>& slopes() const { return d_; }
    bool increasing() const;

private:
    std::size_t interval(double t) const;
    std::vector<double> x_, y_, d_;
};

// Natural cubic spline on a uniform line (used for sampled surfaces).
class NaturalSpline {
public:
    NaturalSpline() = default;
    NaturalSpline(double x0, double h, std::vector<double> y);
    // value, first and second derivative
    void eval(double t, double& f, double& df, double& d2f) const;
    double operator()(double t) const {
        double f, a, b;
        eval(t, f, a, b);
        return f;
    }

private:
    double x0_ = 0, h_ = 1;
    std::vector<double> y_, m_;
};

}  // namespace mtrap::num
