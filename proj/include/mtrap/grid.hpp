#pragma once

#include <string>
#include <vector>

namespace mtrap {

// Axis-aligned parameter rectangle [u_min,u_max] x [v_min,v_max].
struct Rect {
    double u_min = 0, u_max = 1, v_min = 0, v_max = 1;

    double width() const { return u_max - u_min; }
    double height() const { return v_max - v_min; }
    double diagonal() const;
    bool contains(double u, double v, double slack = 0.0) const {
        return u >= u_min - slack && u <= u_max + slack && v >= v_min - slack && v <= v_max + slack;
    }
    // Throws InvalidDomain for non-positive side lengths or non-finite bounds.
    void validate() const;
};

// Uniform tensor grid: node (i,j) sits at (u_min + i*du, v_min + j*dv);
// row index i runs along u, column index j along v.
struct GridSpec {
    Rect rect;
    int nu = 2, nv = 2;

    GridSpec() = default;
    GridSpec(const Rect& r, int nu_, int nv_) : rect(r), nu(nu_), nv(nv_) {}

    double du() const { return rect.width() / (nu - 1); }
    double dv() const { return rect.height() / (nv - 1); }
    double u(int i) const { return i == nu - 1 ? rect.u_max : rect.u_min + i * du(); }
    double v(int j) const { return j == nv - 1 ? rect.v_max : rect.v_min + j * dv(); }
    std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
    std::vector<double> u_nodes() const;
    std::vector<double> v_nodes() const;
    // Throws InvalidGrid unless nu, nv >= 2 and the rectangle is valid.
    void validate() const;
    // Nodes strictly inside, shrunk by the given fraction of each side on both ends.
    GridSpec inset(double fraction) const;
};

// Dense row-major array over a GridSpec.
class Field2D {
public:
    Field2D() = default;
    Field2D(int nu, int nv, double value = 0.0) : nu_(nu), nv_(nv), data_(static_cast<std::size_t>(nu) * nv, value) {}
    explicit Field2D(const GridSpec& g, double value = 0.0) : Field2D(g.nu, g.nv, value) {}

    int nu() const { return nu_; }
    int nv() const { return nv_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * nv_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * nv_ + j]; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    std::vector<double> row(int i) const;     // fixed u-index, varying v
    std::vector<double> column(int j) const;  // fixed v-index, varying u
    double max_abs() const;

private:
    int nu_ = 0, nv_ = 0;
    std::vector<double> data_;
};

}  // namespace mtrap
