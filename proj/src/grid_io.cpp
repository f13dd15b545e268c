#include "mtrap/grid_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "mtrap/errors.hpp"
#include "mtrap/numerics.hpp"

namespace mtrap::io {

void Grid2D::validate() const {
    if (nu < 2 || nv < 2) throw Error(ErrorKind::InvalidGrid, "grid needs at least 2 nodes per axis");
    if (!std::isfinite(rect.u_min) || !std::isfinite(rect.u_max) || !std::isfinite(rect.v_min) ||
        !std::isfinite(rect.v_max) || !(rect.u_max > rect.u_min) || !(rect.v_max > rect.v_min))
        throw Error(ErrorKind::InvalidGrid, "ranges must be finite and increasing");
    for (const auto& [name, f] : fields) {
        if (f.nu() != nu || f.nv() != nv) throw Error(ErrorKind::InvalidGrid, "field '" + name + "' has the wrong shape");
        for (double x : f.data())
            if (!std::isfinite(x)) throw Error(ErrorKind::InvalidGrid, "field '" + name + "' has a non-finite value");
    }
}

const Field2D& Grid2D::field(const std::string& name) const {
    const auto it = fields.find(name);
    if (it == fields.end()) throw Error(ErrorKind::InvalidArgument, "unknown field '" + name + "'");
    return it->second;
}

Field2D& Grid2D::add(const std::string& name) { return fields[name] = Field2D(nu, nv); }

nlohmann::json to_json(const Grid2D& g) {
    nlohmann::json j;
    j["u_range"] = {g.rect.u_min, g.rect.u_max};
    j["v_range"] = {g.rect.v_min, g.rect.v_max};
    j["shape"] = {g.nu, g.nv};
    nlohmann::json fields = nlohmann::json::object();
    for (const auto& [name, f] : g.fields) fields[name] = f.data();
    j["fields"] = std::move(fields);
    return j;
}

Grid2D grid_from_json(const nlohmann::json& j) {
    try {
        Grid2D g;
        const auto& ur = j.at("u_range");
        const auto& vr = j.at("v_range");
        const auto& sh = j.at("shape");
        if (ur.size() != 2 || vr.size() != 2 || sh.size() != 2)
            throw Error(ErrorKind::InvalidGrid, "u_range, v_range and shape need two entries");
        g.rect = {ur[0].get<double>(), ur[1].get<double>(), vr[0].get<double>(), vr[1].get<double>()};
        g.nu = sh[0].get<int>();
        g.nv = sh[1].get<int>();
        if (g.nu < 2 || g.nv < 2) throw Error(ErrorKind::InvalidGrid, "grid needs at least 2 nodes per axis");
        for (const auto& [name, arr] : j.at("fields").items()) {
            if (!arr.is_array() || arr.size() != static_cast<std::size_t>(g.nu) * g.nv)
                throw Error(ErrorKind::InvalidGrid, "field '" + name + "' does not have shape [Nu, Nv]");
            Field2D f(g.nu, g.nv);
            for (std::size_t k = 0; k < arr.size(); ++k) {
                if (!arr[k].is_number()) throw Error(ErrorKind::InvalidGrid, "field '" + name + "' has a non-number");
                f.data()[k] = arr[k].get<double>();
            }
            g.fields.emplace(name, std::move(f));
        }
        g.validate();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidGrid, std::string("malformed grid: ") + e.what());
    }
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw Error(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot move output into place at '" + path + "'");
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::Io, "read from '" + path + "' failed");
    return ss.str();
}

nlohmann::json read_json(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_grid(const std::string& path, const Grid2D& grid) {
    grid.validate();
    write_text_atomic(path, to_json(grid).dump(1) + "\n");
}

Grid2D read_grid(const std::string& path) { return grid_from_json(read_json(path)); }

std::string to_csv(const Grid2D& grid, const std::string& field) {
    const Field2D& f = grid.field(field);
    const GridSpec g = grid.spec();
    std::string out = "u,v," + field + "\n";
    char buf[96];
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.u(i), g.v(j), f(i, j));
            out += buf;
        }
    return out;
}

void write_csv(const std::string& path, const Grid2D& grid, const std::string& field) {
    write_text_atomic(path, to_csv(grid, field));
}

namespace {

// Tensor-product natural cubic spline of one coordinate: splines in u along
// every v-node, then a spline in v through their values at the query u.
class TensorSpline {
public:
    TensorSpline(const GridSpec& g, const Field2D& f) : g_(g) {
        cols_.reserve(g.nv);
        for (int j = 0; j < g.nv; ++j) cols_.emplace_back(g.rect.u_min, g.du(), f.column(j));
    }

    // value and derivatives f, f_u, f_v, f_uu, f_uv, f_vv
    std::array<double, 6> eval(double u, double v) const {
        std::vector<double> a(g_.nv), b(g_.nv), c(g_.nv);
        for (int j = 0; j < g_.nv; ++j) cols_[j].eval(u, a[j], b[j], c[j]);
        const num::NaturalSpline sa(g_.rect.v_min, g_.dv(), a), sb(g_.rect.v_min, g_.dv(), b),
            sc(g_.rect.v_min, g_.dv(), c);
        double f, fv, fvv, fu, fuv, fuu_, d1, d2, d3;
        sa.eval(v, f, fv, fvv);
        sb.eval(v, fu, fuv, d1);
        sc.eval(v, fuu_, d2, d3);
        return {f, fu, fv, fuu_, fuv, fvv};
    }

private:
    GridSpec g_;
    std::vector<num::NaturalSpline> cols_;
};

}  // namespace

SurfacePatch surface_from_grid(const Grid2D& grid) {
    grid.validate();
    const GridSpec g = grid.spec();
    auto comps = std::make_shared<std::vector<TensorSpline>>();
    for (const char* name : kPositionFields) comps->emplace_back(g, grid.field(name));
    return SurfacePatch::analytic(g.rect, [comps](double u, double v) {
        SurfaceJet j;
        for (int c = 0; c < 4; ++c) {
            const auto d = (*comps)[c].eval(u, v);
            j.z.c[c] = d[0];
            j.z_u.c[c] = d[1];
            j.z_v.c[c] = d[2];
            j.z_uu.c[c] = d[3];
            j.z_uv.c[c] = d[4];
            j.z_vv.c[c] = d[5];
        }
        return j;
    });
}

}  // namespace mtrap::io
