#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "mtrap/grid.hpp"
#include "mtrap/surface.hpp"

namespace mtrap::io {

// Named scalar fields sampled on a rectangular grid (row index = u, column
// index = v, values row-major).
struct Grid2D {
    Rect rect;
    int nu = 2, nv = 2;
    std::map<std::string, Field2D> fields;

    Grid2D() = default;
    explicit Grid2D(const GridSpec& g) : rect(g.rect), nu(g.nu), nv(g.nv) {}

    GridSpec spec() const { return GridSpec(rect, nu, nv); }
    // Throws InvalidGrid on shape mismatches, non-finite values or fewer than
    // two nodes per axis.
    void validate() const;
    const Field2D& field(const std::string& name) const;  // InvalidArgument if absent
    Field2D& add(const std::string& name);                  // zero-initialized
};

nlohmann::json to_json(const Grid2D& grid);
Grid2D grid_from_json(const nlohmann::json& j);  // InvalidGrid

// File I/O; failures throw Io. Writes are atomic (temporary file + rename).
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);
void write_grid(const std::string& path, const Grid2D& grid);
Grid2D read_grid(const std::string& path);
nlohmann::json read_json(const std::string& path);

// CSV with header "u,v,<field>", one row per node in row-major order,
// 17 significant digits, LF line endings. InvalidArgument on unknown field.
std::string to_csv(const Grid2D& grid, const std::string& field);
void write_csv(const std::string& path, const Grid2D& grid, const std::string& field);

// Names of the coordinate fields of a sampled surface.
inline constexpr const char* kPositionFields[4] = {"x1", "x2", "x3", "x4"};

// Surface through the samples of the coordinate fields x1..x4, interpolated
// by a tensor-product natural cubic spline; derivatives are those of the
// spline.
SurfacePatch surface_from_grid(const Grid2D& grid);

}  // namespace mtrap::io
