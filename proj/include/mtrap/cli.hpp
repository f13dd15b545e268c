#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "mtrap/canonical.hpp"
#include "mtrap/errors.hpp"
#include "mtrap/grid.hpp"
#include "mtrap/meridian.hpp"

namespace mtrap::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,         // I/O, usage and precondition errors
    kClassification = 2,  // surface is not spacelike / marginally trapped, or verification failed
    kDegenerate = 3,      // 4 nu^2 + 4 lambda^2 - 1 vanishes
    kIncompatible = 4,    // invariant triple violates the compatibility equations
};

int exit_code(ErrorKind kind);

struct RunConfig {
    // surface source
    std::string source = "builtin";        // "builtin" or "grid"
    std::string builtin = "meridian";      // meridian | light_cone | plane | sphere | timelike_plane
    std::string parameters = "principal";  // meridian: original | principal | canonical
    std::string surface_path;              // grid file with x1..x4 when source == "grid"
    std::optional<Rect> domain;
    meridian::MeridianConfig meridian;
    double radius = 1.0;  // light cone / sphere
    // sampling
    int nu = 33, nv = 33;
    // tolerances
    double classify_tol = 1e-9;
    double principal_tol = 1e-8;
    double canonical_tol = 1e-5;
    double residual_tol = 1e-5;
    double compatibility_threshold = 1e-3;
    double degenerate_tol = kDegenerateTol;
    // gauge
    std::optional<CanonicalGauge> gauge;
    // solver
    int max_iterations = 50;
    double solver_tol = 1e-12;
    int quadrature_nodes = 129;
    double step = 1.0 / 128.0;
    unsigned seed = 1;
    // files
    std::string input;
    std::string output;
    std::string grid_output;
    std::string report;
    std::string field;
    bool require_canonical = false;

    void validate() const;  // InvalidArgument
};

RunConfig config_from_json(const nlohmann::json& j);  // InvalidArgument on bad values
nlohmann::json config_to_json(const RunConfig& c);

// Runs the command line; returns the process exit code. Reports go to `out`,
// a single-line JSON error record to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mtrap::cli
