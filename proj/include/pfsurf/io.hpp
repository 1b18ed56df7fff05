#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pfsurf/constraints.hpp"
#include "pfsurf/grid.hpp"
#include "pfsurf/solvers.hpp"

namespace pfsurf {

// RVOL: raw little-endian payload at `path`, JSON sidecar at `path + ".json"`
// holding {"nx","ny","nz","dtype","order":"x-fastest"}.

enum class RvolType { f32, u8 };

struct RvolHeader {
    GridSpec grid;
    RvolType dtype = RvolType::f32;
};

std::filesystem::path rvol_sidecar(const std::filesystem::path& path);

/// Writes u as 32-bit floats.
void write_rvol(const std::filesystem::path& path, const ScalarField3D& u);
/// Writes a mask as bytes 0/1.
void write_rvol(const std::filesystem::path& path, const BinaryVolume& vol);

RvolHeader read_rvol_header(const std::filesystem::path& path);
/// Reads either dtype as reals.
ScalarField3D read_rvol_field(const std::filesystem::path& path);
/// Reads a u8 volume; any value other than 0 or 1 is a ValidationError.
BinaryVolume read_rvol_mask(const std::filesystem::path& path);

/// Binary PGM (P5). Writes 0/255; on reading any nonzero sample is set.
void write_pgm(const std::filesystem::path& path, const Mask2D& mask);
Mask2D read_pgm(const std::filesystem::path& path);

/// Writes `slice_<plane>.pgm` per slice plus `manifest.json`
/// {"axis", "grid":[nx,ny,nz], "planes":[...]} into `dir` (created if needed).
void write_slice_stack(const std::filesystem::path& dir, const SliceStack& stack);

struct SliceReport {
    int plane = 0;
    std::string file;
    std::size_t voxels = 0;
};

struct StackReport {
    std::vector<SliceReport> slices;
    std::vector<std::string> warnings;  ///< empty slices and similar
};

struct IngestedStack {
    SliceStack stack;
    StackReport report;
};

/// Loads a slice directory. `manifest` defaults to `dir/manifest.json`.
/// Every slice must match the in-plane size implied by the grid and axis;
/// mismatches name the offending file.
IngestedStack ingest_real_stack(const std::filesystem::path& dir,
                                const std::optional<std::filesystem::path>& manifest = {});

/// `iter,perimeter,willmore,total,rel_err,wall_ms`
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

/// "c/N" (N = largest axis count) or a plain positive number.
double eval_eps_rule(const std::string& rule, const GridSpec& grid);
/// "eps^p", "c*eps^p" or a plain positive number.
double eval_tau_rule(const std::string& rule, double eps);

/// Everything needed to replay one reconstruction.
struct ExperimentManifest {
    std::string example = "sphere";  ///< sphere, branching, or "stack" for a slice directory
    int n = 32;
    std::string stack_dir;           ///< used when example == "stack"
    int axis = 2;
    std::vector<int> planes;         ///< empty: the example's default planes
    std::uint64_t seed = 7;
    Formulation formulation = Formulation::elastica;
    Method method = Method::pgdm;
    UpdateScheme scheme = UpdateScheme::gradient;
    std::string eps_rule = "1.5/N";
    std::string tau_rule = "eps^4";
    double rho = 1.0;
    double alpha = 0.5;
    int erosion = 0;
    ObstacleMode mode = ObstacleMode::indicator;
    int max_iters = 2000;
    double tol_rel = 1e-4;
    double tol_energy = 0.0;
    std::string out_u;
    std::string out_trace;
};

std::string to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const std::string& text, const std::string& source = "manifest");
void save_manifest(const std::filesystem::path& path, const ExperimentManifest& m);
ExperimentManifest load_manifest(const std::filesystem::path& path);

/// The slice stack a manifest describes.
SliceStack manifest_stack(const ExperimentManifest& m);
/// Solver settings after evaluating the eps and tau rules on `grid`.
SolverConfig manifest_config(const ExperimentManifest& m, const GridSpec& grid);

/// Builds the problem, runs the solver, and writes the declared outputs.
SolverRun run_manifest(const ExperimentManifest& m);

}  // namespace pfsurf
