#pragma once

#include "projcool/evolution.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace projcool {

/// One experiment: a model, a schedule, a stepping method, an initial state,
/// the time grid, noise, and seeds. Serializes losslessly to/from JSON.
struct ExperimentConfig {
    std::string experiment = "custom";  // fig1|fig2a|fig2b|fig3|custom
    ModelSpec model = ModelSpec::model1b();
    Schedule schedule = Schedule::projected_cooling();
    StepMethod method = StepMethod::Full;
    InitialStateKind initial = InitialStateKind::Point;
    double dt = 0.3;
    int steps = 40;            // N_t, or N_t_max for a sweep
    bool adiabatic_sweep = false;
    double epsilon = 0.0;
    std::uint64_t seed = 1;
    int noise_realizations = 1;  // >1 averages the noisy overlap curve
    double threshold = 0.0;      // overlap threshold echoed in summaries, 0 = none
    ExpEngine engine = ExpEngine::Auto;
    bool midpoint_time = false;
    std::string output_dir;

    std::string to_json_string(int indent = 2) const;
    static ExperimentConfig from_json_string(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static ExperimentConfig load(const std::filesystem::path& path);

    bool operator==(const ExperimentConfig&) const = default;
};

struct RunSummary {
    std::string curve;
    double final_overlap = 0.0;
    double max_overlap = 0.0;
    int threshold_step = -1;  // first step reaching the threshold, -1 if never
    double threshold = 0.0;
    double final_energy = 0.0;
    double final_norm = 0.0;
};

RunSummary summarize(const std::string& curve, const Trajectory& trajectory, double threshold);

struct RunArtifact {
    ExperimentConfig config;
    std::string curve_name;
    Trajectory trajectory;         // empty when this is a sweep artifact
    std::vector<SweepPoint> sweep;  // nonempty for adiabatic sweeps
    RunSummary summary;
};

// Data tables: comma-separated with a header row, tagged with the format
// version on the first line. Files are written atomically (temp + rename).
void write_curve_csv(const std::filesystem::path& path, const Trajectory& trajectory);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points,
                     double dt);
void write_grid_csv(const std::filesystem::path& path, const Matrix& grid,
                    int interior_half_extent);
void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);
std::string format_double(double x);

/// Runs one configured experiment; writes a curve table and manifest when the
/// config names an output directory.
struct SingleRunResult {
    RunArtifact artifact;
    std::vector<std::filesystem::path> files;
};
SingleRunResult run_single(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Figure reproductions

struct Fig1Options {
    std::filesystem::path output_dir;  // empty: compute only
    std::uint64_t seed = 1;
    int runs = 5;
    double dt = 0.25;
    double total_time = 50.0;
};

struct Fig2Options {
    std::filesystem::path output_dir;
    std::uint64_t seed = 1;
    double epsilon = 0.05;  // the noisy-curve noise strength
    int max_steps = 40;
    double dt = 0.3;
    int noise_realizations = 1;
};

struct Fig3Options {
    std::filesystem::path output_dir;
    int steps = 40;
    double dt = 0.3;
};

struct FigureResult {
    std::vector<RunArtifact> artifacts;
    std::vector<std::filesystem::path> files;
};

enum class Fig2Panel { A, B };

/// Five seeded random-initial static runs of the single-well chain, volume
/// sized so nothing reflects back within the run.
FigureResult run_fig1(const Fig1Options& options = {});

/// The overlap-vs-steps curve family: adiabatic sweep baseline plus the
/// cooled curves in full/factorized x point/spread variants, clean and noisy.
FigureResult run_fig2(Fig2Panel panel, const Fig2Options& options = {});

struct Fig3Result {
    Matrix exact;      // 11x11 interior magnitude grids, unit sum of squares
    Matrix adiabatic;
    Matrix cooled;
    double cooled_vs_exact = 0.0;
    double adiabatic_vs_exact = 0.0;
    std::vector<std::filesystem::path> files;
};

Fig3Result run_fig3(const Fig3Options& options = {});

/// Expands {"base": <config>, "grid": {field: [values...]}} into the cross
/// product of runs. Grid fields: epsilon, seed, dt, steps, kinetic_scale,
/// kappa, tau. Writes per-run tables plus one summary table.
struct SweepGridResult {
    std::vector<RunArtifact> artifacts;
    std::vector<std::filesystem::path> files;
};
SweepGridResult run_sweep(const std::string& sweep_json,
                          const std::filesystem::path& output_dir_override = {});

// ---------------------------------------------------------------------------
// Acceptance checks

struct CheckItem {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool all_passed() const;
};

struct AcceptanceOptions {
    std::filesystem::path work_dir;  // scratch space; empty picks a temp dir
    std::uint64_t seed = 1;
    std::optional<int> only_criterion;  // restrict to one of 1..8
};

/// Runs the acceptance suite: figure thresholds, oracle checks, qubit-sector
/// equivalence, stepper properties, determinism, and the decay fitter.
CheckReport run_acceptance(const AcceptanceOptions& options = {});

std::string format_report(const CheckReport& report);

/// Threshold evaluation for one overlap panel: cooled-curve variants must
/// reach pc_threshold within max_steps (clean, and with noise for each of
/// noise_seed_count derived seeds), while the adiabatic sweep must stay at or
/// below ae_ceiling. Exposed so negative controls can run corrupted models.
CheckItem check_panel_thresholds(const std::string& name, const ModelSpec& spec,
                                 double pc_threshold, double ae_ceiling, double eps,
                                 int noise_seed_count, std::uint64_t root_seed, int max_steps,
                                 double dt, double runtime_limit_seconds);

}  // namespace projcool
