#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodal/nodal_solver.hpp"
#include "nodal/symmetry.hpp"

namespace nodal {

enum class RunMode { solve, ground, radial, sweep, eps_sweep, symmetry_check, oracle_compare };
std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);

struct SweepGrid {
    std::vector<double> p, q, alpha, beta;
    // false: Cartesian product of the four lists. true: the lists are walked in
    // lockstep (lists of length one are broadcast). An empty q list means q = p,
    // an empty beta list means beta = alpha.
    bool zip = false;
};

struct ExperimentConfig {
    RunMode mode = RunMode::solve;
    Domain domain = Domain::disk();
    int n_r = 64;
    int n_theta = 128;
    // Resolution of the radial grid used for c_nod_radial (0: same as n_r).
    int n_r_radial = 0;
    Params params;
    SweepGrid sweep;
    std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    SolveOptions solver;
    int workers = 1;
    int fs_samples = 32;
    // Relative to the output root (environment variable NODAL_OUTPUT_ROOT, else
    // the working directory) unless absolute.
    std::string output_dir = "nodal_output";
    // Field dumps analysed by symmetry-check.
    std::string u_field;
    std::string v_field;
};

const char* output_root_variable();

nlohmann::json to_json(const ExperimentConfig& cfg);
// Overlays the keys present in `j` onto `cfg`; unknown keys are rejected.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
// Throws ConfigError naming the offending setting.
void validate(const ExperimentConfig& cfg);
std::filesystem::path output_directory(const ExperimentConfig& cfg);

struct SweepRow {
    Params params;
    double c_nod = 0.0;
    double c_nod_radial = 0.0;
    double c_ground = 0.0;
    double raddev_u = 0.0;
    double raddev_v = 0.0;
    double component_gap = 0.0;
    double fs_score = 0.0;
    bool converged = false;
    std::string error;
};

extern const char* const sweep_csv_header;
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

// Parameter tuples of a sweep in output order.
std::vector<Params> sweep_params(const SweepGrid& grid);

struct SolveReport {
    NodalSolution solution;
    SymmetryReport symmetry;
    nlohmann::json summary;
    std::filesystem::path directory;
};

// solve / ground / radial: writes u, v, w1, w2 field dumps and solution.json.
SolveReport run_solve(const ExperimentConfig& cfg);
// One row per parameter tuple (nodal, radial and ground solves); writes
// sweep.csv, sweep.json and per-row JSON records.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);
SweepRow solve_row(const ExperimentConfig& cfg, const Params& params);
// Writes eps_sweep.csv with columns eps,c_eps,gap,converged.
std::vector<EpsRow> run_eps_sweep(const ExperimentConfig& cfg);
// Writes oracle.json; requires p = q and alpha = beta.
nlohmann::json run_oracle_compare(const ExperimentConfig& cfg);
// Loads u_field and v_field and writes symmetry.json.
nlohmann::json run_symmetry_check(const ExperimentConfig& cfg);

nlohmann::json solution_json(const NodalSolution& sol, const SymmetryReport& sym);

// Writes `content` to a temporary file next to `path` and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace nodal
