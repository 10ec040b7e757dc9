#ifndef NCIHF_SCENARIO_HPP
#define NCIHF_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "constraints.hpp"
#include "dynamics.hpp"
#include "params.hpp"

namespace ncihf {

// Scenario configuration (JSON). Lengths and times are in units of delta.
struct ScenarioConfig {
    int version = 1;
    double delta = 1.0;
    Vec3 n0{0.0, 0.0, 1.0};
    struct SolitonEntry {
        double re_a, im_a;
        Vec3 n3;
    };
    std::vector<SolitonEntry> solitons;
    double t_start = 0.0, t_end = 0.0;
    int n_outputs = 2;
    double window_multiple = 40.0;
    int n_points = 4096;
    std::map<std::string, double> tolerances;
    std::string out_dir = "out";
    std::string format = "csv";
    unsigned seed = 12345;
    double tol_scale = 1.0;

    Params params() const { return Params(delta); }
    SolitonSpec spec() const;
    double tol(const std::string& name, double fallback) const;
};

ScenarioConfig load_config(const std::string& path);

// Exit codes shared by the CLI and the pipeline helpers.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_singular = 2,
    exit_strip = 3,
    exit_verification = 4,
};

int cmd_solve(const ScenarioConfig& cfg);
int cmd_simulate(const ScenarioConfig& cfg);
int cmd_verify(const ScenarioConfig& cfg);
int cmd_diagnose(const ScenarioConfig& cfg);
int cmd_limits(const ScenarioConfig& cfg);

// Null-spin and second-constraint residuals of an arbitrary spin-pole state.
std::vector<double> constraint_residuals_of_state(const CMState& st);

namespace io {
// Deterministic number formatting for reproducible artifacts.
std::string fmt(double v);
void write_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);

// trajectory.csv: t, per-particle Re/Im a and Re/Im s components, monitors
std::string trajectory_csv(const Trajectory& traj);
// snapshot csv: x, u1..u3, v1..v3, eps_u, eps_v
std::string snapshot_csv(const CMState& st, const std::vector<double>& xs);
}  // namespace io

}  // namespace ncihf

#endif
