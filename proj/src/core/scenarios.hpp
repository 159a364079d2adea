#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "material.hpp"
#include "timestepper_cq.hpp"

namespace viscowave::scenarios {

enum class Integrator { CQ, Semigroup };

std::string_view to_string(Integrator integrator);

struct OutputSpec {
    std::string timeseries = "timeseries.csv";  // empty disables
    std::string spacetime;                      // empty disables
    std::size_t spacetime_nx = 101;
    std::size_t spacetime_nt = 401;
    std::size_t stride = 1;
};

/// One experiment. JSON layout (every key is checked; unknown keys are errors):
///
///   description    string, optional
///   regions        [{name, kind, x_lo, x_hi, c0, c1, a, nu?, rho}]
///   mesh           {elements_per_unit, degree}
///   time           {T, steps}
///   signals        {dirichlet, neumann}: {kind, knots[4], amplitude, period?, count?}
///   integrator     "cq" | "semigroup"
///   probes         [x, ...]; the first one feeds the dissipation metric
///   output         {timeseries, spacetime, spacetime_nx, spacetime_nt, stride}
///   metric_window  [t0, t1]
struct SimulationConfig {
    std::string description;
    material::CoupledModel model;
    int elements_per_unit = 32;
    int degree = 4;
    double T = 40.0;
    std::size_t steps = 10240;
    BoundarySignals signals{signals::zero(), signals::zero()};
    Integrator integrator = Integrator::CQ;
    std::vector<double> probes{1.0};
    OutputSpec output;
    std::array<double, 2> metric_window{10.0, 40.0};

    double k() const { return T / static_cast<double>(steps); }
};

/// Throws ValidationError whose message starts with the offending field path.
SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::filesystem::path& path);
/// Pretty-printed JSON with every field written out.
std::string serialize(const SimulationConfig& config);

void validate(const SimulationConfig& config);

fem::Mesh1D make_mesh(const SimulationConfig& config);

struct ScenarioResult {
    Trajectory trajectory;
    std::vector<std::vector<double>> probe_series;  // [probe][n], n = 0..N
};

/// Validates and runs the configured integrator.
ScenarioResult simulate(const SimulationConfig& config);

/// Trapezoidal integral of |u|^2 over the grid points inside [t0, t1].
double dissipation_metric(const std::vector<double>& series, double k, double t0, double t1);

struct SpacetimeGrid {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> u;  // row-major [it * nx + ix]

    double at(std::size_t it, std::size_t ix) const { return u[it * x.size() + ix]; }
};

/// Uniform samples in x over [0, L] and in t over [0, T], the latter snapped
/// to the nearest stored step.
SpacetimeGrid spacetime_grid(const Trajectory& trajectory, std::size_t nx, std::size_t nt);

/// Shortest round-trip decimal form, as written to every CSV.
std::string format_number(double v);

/// Header `t,u@<x>...`, rows n = stride, 2 stride, ..., N (t = 0 is omitted).
void write_timeseries(std::ostream& out, const ScenarioResult& result, const std::vector<double>& probes,
                      std::size_t stride);
/// Header `t\x,<x0>,<x1>,...`; each row starts with its time.
void write_spacetime(std::ostream& out, const SpacetimeGrid& grid);
void write_weights(std::ostream& out, const std::vector<double>& omega);

struct ScenarioArtifacts {
    std::vector<std::filesystem::path> files;
    double final_probe = 0.0;
    double dissipation_metric = 0.0;
};

/// simulate + write the configured outputs below `out_dir`.
ScenarioArtifacts run_scenario(const SimulationConfig& config, const std::filesystem::path& out_dir);

struct SweepRow {
    double value = 0.0;
    double final_probe = 0.0;
    double dissipation_metric = 0.0;
};

/// Applies `region.param` = value (param in c0, c1, a, nu) to a copy of the config.
SimulationConfig with_parameter(const SimulationConfig& config, std::string_view parameter, double value);

/// One run per value, spread over worker threads. Writes run_<i>.csv
/// (time series) per value and summary.csv (value, final_probe,
/// dissipation_metric) when `out_dir` is not empty.
std::vector<SweepRow> sweep(const SimulationConfig& config, std::string_view parameter,
                            const std::vector<double>& values, const std::filesystem::path& out_dir,
                            std::size_t workers = 0);

void write_sweep_summary(std::ostream& out, const std::vector<SweepRow>& rows);

/// Named parameter sets behind the shipped configs, one model per table column
/// (and per swept value). Names look like "table1_zener_c1_2.75".
struct NamedModel {
    std::string name;
    material::CoupledModel model;
};
std::vector<NamedModel> model_catalogue();

struct HypothesisSummary {
    struct Row {
        std::string model;
        std::string region;
        material::HypothesisReport report;
    };
    std::vector<Row> rows;
    material::HypothesisReport power_bound;
    bool passed() const;
};

/// verify_hypotheses on every region of model_catalogue() plus the s^nu bound.
HypothesisSummary check_all_hypotheses(std::size_t samples, std::uint64_t seed);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least squares on the grid points t_n = n k inside [t0, t1].
LinearFit linear_fit(const std::vector<double>& series, double k, double t0, double t1);

/// max |(u^{n+1} - u^{n-1}) / 2k| over grid points inside [t0, t1].
double max_abs_slope(const std::vector<double>& series, double k, double t0, double t1);

/// Energy 1/2 int rho v^2 + c0 u_x^2 over [x0, x1] of the difference of two
/// trajectories on the same mesh and time grid, with central-difference
/// velocity, evaluated at step n (0 < n < N).
double segment_energy(const Trajectory& a, const Trajectory* b, const material::CoupledModel& model,
                      double x0, double x1, std::size_t n);

}  // namespace viscowave::scenarios
