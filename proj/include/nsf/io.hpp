#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsf/apriori.hpp"
#include "nsf/defects.hpp"
#include "nsf/experiments.hpp"

namespace nsf {

using json = nlohmann::json;

struct GridBlock {
  int dim = 1;
  int nx = 64, ny = 64;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool operator==(const GridBlock&) const = default;
};

struct BoundaryBlock {
  double theta = 1.0;    // wall temperature at the origin
  double slope_x = 0.0;  // theta_B = theta + slope_x x + slope_y y
  double slope_y = 0.0;
  bool operator==(const BoundaryBlock&) const = default;
};

struct SolverBlock {
  double cfl = 0.4;
  double t_end = 0.1;
  double snapshot_dt = 0.01;
  double floor = 1e-10;
  long max_steps = 10'000'000;
  bool operator==(const SolverBlock&) const = default;
};

struct ExperimentBlock {
  std::string initial = "decay";  // decay | strong
  std::string profile = "shear";  // strong profile for initial = strong and for relenergy
  double rho0 = 1.0, amp_u = 0.2, amp_theta = 0.2;
  double perturbation = 0.0;      // eps added to the initial data
  int theorem = 2;
  std::vector<double> eps{1e-2, 1e-3};
  std::vector<int> grids{32, 64, 128};
  std::vector<double> r2_eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  long samples = 10000;
  bool operator==(const ExperimentBlock&) const = default;
};

struct RunConfig {
  ThermoSpec model;
  TransportSpec transport;
  GridBlock grid;
  BoundaryBlock boundary;
  SolverBlock solver;
  ExperimentBlock experiment;
  std::uint64_t seed = 0;
  std::string output_dir;  // empty: NSFLAB_OUTPUT_ROOT or ./nsflab-out
  bool operator==(const RunConfig&) const = default;
};

/// Parses INI text. Throws ConfigError with "origin:line:column" on syntax errors and
/// with the dotted key path on unknown keys or bad values.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::string& path);

/// Every key with its effective value; parse_config(to_ini(c)) == c.
std::string to_ini(const RunConfig& c);
void save_config(const std::string& path, const RunConfig& c);

Grid make_grid(const GridBlock& g);
BoundaryData make_boundary(const BoundaryBlock& b);
SolverConfig make_solver_config(const SolverBlock& s);

/// `override_dir` wins, then cfg.output_dir, then $NSFLAB_OUTPUT_ROOT/<command>, then ./nsflab-out/<command>.
/// The directory is created.
std::string resolve_output_dir(const RunConfig& c, const std::string& command, const std::string& override_dir = "");

/// %.17g formatting.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

/// Columns: t, mass, momentum_x, momentum_y, energy, entropy, ballistic, wall_heat.
CsvTable totals_table(const Trajectory& tr);
void write_series(const std::string& path, const Trajectory& tr);

constexpr std::uint32_t kSnapshotVersion = 1;

/// Little-endian header "NSFSNAP\0", version, dim, nx, ny, dtype (1 = float64), box, t;
/// then interior rho, u components, theta.
void write_snapshot(const std::string& path, const FieldSet& f, std::uint32_t version = kSnapshotVersion);
/// Throws FormatError on a bad magic, unsupported version or dtype, or truncation.
FieldSet read_snapshot(const std::string& path);

void write_json(const std::string& path, const json& j);

json to_json(const RunConfig& c);
json to_json(const StructureReport& r);
json to_json(const GibbsSuiteReport& r);
json to_json(const TheoremReport& r);
json to_json(const CompatStudy& s);
json to_json(const InequalityStudy& s);
json to_json(const AprioriReport& r);
json to_json(const DefectStudyReport& r);
json to_json(const RelEnergyReport& r);
json to_json(const R2Smallness& r);

struct RegisteredExperiment {
  std::string name;
  std::string summary;
};

/// Names accepted by the CLI, in dispatch order.
const std::vector<RegisteredExperiment>& experiment_registry();

}  // namespace nsf
