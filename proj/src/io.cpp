#include "nsf/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

[[noreturn]] void bad_value(const std::string& path, const std::string& value, const std::string& expected) {
  throw ConfigError("invalid value for '" + path + "': '" + value + "' (expected " + expected + ")");
}

template <class T>
T parse_number(const std::string& path, const std::string& raw, const char* expected) {
  const std::string v = trim(raw);
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value(path, raw, expected);
  return out;
}

bool parse_bool(const std::string& path, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(path, raw, "true or false");
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(v[k]);
    else
      out += std::to_string(v[k]);
  }
  return out;
}

// One schema entry: dotted key path with a formatter and a parser.
struct Key {
  std::string section, name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string& path, const std::string& value)> set;
};

template <class Acc>
Key real(const char* sec, const char* name, Acc acc) {
  return {sec, name, [acc](const RunConfig& c) { return format_double(acc(const_cast<RunConfig&>(c))); },
          [acc](RunConfig& c, const std::string& p, const std::string& v) {
            acc(c) = parse_number<double>(p, v, "a number");
          }};
}

template <class Acc>
Key integer(const char* sec, const char* name, Acc acc) {
  using T = std::remove_reference_t<decltype(acc(std::declval<RunConfig&>()))>;
  return {sec, name, [acc](const RunConfig& c) { return std::to_string(acc(const_cast<RunConfig&>(c))); },
          [acc](RunConfig& c, const std::string& p, const std::string& v) {
            acc(c) = parse_number<T>(p, v, "an integer");
          }};
}

template <class Acc>
Key text(const char* sec, const char* name, Acc acc) {
  return {sec, name, [acc](const RunConfig& c) { return acc(const_cast<RunConfig&>(c)); },
          [acc](RunConfig& c, const std::string&, const std::string& v) { acc(c) = trim(v); }};
}

template <class Acc>
Key boolean(const char* sec, const char* name, Acc acc) {
  return {sec, name, [acc](const RunConfig& c) { return std::string(acc(const_cast<RunConfig&>(c)) ? "true" : "false"); },
          [acc](RunConfig& c, const std::string& p, const std::string& v) { acc(c) = parse_bool(p, v); }};
}

template <class T, class Acc>
Key list(const char* sec, const char* name, Acc acc) {
  return {sec, name, [acc](const RunConfig& c) { return join(acc(const_cast<RunConfig&>(c))); },
          [acc](RunConfig& c, const std::string& p, const std::string& v) {
            std::vector<T> out;
            for (const auto& item : split_list(v))
              out.push_back(parse_number<T>(p, item, std::is_floating_point_v<T> ? "a list of numbers" : "a list of integers"));
            acc(c) = out;
          }};
}

const std::vector<Key>& schema() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    k.push_back(text("model", "kind", [](RunConfig& c) -> auto& { return c.model.kind; }));
    k.push_back(real("model", "c_v", [](RunConfig& c) -> auto& { return c.model.c_v; }));
    k.push_back(real("model", "a", [](RunConfig& c) -> auto& { return c.model.a; }));
    k.push_back(text("model", "kernel", [](RunConfig& c) -> auto& { return c.model.kernel; }));
    k.push_back(real("model", "pbar", [](RunConfig& c) -> auto& { return c.model.pbar; }));
    k.push_back(text("model", "radiation", [](RunConfig& c) -> auto& { return c.model.radiation; }));

    k.push_back(text("transport", "kind", [](RunConfig& c) -> auto& { return c.transport.kind; }));
    k.push_back(real("transport", "C_mu", [](RunConfig& c) -> auto& { return c.transport.C_mu; }));
    k.push_back(real("transport", "C_lambda", [](RunConfig& c) -> auto& { return c.transport.C_lambda; }));
    k.push_back(real("transport", "kappa0", [](RunConfig& c) -> auto& { return c.transport.kappa0; }));
    k.push_back(real("transport", "mu0", [](RunConfig& c) -> auto& { return c.transport.mu0; }));
    k.push_back(real("transport", "mu1", [](RunConfig& c) -> auto& { return c.transport.mu1; }));
    k.push_back(real("transport", "lambda0", [](RunConfig& c) -> auto& { return c.transport.lambda0; }));
    k.push_back(real("transport", "lambda1", [](RunConfig& c) -> auto& { return c.transport.lambda1; }));
    k.push_back(real("transport", "kappa1", [](RunConfig& c) -> auto& { return c.transport.kappa1; }));
    k.push_back(real("transport", "kappa2", [](RunConfig& c) -> auto& { return c.transport.kappa2; }));
    k.push_back(real("transport", "beta", [](RunConfig& c) -> auto& { return c.transport.beta; }));
    k.push_back(boolean("transport", "uniqueness_mode", [](RunConfig& c) -> auto& { return c.transport.uniqueness_mode; }));

    k.push_back(integer("grid", "dim", [](RunConfig& c) -> auto& { return c.grid.dim; }));
    k.push_back(integer("grid", "nx", [](RunConfig& c) -> auto& { return c.grid.nx; }));
    k.push_back(integer("grid", "ny", [](RunConfig& c) -> auto& { return c.grid.ny; }));
    k.push_back(real("grid", "x0", [](RunConfig& c) -> auto& { return c.grid.x0; }));
    k.push_back(real("grid", "x1", [](RunConfig& c) -> auto& { return c.grid.x1; }));
    k.push_back(real("grid", "y0", [](RunConfig& c) -> auto& { return c.grid.y0; }));
    k.push_back(real("grid", "y1", [](RunConfig& c) -> auto& { return c.grid.y1; }));

    k.push_back(real("boundary", "theta", [](RunConfig& c) -> auto& { return c.boundary.theta; }));
    k.push_back(real("boundary", "slope_x", [](RunConfig& c) -> auto& { return c.boundary.slope_x; }));
    k.push_back(real("boundary", "slope_y", [](RunConfig& c) -> auto& { return c.boundary.slope_y; }));

    k.push_back(real("solver", "cfl", [](RunConfig& c) -> auto& { return c.solver.cfl; }));
    k.push_back(real("solver", "t_end", [](RunConfig& c) -> auto& { return c.solver.t_end; }));
    k.push_back(real("solver", "snapshot_dt", [](RunConfig& c) -> auto& { return c.solver.snapshot_dt; }));
    k.push_back(real("solver", "floor", [](RunConfig& c) -> auto& { return c.solver.floor; }));
    k.push_back(integer("solver", "max_steps", [](RunConfig& c) -> auto& { return c.solver.max_steps; }));

    k.push_back(text("experiment", "initial", [](RunConfig& c) -> auto& { return c.experiment.initial; }));
    k.push_back(text("experiment", "profile", [](RunConfig& c) -> auto& { return c.experiment.profile; }));
    k.push_back(real("experiment", "rho0", [](RunConfig& c) -> auto& { return c.experiment.rho0; }));
    k.push_back(real("experiment", "amp_u", [](RunConfig& c) -> auto& { return c.experiment.amp_u; }));
    k.push_back(real("experiment", "amp_theta", [](RunConfig& c) -> auto& { return c.experiment.amp_theta; }));
    k.push_back(real("experiment", "perturbation", [](RunConfig& c) -> auto& { return c.experiment.perturbation; }));
    k.push_back(integer("experiment", "theorem", [](RunConfig& c) -> auto& { return c.experiment.theorem; }));
    k.push_back(list<double>("experiment", "eps", [](RunConfig& c) -> auto& { return c.experiment.eps; }));
    k.push_back(list<int>("experiment", "grids", [](RunConfig& c) -> auto& { return c.experiment.grids; }));
    k.push_back(list<double>("experiment", "r2_eps", [](RunConfig& c) -> auto& { return c.experiment.r2_eps; }));
    k.push_back(integer("experiment", "samples", [](RunConfig& c) -> auto& { return c.experiment.samples; }));

    k.push_back(integer("run", "seed", [](RunConfig& c) -> auto& { return c.seed; }));
    k.push_back(text("run", "output_dir", [](RunConfig& c) -> auto& { return c.output_dir; }));
    return k;
  }();
  return keys;
}

const Key* find_key(const std::string& section, const std::string& name) {
  for (const auto& k : schema())
    if (k.section == section && k.name == name) return &k;
  return nullptr;
}

bool known_section(const std::string& s) {
  for (const auto& k : schema())
    if (k.section == s) return true;
  return false;
}

// Boost reports the line only; the column follows from the kind of error.
int error_column(const std::string& text, unsigned long line_no, const std::string& message) {
  std::istringstream in(text);
  std::string line;
  for (unsigned long k = 0; k < line_no && std::getline(in, line); ++k) {
  }
  const auto first = line.find_first_not_of(" \t\r");
  const int lead = first == std::string::npos ? 0 : static_cast<int>(first);
  const int end = static_cast<int>(trim(line).size()) + lead;
  if (message.find("unmatched") != std::string::npos || message.find("not found") != std::string::npos) return end + 1;
  return lead + 1;
}

void validate(const RunConfig& c) {
  if (c.grid.dim != 1 && c.grid.dim != 2) throw ConfigError("'grid.dim' must be 1 or 2");
  if (c.grid.nx < 2 || (c.grid.dim == 2 && c.grid.ny < 2)) throw ConfigError("'grid.nx' and 'grid.ny' must be >= 2");
  if (!(c.grid.x1 > c.grid.x0) || !(c.grid.y1 > c.grid.y0)) throw ConfigError("'grid' box must have positive extent");
  if (!(c.solver.cfl > 0.0 && c.solver.cfl <= 1.0)) throw ConfigError("'solver.cfl' must lie in (0, 1]");
  if (!(c.solver.t_end >= 0.0)) throw ConfigError("'solver.t_end' must be >= 0");
  if (!(c.solver.snapshot_dt >= 0.0)) throw ConfigError("'solver.snapshot_dt' must be >= 0");
  if (!(c.boundary.theta > 0.0)) throw ConfigError("'boundary.theta' must be positive");
  if (c.experiment.initial != "decay" && c.experiment.initial != "strong")
    throw ConfigError("'experiment.initial' must be decay or strong");
  if (c.experiment.theorem < 1 || c.experiment.theorem > 3) throw ConfigError("'experiment.theorem' must be 1, 2 or 3");
  if (c.experiment.samples < 1) throw ConfigError("'experiment.samples' must be positive");
}

template <class T>
void put(std::ofstream& out, const T* data, size_t n) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(T)));
}

template <class T>
void get(std::ifstream& in, T* data, size_t n, const std::string& path) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw FormatError("truncated snapshot '" + path + "'");
}

constexpr char kMagic[8] = {'N', 'S', 'F', 'S', 'N', 'A', 'P', '\0'};
constexpr std::uint32_t kFloat64 = 1;

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

json level_json(const AprioriLevel& L) {
  json j;
  j["n"] = L.n;
  j["h"] = L.h;
  for (int k = 0; k < kAprioriTerms; ++k) j["terms"][kAprioriTermNames[k]] = L.terms[k];
  j["entropy_bound_ratio"] = L.entropy_bound_ratio;
  j["transport_ratio"] = L.transport_ratio;
  j["absorption_ratio"] = L.absorption_ratio;
  return j;
}

json defect_level_json(const DefectLevel& L) {
  return {{"fine_n", L.fine_n}, {"D", L.D},           {"kinetic", L.kinetic}, {"internal", L.internal},
          {"entropy", L.entropy}, {"energy", L.energy}, {"spread", L.spread},   {"rM_L1", L.rM_L1}};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << origin << ":" << e.line() << ":" << error_column(text, e.line(), e.message()) << ": " << e.message();
    throw ConfigError(os.str());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
    if (!known_section(section)) throw ConfigError("unknown section '" + section + "'");
    for (const auto& [name, value] : body) {
      const std::string path = section + "." + name;
      const Key* k = find_key(section, name);
      if (!k) throw ConfigError("unknown key '" + path + "'");
      k->set(c, path, value.data());
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string to_ini(const RunConfig& c) {
  std::string out, current;
  for (const auto& k : schema()) {
    if (k.section != current) {
      if (!current.empty()) out += "\n";
      out += "[" + k.section + "]\n";
      current = k.section;
    }
    out += k.name + " = " + k.get(c) + "\n";
  }
  return out;
}

void save_config(const std::string& path, const RunConfig& c) {
  auto out = open_out(path);
  out << to_ini(c);
}

Grid make_grid(const GridBlock& g) {
  return g.dim == 1 ? Grid::line(g.nx, g.x0, g.x1) : Grid::rect(g.nx, g.ny, g.x0, g.x1, g.y0, g.y1);
}

BoundaryData make_boundary(const BoundaryBlock& b) {
  if (b.slope_x == 0.0 && b.slope_y == 0.0) return BoundaryData::constant(b.theta);
  return BoundaryData::affine(b.theta, b.slope_x, b.slope_y);
}

SolverConfig make_solver_config(const SolverBlock& s) {
  SolverConfig c;
  c.cfl = s.cfl;
  c.t_end = s.t_end;
  c.snapshot_dt = s.snapshot_dt;
  c.floor = s.floor;
  c.max_steps = s.max_steps;
  return c;
}

std::string resolve_output_dir(const RunConfig& c, const std::string& command, const std::string& override_dir) {
  std::filesystem::path dir;
  if (!override_dir.empty()) {
    dir = override_dir;
  } else if (!c.output_dir.empty()) {
    dir = c.output_dir;
  } else {
    const char* root = std::getenv("NSFLAB_OUTPUT_ROOT");
    dir = std::filesystem::path(root && *root ? root : "nsflab-out") / command;
  }
  std::filesystem::create_directories(dir);
  return dir.string();
}

void write_csv(const std::string& path, const CsvTable& t) {
  auto out = open_out(path);
  for (size_t k = 0; k < t.header.size(); ++k) out << (k ? "," : "") << t.header[k];
  out << "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw FormatError("CSV row width does not match the header in '" + path + "'");
    for (size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << "\n";
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV '" + path + "'");
  t.header = split_list(line);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split_list(line)) {
      double v = 0;
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size())
        throw FormatError(path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.header.size())
      throw FormatError(path + ":" + std::to_string(line_no) + ": row width does not match the header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable totals_table(const Trajectory& tr) {
  CsvTable t;
  t.header = {"t", "mass", "momentum_x", "momentum_y", "energy", "entropy", "ballistic", "wall_heat"};
  const Grid& g = tr.grid();
  for (const FieldSet& f0 : tr.frames) {
    FieldSet f = f0;
    sync_ghosts(f, tr.boundary, f.t);
    const HarmonicResult hat = harmonic_extension(g, tr.boundary, f.t);
    const Totals T = totals(f, tr.models, tr.boundary, &hat.theta);
    t.rows.push_back({T.t, T.mass, T.momentum[0], g.dim == 2 ? T.momentum[1] : 0.0, T.energy, T.entropy, T.ballistic,
                      T.wall_heat});
  }
  return t;
}

void write_series(const std::string& path, const Trajectory& tr) { write_csv(path, totals_table(tr)); }

void write_snapshot(const std::string& path, const FieldSet& f, std::uint32_t version) {
  static_assert(std::endian::native == std::endian::little, "snapshots are little-endian");
  const Grid& g = f.grid();
  auto out = open_out(path, std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  const std::uint32_t head[5] = {version, static_cast<std::uint32_t>(g.dim), static_cast<std::uint32_t>(g.nx),
                                 static_cast<std::uint32_t>(g.ny), kFloat64};
  put(out, head, 5);
  const double box[5] = {g.x0, g.x1, g.y0, g.y1, f.t};
  put(out, box, 5);
  std::vector<double> buf(g.cells());
  auto dump = [&](const ScalarField& s) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) buf[i + g.nx * j] = s(i, j);
    put(out, buf.data(), buf.size());
  };
  dump(f.rho);
  for (const auto& c : f.u.c) dump(c);
  dump(f.theta);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

FieldSet read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read snapshot '" + path + "'");
  char magic[8];
  get(in, magic, 8, path);
  if (std::memcmp(magic, kMagic, 8) != 0) throw FormatError("'" + path + "' is not a snapshot (bad magic)");
  std::uint32_t head[5];
  get(in, head, 5, path);
  if (head[0] != kSnapshotVersion)
    throw FormatError("snapshot '" + path + "' has format version " + std::to_string(head[0]) +
                      "; this reader supports version " + std::to_string(kSnapshotVersion));
  if (head[4] != kFloat64) throw FormatError("snapshot '" + path + "' has unsupported dtype " + std::to_string(head[4]));
  const int dim = static_cast<int>(head[1]), nx = static_cast<int>(head[2]), ny = static_cast<int>(head[3]);
  if ((dim != 1 && dim != 2) || nx < 1 || ny < 1 || (dim == 1 && ny != 1))
    throw FormatError("snapshot '" + path + "' has invalid dimensions");
  double box[5];
  get(in, box, 5, path);
  const Grid g = dim == 1 ? Grid::line(nx, box[0], box[1]) : Grid::rect(nx, ny, box[0], box[1], box[2], box[3]);
  FieldSet f(g);
  f.t = box[4];
  std::vector<double> buf(g.cells());
  auto load = [&](ScalarField& s) {
    get(in, buf.data(), buf.size(), path);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) s.at(i, j) = buf[i + g.nx * j];
    s.t = f.t;
  };
  load(f.rho);
  for (auto& c : f.u.c) load(c);
  load(f.theta);
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in snapshot '" + path + "'");
  return f;
}

void write_json(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

json to_json(const RunConfig& c) {
  json j;
  for (const auto& k : schema()) j[k.section][k.name] = k.get(c);
  return j;
}

json to_json(const StructureReport& r) {
  return {{"pass", r.pass},
          {"first_violation", r.first_violation},
          {"witness_rho", r.witness_rho},
          {"witness_theta", r.witness_theta},
          {"samples", r.samples},
          {"stability_violations", r.stability_violations},
          {"convexity_violations", r.convexity_violations},
          {"kernel_violations", r.kernel_violations},
          {"strict_pbar_positive", r.strict_pbar_positive},
          {"strict_third_law_limit", r.strict_third_law_limit},
          {"kernel_G_over_q_max", r.kernel_G_over_q_max}};
}

json to_json(const GibbsSuiteReport& r) {
  return {{"samples", r.samples},
          {"max_r_rho", r.max_r_rho},
          {"max_r_theta", r.max_r_theta},
          {"max_abs_r_rho", r.max_abs_r_rho},
          {"max_abs_r_theta", r.max_abs_r_theta},
          {"witness_rho", r.witness_rho},
          {"witness_theta", r.witness_theta}};
}

json to_json(const TheoremReport& r) {
  json j;
  j["theorem"] = r.theorem;
  j["gate"] = {{"accepted", r.gate.accepted}, {"reason", r.gate.reason}};
  for (const auto& c : r.collapse)
    j["collapse"].push_back({{"n", c.n}, {"h", c.h}, {"E0", c.E0}, {"max_E", c.max_E}, {"order", c.order}});
  j["collapse_ok"] = r.collapse_ok;
  for (const auto& g : r.gronwall)
    j["gronwall"].push_back({{"kind", g.kind},
                             {"eps", g.eps},
                             {"n", g.n},
                             {"E0", g.E0},
                             {"E_end", g.E_end},
                             {"C", g.fit.C},
                             {"max_ratio", g.fit.max_ratio},
                             {"fit_ok", g.fit.ok},
                             {"min_slack_rel", g.min_slack_rel}});
  j["C_spread_eps"] = r.C_spread_eps;
  j["C_spread_grid"] = r.C_spread_grid;
  j["gronwall_ok"] = r.gronwall_ok;
  j["checks"] = r.checks;
  j["hypotheses_ok"] = r.hypotheses_ok;
  j["failures"] = r.failures;
  j["pass"] = r.pass;
  return j;
}

json to_json(const CompatStudy& s) {
  auto lv = [](const CompatLevel& l) {
    return json{{"n", l.n},
                {"h", l.h},
                {"continuity", l.continuity},
                {"momentum", l.momentum},
                {"velocity", l.velocity},
                {"temperature", l.temperature},
                {"temperature_as_written", l.temperature_as_written}};
  };
  json j;
  for (const auto& l : s.levels) j["levels"].push_back(lv(l));
  j["equilibrium"] = lv(s.equilibrium);
  j["orders"] = s.orders;
  j["ok"] = s.ok;
  j["failures"] = s.failures;
  return j;
}

json to_json(const InequalityStudy& s) {
  json j;
  for (const auto& l : s.levels)
    j["levels"].push_back({{"run", l.run},
                           {"n", l.n},
                           {"h", l.h},
                           {"entropy_slack", l.entropy_slack},
                           {"ballistic_slack", l.ballistic_slack}});
  j["C_entropy"] = s.C_entropy;
  j["C_ballistic"] = s.C_ballistic;
  j["ok"] = s.ok;
  j["failures"] = s.failures;
  return j;
}

json to_json(const AprioriReport& r) {
  json j;
  for (int k = 0; k < kAprioriTerms; ++k) j["C"][kAprioriTermNames[k]] = r.C[k];
  j["calibration"] = level_json(r.calibration);
  for (const auto& L : r.levels) j["levels"].push_back(level_json(L));
  j["entropy_c"] = r.entropy_c;
  j["absorption_c"] = r.absorption_c;
  j["max_principle_raw_violation"] = r.max_principle_raw_violation;
  j["max_principle_exact"] = r.max_principle_exact;
  j["envelope_ok"] = r.envelope_ok;
  j["conduction_spread"] = r.conduction_spread;
  j["recalibration_detected"] = r.recalibration_detected;
  j["recalibration_ratio"] = r.recalibration_ratio;
  j["failures"] = r.failures;
  j["pass"] = r.pass;
  return j;
}

json to_json(const DefectStudyReport& r) {
  json j;
  for (const auto& L : r.oscillatory.levels) j["oscillatory"].push_back(defect_level_json(L));
  j["smooth_D"] = r.smooth_D;
  j["smooth_order"] = r.smooth_order;
  j["kinetic_reference"] = r.kinetic_reference;
  j["kinetic_rel_error"] = r.kinetic_rel_error;
  j["sin2_mean"] = r.sin2_mean;
  j["spread"] = r.spread;
  j["entropy_rel"] = r.entropy_rel;
  j["energy_ratio"] = r.energy_ratio;
  j["D"] = r.bundle.D;
  j["xi"] = r.bundle.xi;
  j["compat"] = {{"max_ratio", r.compat.max_ratio}, {"ok", r.compat.ok}};
  j["failures"] = r.failures;
  j["pass"] = r.pass;
  return j;
}

json to_json(const RelEnergyReport& r) {
  json j;
  j["forced"] = r.forced;
  j["min_slack"] = r.min_slack;
  j["gronwall_C"] = r.gronwall_C;
  for (const auto& l : r.levels)
    j["levels"].push_back({{"t", l.t},
                           {"E", l.E},
                           {"E_ess", l.E_ess},
                           {"E_res", l.E_res},
                           {"R2", l.R2},
                           {"defect", l.defect},
                           {"lhs", l.lhs},
                           {"rhs", l.rhs},
                           {"slack", l.slack}});
  return j;
}

json to_json(const R2Smallness& r) { return {{"eps", r.eps}, {"integral", r.integral}, {"slope", r.slope}}; }

const std::vector<RegisteredExperiment>& experiment_registry() {
  static const std::vector<RegisteredExperiment> reg{
      {"simulate", "run the solver from the config and write series and snapshots"},
      {"mv-check", "measure-valued residuals of smooth runs and the entropy/ballistic inequalities"},
      {"relenergy", "relative-energy structure checks and the inequality chain on a perturbed run"},
      {"wsu", "weak-strong uniqueness experiment for one theorem"},
      {"apriori", "a priori estimate across refinement levels"},
      {"defect-study", "dissipation and momentum defects of oscillating families"},
      {"verify-thermo", "Gibbs relation, stability and convexity of the equation of state"}};
  return reg;
}

}  // namespace nsf
