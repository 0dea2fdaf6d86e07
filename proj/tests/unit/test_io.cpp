#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "nsf/errors.hpp"
#include "nsf/io.hpp"

using namespace nsf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nsflab-unit";
  fs::create_directories(dir);
  return dir / name;
}

FieldSet wavy(const Grid& g) {
  FieldSet f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      f.rho.at(i, j) = 1.0 + 0.1 * std::sin(1.0 + i + 3.0 * j);
      f.theta.at(i, j) = 1.0 / 3.0 + i * 1e-17;
      for (std::size_t a = 0; a < f.u.c.size(); ++a) f.u.c[a].at(i, j) = std::cos(0.7 * i - 0.3 * j + a);
    }
  f.t = 0.1 + 0.2;
  return f;
}

bool same_interior(const ScalarField& a, const ScalarField& b) {
  const Grid& g = a.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = a(i, j), y = b(i, j);
      if (std::memcmp(&x, &y, sizeof x) != 0) return false;
    }
  return true;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config("[model]\nkind = perfect_gas\nc_v = 2.5\n");
  CHECK(c.model.c_v == 2.5);
  RunConfig d;
  d.model.c_v = 2.5;
  CHECK(c == d);
  const std::string echo = to_ini(c);
  CHECK(echo.find("[transport]") != std::string::npos);
  CHECK(echo.find("cfl") != std::string::npos);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.model.kind = "molecular_radiation";
  c.model.kernel = "log_tail";
  c.model.a = 0.1;
  c.transport.kind = "power_kappa";
  c.transport.beta = 1.5;
  c.grid.dim = 2;
  c.grid.nx = 24;
  c.boundary.slope_x = 0.1 + 0.2;
  c.solver.t_end = 1.0 / 3.0;
  c.experiment.eps = {1e-2, 3e-3, 1e-4};
  c.experiment.grids = {16, 32};
  c.seed = 123456789012345ull;
  c.output_dir = "runs/a b";
  CHECK(parse_config(to_ini(c)) == c);
  const fs::path p = scratch("roundtrip.ini");
  save_config(p.string(), c);
  CHECK(load_config(p.string()) == c);
}

TEST_CASE("config errors name the problem") {
  CHECK(error_of("[transport]\nviscocity = 1\n").find("transport.viscocity") != std::string::npos);
  CHECK(error_of("[nonsense]\nx = 1\n").find("nonsense") != std::string::npos);
  CHECK(error_of("[solver]\ncfl = fast\n").find("solver.cfl") != std::string::npos);
  CHECK(error_of("[grid]\nnx = -4\n").find("grid.nx") != std::string::npos);
  const std::string syntax = error_of("[model]\nc_v = 1.5\n[transport\n");
  CHECK(syntax.rfind("cfg.ini:3:", 0) == 0);
  CHECK_THROWS_AS(load_config(scratch("missing.ini").string()), ConfigError);
}

TEST_CASE("snapshots") {
  for (const Grid& g : {Grid::line(17), Grid::rect(5, 4)}) {
    const FieldSet f = wavy(g);
    const fs::path p = scratch("snap.bin");
    write_snapshot(p.string(), f);
    const FieldSet r = read_snapshot(p.string());
    CHECK(r.grid().nx == g.nx);
    CHECK(r.grid().ny == g.ny);
    CHECK(r.t == f.t);
    CHECK(same_interior(r.rho, f.rho));
    CHECK(same_interior(r.theta, f.theta));
    for (std::size_t a = 0; a < f.u.c.size(); ++a) CHECK(same_interior(r.u.c[a], f.u.c[a]));
  }
  const FieldSet f = wavy(Grid::line(8));
  const fs::path p = scratch("snap_v2.bin");
  write_snapshot(p.string(), f, kSnapshotVersion + 1);
  try {
    read_snapshot(p.string());
    FAIL("future version accepted");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
  const fs::path t = scratch("snap_trunc.bin");
  write_snapshot(t.string(), f);
  fs::resize_file(t, fs::file_size(t) - 8);
  CHECK_THROWS_AS(read_snapshot(t.string()), FormatError);
  {
    std::ofstream bad(scratch("snap_bad.bin"), std::ios::binary);
    bad << "NOTASNAPSHOT";
  }
  CHECK_THROWS_AS(read_snapshot(scratch("snap_bad.bin").string()), FormatError);
}

TEST_CASE("csv keeps full precision") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{0.1, 1.0 / 3.0}, {std::numeric_limits<double>::min(), -2.5e300}};
  const fs::path p = scratch("t.csv");
  write_csv(p.string(), t);
  const CsvTable r = read_csv(p.string());
  CHECK(r.header == t.header);
  CHECK(r.rows == t.rows);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("series and reports are deterministic") {
  RunConfig c;
  c.grid.nx = 16;
  c.solver.t_end = 0.02;
  const Grid g = make_grid(c.grid);
  const BoundaryData bd = make_boundary(c.boundary);
  auto run = [&] {
    FieldSet init = decay_initial(g, 1.0, 1.0, 0.2, 0.2);
    sync_ghosts(init, bd, 0.0);
    const Models md{make_thermo(c.model), make_transport(c.transport)};
    return totals_table(simulate(init, make_solver_config(c.solver), md, bd));
  };
  const CsvTable a = run(), b = run();
  CHECK(a.header.size() == 8);
  CHECK(a.rows == b.rows);
  CHECK(to_json(c).dump() == to_json(parse_config(to_ini(c))).dump());
}

TEST_CASE("output directory resolution") {
  RunConfig c;
  const fs::path o = scratch("out-override");
  CHECK(resolve_output_dir(c, "simulate", o.string()) == o.string());
  CHECK(fs::is_directory(o));
  c.output_dir = scratch("out-config").string();
  CHECK(resolve_output_dir(c, "simulate") == c.output_dir);
}

TEST_CASE("registry") {
  const auto& r = experiment_registry();
  CHECK(r.size() == 7);
  CHECK(r.front().name == "simulate");
}
