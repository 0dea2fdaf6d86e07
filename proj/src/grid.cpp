#include "nsf/grid.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

Grid Grid::line(int nx, double x0, double x1) {
  if (nx < 4) throw DomainError("grid needs at least 4 cells per axis");
  if (!(x1 > x0)) throw DomainError("grid extent must be positive");
  Grid g;
  g.dim = 1;
  g.nx = nx;
  g.ny = 1;
  g.x0 = x0;
  g.x1 = x1;
  g.y0 = 0;
  g.y1 = 1;
  g.hx = (x1 - x0) / nx;
  g.hy = 1.0;
  return g;
}

Grid Grid::rect(int nx, int ny, double x0, double x1, double y0, double y1) {
  if (nx < 4 || ny < 4) throw DomainError("grid needs at least 4 cells per axis");
  if (!(x1 > x0) || !(y1 > y0)) throw DomainError("grid extent must be positive");
  Grid g;
  g.dim = 2;
  g.nx = nx;
  g.ny = ny;
  g.x0 = x0;
  g.x1 = x1;
  g.y0 = y0;
  g.y1 = y1;
  g.hx = (x1 - x0) / nx;
  g.hy = (y1 - y0) / ny;
  return g;
}

bool Grid::same_as(const Grid& o) const {
  return dim == o.dim && nx == o.nx && ny == o.ny && x0 == o.x0 && x1 == o.x1 && y0 == o.y0 && y1 == o.y1;
}

ScalarField::ScalarField(const Grid& g, double value) : grid_(g), data_(g.padded_size(), value) {}

double ScalarField::max_abs() const {
  double m = 0;
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

double ScalarField::min_interior() const {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) m = std::min(m, (*this)(i, j));
  return m;
}

double ScalarField::max_interior() const {
  double m = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) m = std::max(m, (*this)(i, j));
  return m;
}

bool ScalarField::all_finite() const {
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i)
      if (!std::isfinite((*this)(i, j))) return false;
  return true;
}

VectorField::VectorField(const Grid& g, int components) : c(components, ScalarField(g)) {}

Vec VectorField::at(int i, int j) const {
  Vec v(size());
  for (int k = 0; k < size(); ++k) v[k] = c[k](i, j);
  return v;
}

void VectorField::set(int i, int j, const Vec& v) {
  for (int k = 0; k < size(); ++k) c[k].at(i, j) = v[k];
}

TensorField::TensorField(const Grid& g, int d_) : c(d_ * d_, ScalarField(g)), d(d_) {}

Mat TensorField::at(int i, int j) const {
  Mat m(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) m(a, b) = (*this)(a, b)(i, j);
  return m;
}

void TensorField::set(int i, int j, const Mat& m) {
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) (*this)(a, b).at(i, j) = m(a, b);
}

ScalarField sample(const Grid& g, const PointFn& fn) {
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f.at(i, j) = fn(g.xc(i), g.yc(j));
  fill_ghosts(f, GhostKind::Extrapolate);
  return f;
}

namespace {

double ghost_value(GhostKind kind, double f0, double f1, double f2, double fb) {
  switch (kind) {
    case GhostKind::Dirichlet: return 2.0 * fb - f0;
    case GhostKind::Neumann: return f0;
    case GhostKind::Extrapolate: return 3.0 * f0 - 3.0 * f1 + f2;
  }
  return f0;
}

}  // namespace

void fill_ghosts(ScalarField& f, GhostKind kind, const PointFn& face_value) {
  const Grid& g = f.grid();
  if (kind == GhostKind::Dirichlet && !face_value) throw DomainError("Dirichlet ghost fill needs face values");
  auto fb = [&](double x, double y) { return kind == GhostKind::Dirichlet ? face_value(x, y) : 0.0; };
  const int nx = g.nx, ny = g.ny;
  for (int j = 0; j < ny; ++j) {
    const double y = g.yc(j);
    f.set_ghost(-1, j, ghost_value(kind, f(0, j), f(1, j), f(2, j), fb(g.x0, y)));
    f.set_ghost(nx, j, ghost_value(kind, f(nx - 1, j), f(nx - 2, j), f(nx - 3, j), fb(g.x1, y)));
  }
  if (g.dim == 2) {
    for (int i = 0; i < nx; ++i) {
      const double x = g.xc(i);
      f.set_ghost(i, -1, ghost_value(kind, f(i, 0), f(i, 1), f(i, 2), fb(x, g.y0)));
      f.set_ghost(i, ny, ghost_value(kind, f(i, ny - 1), f(i, ny - 2), f(i, ny - 3), fb(x, g.y1)));
    }
    // Corners are never read by the 5-point stencils; keep them finite.
    f.set_ghost(-1, -1, f(0, 0));
    f.set_ghost(nx, -1, f(nx - 1, 0));
    f.set_ghost(-1, ny, f(0, ny - 1));
    f.set_ghost(nx, ny, f(nx - 1, ny - 1));
  }
  f.mark_synced(kind);
}

double partial(const ScalarField& f, int axis, int i, int j) {
  const Grid& g = f.grid();
  if (axis >= g.dim) return 0.0;
  const double h = g.h(axis);
  const int n = g.n(axis);
  const int k = axis == 0 ? i : j;
  auto v = [&](int off) { return axis == 0 ? f(i + off, j) : f(i, j + off); };
  if (f.ghost_kind() == GhostKind::Dirichlet) {
    if (k == 0) {
      const double fb = 0.5 * (v(-1) + v(0));
      return (-4.0 / 3.0 * fb + v(0) + v(1) / 3.0) / h;
    }
    if (k == n - 1) {
      const double fb = 0.5 * (v(1) + v(0));
      return (4.0 / 3.0 * fb - v(0) - v(-1) / 3.0) / h;
    }
  }
  return (v(1) - v(-1)) / (2.0 * h);
}

namespace {

void require_synced(const ScalarField& f, const char* op) {
  if (!f.synced()) throw StaleGhostError(std::string(op) + ": ghost layer is stale; call sync/fill_ghosts first");
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  require_synced(f, "gradient");
  const Grid& g = f.grid();
  VectorField out(g, g.dim);
  for (int a = 0; a < g.dim; ++a) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out.c[a].at(i, j) = partial(f, a, i, j);
    fill_ghosts(out.c[a], GhostKind::Extrapolate);
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.c.at(0).grid();
  if (v.size() != g.dim) throw DomainError("divergence: component count differs from grid dimension");
  for (const auto& c : v.c) require_synced(c, "divergence");
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double s = 0;
      for (int a = 0; a < g.dim; ++a) s += partial(v.c[a], a, i, j);
      out.at(i, j) = s;
    }
  fill_ghosts(out, GhostKind::Extrapolate);
  return out;
}

VectorField tensor_divergence(const TensorField& T) {
  const Grid& g = T.c.at(0).grid();
  if (T.d != g.dim) throw DomainError("tensor_divergence: tensor size differs from grid dimension");
  for (const auto& c : T.c) require_synced(c, "tensor_divergence");
  VectorField out(g, g.dim);
  for (int a = 0; a < g.dim; ++a) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double s = 0;
        for (int b = 0; b < g.dim; ++b) s += partial(T(a, b), b, i, j);
        out.c[a].at(i, j) = s;
      }
    fill_ghosts(out.c[a], GhostKind::Extrapolate);
  }
  return out;
}

TensorField grad_vector(const VectorField& u) {
  const Grid& g = u.c.at(0).grid();
  if (u.size() != g.dim) throw DomainError("grad_vector: component count differs from grid dimension");
  TensorField out(g, g.dim);
  for (int a = 0; a < g.dim; ++a) {
    require_synced(u.c[a], "grad_vector");
    for (int b = 0; b < g.dim; ++b) {
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(a, b).at(i, j) = partial(u.c[a], b, i, j);
      fill_ghosts(out(a, b), GhostKind::Extrapolate);
    }
  }
  return out;
}

namespace {

struct Neumaier {
  double sum = 0, comp = 0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

double integrate_fn(const Grid& g, const std::function<double(int, int)>& cell_value) {
  Neumaier acc;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) acc.add(cell_value(i, j));
  return acc.value() * g.volume();
}

double integrate(const ScalarField& f) {
  return integrate_fn(f.grid(), [&](int i, int j) { return f(i, j); });
}

double boundary_integral(const Grid& g, const std::function<double(const BoundaryPoint&)>& fn) {
  Neumaier acc;
  BoundaryPoint p;
  p.normal = Vec::Zero(g.dim);
  if (g.dim == 1) {
    p.x = g.x0;
    p.normal[0] = -1;
    acc.add(fn(p));
    p.x = g.x1;
    p.normal[0] = 1;
    acc.add(fn(p));
    return acc.value();
  }
  for (int j = 0; j < g.ny; ++j) {
    p.y = g.yc(j);
    p.x = g.x0;
    p.normal << -1, 0;
    acc.add(fn(p) * g.hy);
    p.x = g.x1;
    p.normal << 1, 0;
    acc.add(fn(p) * g.hy);
  }
  for (int i = 0; i < g.nx; ++i) {
    p.x = g.xc(i);
    p.y = g.y0;
    p.normal << 0, -1;
    acc.add(fn(p) * g.hx);
    p.y = g.y1;
    p.normal << 0, 1;
    acc.add(fn(p) * g.hx);
  }
  return acc.value();
}

BoundaryData BoundaryData::constant(double value) {
  if (!(value > 0.0)) throw DomainError("boundary temperature must be positive");
  BoundaryData b;
  b.name = "constant";
  b.theta_B = [value](double, double, double) { return value; };
  b.dtheta_B_dt = [](double, double, double) { return 0.0; };
  return b;
}

BoundaryData BoundaryData::affine(double a, double bx, double cy) {
  BoundaryData b;
  b.name = "affine";
  b.theta_B = [=](double, double x, double y) { return a + bx * x + cy * y; };
  b.dtheta_B_dt = [](double, double, double) { return 0.0; };
  return b;
}

namespace {

template <class F>
void for_each_face(const Grid& g, F&& f) {
  if (g.dim == 1) {
    f(g.x0, 0.0);
    f(g.x1, 0.0);
    return;
  }
  for (int j = 0; j < g.ny; ++j) {
    f(g.x0, g.yc(j));
    f(g.x1, g.yc(j));
  }
  for (int i = 0; i < g.nx; ++i) {
    f(g.xc(i), g.y0);
    f(g.xc(i), g.y1);
  }
}

}  // namespace

double BoundaryData::min_on(const Grid& g, double t) const {
  double m = std::numeric_limits<double>::infinity();
  for_each_face(g, [&](double x, double y) { m = std::min(m, theta_B(t, x, y)); });
  return m;
}

double BoundaryData::max_on(const Grid& g, double t) const {
  double m = -std::numeric_limits<double>::infinity();
  for_each_face(g, [&](double x, double y) { m = std::max(m, theta_B(t, x, y)); });
  return m;
}

FieldSet::FieldSet(const Grid& g) : rho(g, 1.0), u(g, g.dim), theta(g, 1.0) {}

void sync_ghosts(FieldSet& f, const BoundaryData& bd, double t) {
  fill_ghosts(f.rho, GhostKind::Neumann);
  const PointFn zero = [](double, double) { return 0.0; };
  for (auto& c : f.u.c) fill_ghosts(c, GhostKind::Dirichlet, zero);
  fill_ghosts(f.theta, GhostKind::Dirichlet, [&](double x, double y) { return bd.theta_B(t, x, y); });
}

HarmonicResult harmonic_extension(const Grid& g, const BoundaryData& bd, double t) {
  const int n = g.cells();
  auto id = [&](int i, int j) { return i + g.nx * j; };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);

  HarmonicResult res;
  res.bmin = bd.min_on(g, t);
  res.bmax = bd.max_on(g, t);
  if (!(res.bmin > 0.0)) throw DomainError("harmonic extension requires theta_B > 0");

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int r = id(i, j);
      for (int a = 0; a < g.dim; ++a) {
        const double w = 1.0 / (g.h(a) * g.h(a));
        const int k = a == 0 ? i : j;
        const int nk = g.n(a);
        for (int side = -1; side <= 1; side += 2) {
          const int kk = k + side;
          if (kk < 0 || kk >= nk) {
            // ghost = 2 theta_B - interior
            double xf = g.xc(i), yf = g.yc(j);
            if (a == 0) xf = side < 0 ? g.x0 : g.x1;
            else yf = side < 0 ? g.y0 : g.y1;
            diag[r] += 2.0 * w;
            b[r] += 2.0 * w * bd.theta_B(t, xf, yf);
          } else {
            diag[r] += w;
            trip.emplace_back(r, a == 0 ? id(kk, j) : id(i, kk), -w);
          }
        }
      }
      trip.emplace_back(r, r, diag[r]);
    }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw SolverError("harmonic extension: factorization failed");
  Eigen::VectorXd x = solver.solve(b);
  if (solver.info() != Eigen::Success) throw SolverError("harmonic extension: solve failed");
  for (int pass = 0; pass < 2; ++pass) x += solver.solve(b - A * x);

  // Row-normalized residual: theta_i minus the convex combination of its neighbours and wall values.
  Eigen::VectorXd r = A * x - b;
  const double scale = std::max(std::abs(res.bmin), std::abs(res.bmax));
  for (int k = 0; k < n; ++k) res.residual = std::max(res.residual, std::abs(r[k] / diag[k]) / scale);
  if (res.residual > 1e-10) {
    std::ostringstream os;
    os << "harmonic extension did not converge: residual " << res.residual;
    throw SolverError(os.str());
  }

  res.theta = ScalarField(g);
  const double ulp_tol = 64.0 * std::numeric_limits<double>::epsilon() * scale * std::max(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double v = x[id(i, j)];
      const double viol = std::max(res.bmin - v, v - res.bmax);
      res.raw_violation = std::max(res.raw_violation, viol);
      if (viol > ulp_tol) throw SolverError("harmonic extension violates the maximum principle beyond round-off");
      v = std::clamp(v, res.bmin, res.bmax);
      res.theta.at(i, j) = v;
    }
  res.theta.t = t;
  fill_ghosts(res.theta, GhostKind::Dirichlet, [&](double xx, double yy) { return bd.theta_B(t, xx, yy); });
  return res;
}

}  // namespace nsf
