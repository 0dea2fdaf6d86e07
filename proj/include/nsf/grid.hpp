#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "nsf/linalg.hpp"

namespace nsf {

/// Uniform cell-centered grid on an interval (dim 1) or rectangle (dim 2) with one ghost layer.
struct Grid {
  int dim = 1;
  int nx = 4, ny = 1;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double hx = 0.25, hy = 1;

  static Grid line(int nx, double x0 = 0.0, double x1 = 1.0);
  static Grid rect(int nx, int ny, double x0 = 0.0, double x1 = 1.0, double y0 = 0.0, double y1 = 1.0);

  int cells() const { return nx * ny; }
  double h(int axis) const { return axis == 0 ? hx : hy; }
  int n(int axis) const { return axis == 0 ? nx : ny; }
  double min_h() const { return dim == 1 ? hx : std::min(hx, hy); }
  double volume() const { return dim == 1 ? hx : hx * hy; }
  double xc(int i) const { return x0 + (i + 0.5) * hx; }
  double yc(int j) const { return dim == 1 ? 0.0 : y0 + (j + 0.5) * hy; }
  bool same_as(const Grid& o) const;

  // Padded storage index; i in [-1, nx], j in [-1, ny] (j = 0 only in 1D).
  int stride() const { return nx + 2; }
  int padded_size() const { return (nx + 2) * (dim == 2 ? ny + 2 : 1); }
  int idx(int i, int j) const { return (i + 1) + stride() * (dim == 2 ? j + 1 : 0); }
};

/// How ghost cells of a field are filled and how boundary-adjacent gradients are formed.
enum class GhostKind {
  Dirichlet,    // ghost = 2 f_B - interior; one-sided second-order gradient at the wall
  Neumann,      // ghost = interior
  Extrapolate,  // quadratic extrapolation from the interior
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double value = 0.0);

  const Grid& grid() const { return grid_; }
  double operator()(int i, int j = 0) const { return data_[grid_.idx(i, j)]; }
  /// Mutable access invalidates the ghost layer.
  double& at(int i, int j = 0) {
    synced_ = false;
    return data_[grid_.idx(i, j)];
  }
  void set_ghost(int i, int j, double v) { data_[grid_.idx(i, j)] = v; }

  bool synced() const { return synced_; }
  GhostKind ghost_kind() const { return kind_; }
  void mark_synced(GhostKind k) {
    kind_ = k;
    synced_ = true;
  }
  void mark_stale() { synced_ = false; }

  double t = 0.0;

  double max_abs() const;
  double min_interior() const;
  double max_interior() const;
  bool all_finite() const;

  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw_mut() {
    synced_ = false;
    return data_;
  }

 private:
  Grid grid_;
  std::vector<double> data_;
  bool synced_ = false;
  GhostKind kind_ = GhostKind::Extrapolate;
};

struct VectorField {
  std::vector<ScalarField> c;
  VectorField() = default;
  VectorField(const Grid& g, int components);
  int size() const { return static_cast<int>(c.size()); }
  Vec at(int i, int j = 0) const;
  void set(int i, int j, const Vec& v);
};

/// Row-major d x d components, T(a, b).
struct TensorField {
  std::vector<ScalarField> c;
  int d = 0;
  TensorField() = default;
  TensorField(const Grid& g, int d);
  ScalarField& operator()(int a, int b) { return c[a * d + b]; }
  const ScalarField& operator()(int a, int b) const { return c[a * d + b]; }
  Mat at(int i, int j = 0) const;
  void set(int i, int j, const Mat& m);
};

using PointFn = std::function<double(double x, double y)>;

/// Samples fn at cell centers; the result has extrapolated ghosts.
ScalarField sample(const Grid& g, const PointFn& fn);

/// Fills ghosts. For Dirichlet, face_value(x, y) supplies the wall value at face centers.
void fill_ghosts(ScalarField& f, GhostKind kind, const PointFn& face_value = nullptr);

VectorField gradient(const ScalarField& f);
double partial(const ScalarField& f, int axis, int i, int j);
ScalarField divergence(const VectorField& v);
VectorField tensor_divergence(const TensorField& T);
/// T(a, b) = d u_a / d x_b.
TensorField grad_vector(const VectorField& u);

/// Midpoint rule with compensated summation.
double integrate(const ScalarField& f);
double integrate_fn(const Grid& g, const std::function<double(int i, int j)>& cell_value);

struct BoundaryPoint {
  double x = 0, y = 0;
  Vec normal;
};

/// Midpoint rule over boundary faces (1D: the two endpoints, unit measure).
double boundary_integral(const Grid& g, const std::function<double(const BoundaryPoint&)>& fn);

/// Wall temperature theta_B(t, x, y) > 0 with its time derivative; velocity is always zero at the wall.
struct BoundaryData {
  std::string name = "constant";
  std::function<double(double t, double x, double y)> theta_B;
  std::function<double(double t, double x, double y)> dtheta_B_dt;

  static BoundaryData constant(double value);
  /// theta_B = a + b x (+ c y); harmonic, so it equals its own extension.
  static BoundaryData affine(double a, double b, double c = 0.0);
  double min_on(const Grid& g, double t) const;
  double max_on(const Grid& g, double t) const;
};

/// Discrete flow variables (rho, u, theta).
struct FieldSet {
  ScalarField rho;
  VectorField u;
  ScalarField theta;
  double t = 0.0;

  FieldSet() = default;
  explicit FieldSet(const Grid& g);
  const Grid& grid() const { return rho.grid(); }
};

/// rho: zero-gradient; u: reflection through zero at faces; theta: Dirichlet theta_B(t).
void sync_ghosts(FieldSet& f, const BoundaryData& bd, double t);

struct HarmonicResult {
  ScalarField theta;
  double residual = 0;         // max |A theta - b| relative to max |theta_B|
  double raw_violation = 0;    // max-principle violation before round-off clamping
  double bmin = 0, bmax = 0;
};

/// Discrete Laplace problem with Dirichlet data theta_B(t) on the faces.
HarmonicResult harmonic_extension(const Grid& g, const BoundaryData& bd, double t);

}  // namespace nsf
