#include "nsf/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nsf {

namespace {

constexpr double kPi = std::numbers::pi;

struct Frame {
  double x0, Lx, y0, Ly;
  int dim;
  double sx(double x) const { return (x - x0) / Lx; }
  double sy(double y) const { return (y - y0) / Ly; }
};

Frame frame_of(const Grid& g) { return {g.x0, g.x1 - g.x0, g.y0, g.y1 - g.y0, g.dim}; }

// 1D factor cos(k pi s + phase) with first derivative (in s).
struct Trig {
  double k, phase;
  bool sine;
  double f(double s) const { return sine ? std::sin(k * kPi * s + phase) : std::cos(k * kPi * s + phase); }
  double df(double s) const {
    return sine ? k * kPi * std::cos(k * kPi * s + phase) : -k * kPi * std::sin(k * kPi * s + phase);
  }
};

// (s - a)^2 (b - s)^2 on [a, b], zero outside; C^1.
struct Bump1 {
  double a, b;
  double f(double s) const {
    if (s <= a || s >= b) return 0.0;
    const double l = s - a, r = b - s;
    return l * l * r * r;
  }
  double df(double s) const {
    if (s <= a || s >= b) return 0.0;
    const double l = s - a, r = b - s;
    return 2 * l * r * r - 2 * l * l * r;
  }
};

// Time factor 1 + c t.
struct Lin {
  double c;
  double f(double t) const { return 1.0 + c * t; }
  double df(double) const { return c; }
};

ScalarTest product_scalar(const std::string& name, const Frame& fr, Trig X, Trig Y, Lin T) {
  ScalarTest s;
  s.name = name;
  const bool two = fr.dim == 2;
  auto yf = [=](double y) { return two ? Y.f(fr.sy(y)) : 1.0; };
  s.f = [=](double t, double x, double y) { return T.f(t) * X.f(fr.sx(x)) * yf(y); };
  s.f_t = [=](double t, double x, double y) { return T.df(t) * X.f(fr.sx(x)) * yf(y); };
  s.grad = [=](double t, double x, double y) {
    Vec g = Vec::Zero(fr.dim);
    g[0] = T.f(t) * X.df(fr.sx(x)) / fr.Lx * yf(y);
    if (two) g[1] = T.f(t) * X.f(fr.sx(x)) * Y.df(fr.sy(y)) / fr.Ly;
    return g;
  };
  return s;
}

ScalarTest bump_scalar(const std::string& name, const Frame& fr, Bump1 X, Bump1 Y, Lin T) {
  ScalarTest s;
  s.name = name;
  const bool two = fr.dim == 2;
  const double nx = 16.0 / std::pow(X.b - X.a, 4);
  const double ny = two ? 16.0 / std::pow(Y.b - Y.a, 4) : 1.0;
  auto yf = [=](double y) { return two ? ny * Y.f(fr.sy(y)) : 1.0; };
  s.f = [=](double t, double x, double y) { return T.f(t) * nx * X.f(fr.sx(x)) * yf(y); };
  s.f_t = [=](double t, double x, double y) { return T.df(t) * nx * X.f(fr.sx(x)) * yf(y); };
  s.grad = [=](double t, double x, double y) {
    Vec g = Vec::Zero(fr.dim);
    g[0] = T.f(t) * nx * X.df(fr.sx(x)) / fr.Lx * yf(y);
    if (two) g[1] = T.f(t) * nx * X.f(fr.sx(x)) * ny * Y.df(fr.sy(y)) / fr.Ly;
    return g;
  };
  return s;
}

// Vector field with component a equal to the scalar comps[a].
VectorTest stack(const std::string& name, std::vector<ScalarTest> comps) {
  VectorTest v;
  v.name = name;
  const int d = static_cast<int>(comps.size());
  v.v = [=](double t, double x, double y) {
    Vec r(d);
    for (int a = 0; a < d; ++a) r[a] = comps[a].f(t, x, y);
    return r;
  };
  v.v_t = [=](double t, double x, double y) {
    Vec r(d);
    for (int a = 0; a < d; ++a) r[a] = comps[a].f_t(t, x, y);
    return r;
  };
  v.grad = [=](double t, double x, double y) {
    Mat G(d, d);
    for (int a = 0; a < d; ++a) G.row(a) = comps[a].grad(t, x, y).transpose();
    return G;
  };
  return v;
}

// Symmetric tensor whose (a, b) entry is comps[a][b] (upper triangle read).
TensorTest tensor_from(const std::string& name, int d, std::vector<ScalarTest> upper) {
  TensorTest T;
  T.name = name;
  auto entry = [d](int a, int b) {
    if (a > b) std::swap(a, b);
    // Upper-triangle index in row-major order.
    int k = 0;
    for (int r = 0; r < a; ++r) k += d - r;
    return k + (b - a);
  };
  T.T = [=](double t, double x, double y) {
    Mat M(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) M(a, b) = upper[entry(a, b)].f(t, x, y);
    return M;
  };
  T.div = [=](double t, double x, double y) {
    Vec r = Vec::Zero(d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) r[a] += upper[entry(a, b)].grad(t, x, y)[b];
    return r;
  };
  return T;
}

}  // namespace

TestFunctionSet make_test_functions(const Grid& g, int count) {
  count = std::max(count, 1);
  const Frame fr = frame_of(g);
  const int d = g.dim;
  TestFunctionSet S;
  for (int n = 0; n < count; ++n) {
    const double k = n, l = (n + 1) % 3;
    const Lin T{0.5 - 0.25 * n};
    const std::string tag = std::to_string(n);
    S.scalars.push_back(product_scalar("cos" + tag, fr, {k, 0.0, false}, {l, 0.0, false}, T));

    const double lo = 0.1 + 0.05 * (n % 4), hi = 0.9 - 0.07 * (n % 3);
    S.bumps.push_back(bump_scalar("bump" + tag, fr, {lo, hi}, {lo, hi}, Lin{0.5 + 0.25 * n}));

    std::vector<ScalarTest> fc, dc;
    for (int a = 0; a < d; ++a) {
      const double ph = 0.3 + 0.4 * a + 0.2 * n;
      fc.push_back(product_scalar("f", fr, {k + 1.0, ph, false}, {l + 1.0, ph, true}, T));
      dc.push_back(product_scalar("s", fr, {k + 1.0 + a, 0.0, true}, {l + 1.0, 0.0, true}, T));
    }
    S.fields.push_back(stack("field" + tag, fc));
    S.dirichlet.push_back(stack("dir" + tag, dc));

    std::vector<ScalarTest> tc;
    const int entries = d * (d + 1) / 2;
    for (int e = 0; e < entries; ++e) {
      const double ph = 0.15 * (e + 1) + 0.1 * n;
      tc.push_back(product_scalar("t", fr, {k + 1.0 + e, ph, e % 2 == 0}, {l + 1.0, ph, e % 2 == 1}, T));
    }
    S.tensors.push_back(tensor_from("tensor" + tag, d, tc));
  }
  return S;
}

VectorTest sine_mode(const Grid& g, int k, int l, double amplitude) {
  const Frame fr = frame_of(g);
  std::vector<ScalarTest> comps;
  for (int a = 0; a < g.dim; ++a) {
    ScalarTest s = product_scalar("m", fr, {double(k), 0.0, true}, {double(l), 0.0, true}, Lin{0.0});
    auto f = s.f;
    auto gr = s.grad;
    s.f = [=](double t, double x, double y) { return amplitude * f(t, x, y); };
    s.f_t = [](double, double, double) { return 0.0; };
    s.grad = [=](double t, double x, double y) { return Vec(amplitude * gr(t, x, y)); };
    comps.push_back(s);
  }
  return stack("sine" + std::to_string(k) + "_" + std::to_string(l), comps);
}

double c1_norm(const VectorTest& v, const Grid& g, double t) {
  double m = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.xc(i), y = g.yc(j);
      m = std::max(m, v.v(t, x, y).cwiseAbs().maxCoeff());
      m = std::max(m, v.grad(t, x, y).cwiseAbs().maxCoeff());
    }
  return m;
}

}  // namespace nsf
