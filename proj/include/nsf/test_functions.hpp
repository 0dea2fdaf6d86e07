#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/linalg.hpp"

namespace nsf {

struct ScalarTest {
  std::string name;
  std::function<double(double t, double x, double y)> f, f_t;
  std::function<Vec(double t, double x, double y)> grad;
};

struct VectorTest {
  std::string name;
  std::function<Vec(double t, double x, double y)> v, v_t;
  std::function<Mat(double t, double x, double y)> grad;  // grad(a, b) = d v_a / d x_b
};

struct TensorTest {
  std::string name;
  std::function<Mat(double t, double x, double y)> T;  // symmetric
  std::function<Vec(double t, double x, double y)> div;  // (div T)_a = sum_b d T_ab / d x_b
};

/// Finite generator families: polynomial in t times trigonometric profiles with exact traces.
struct TestFunctionSet {
  std::vector<ScalarTest> scalars;   // unrestricted C^1 (continuity)
  std::vector<ScalarTest> bumps;     // >= 0, compactly supported in the interior (entropy)
  std::vector<VectorTest> fields;    // unrestricted C^1 vector fields (temperature compatibility)
  std::vector<VectorTest> dirichlet; // vanish on the boundary (momentum, Korn-Poincare)
  std::vector<TensorTest> tensors;   // symmetric (velocity compatibility)
};

/// `count` generators per family (at least 1).
TestFunctionSet make_test_functions(const Grid& g, int count);

/// Zero-trace vector field sin(k pi x) [sin(l pi y)] in every component, for Korn-Poincare sweeps.
VectorTest sine_mode(const Grid& g, int k, int l = 1, double amplitude = 1.0);

/// max(sup |v|, sup |grad v|) sampled at cell centers of g at time t.
double c1_norm(const VectorTest& v, const Grid& g, double t);

}  // namespace nsf
