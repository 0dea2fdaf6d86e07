#pragma once

#include <Eigen/Dense>

namespace nsf {

// Small dense types with a compile-time cap of 3 so nothing hits the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

inline Vec zero_vec(int d) { return Vec::Zero(d); }
inline Mat zero_mat(int d) { return Mat::Zero(d, d); }

/// Frobenius contraction A:B.
inline double ddot(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

}  // namespace nsf
