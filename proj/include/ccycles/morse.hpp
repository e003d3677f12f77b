#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ccycles/core.hpp"

namespace ccycles {

struct MorseInfo {
  int index = 0;
  bool degenerate = false;
  double min_abs_eigenvalue = 0.0;
  std::vector<double> eigenvalues;  // ascending
};

/// Inertia of a symmetric matrix. The critical point is flagged degenerate
/// when the smallest |eigenvalue| is below threshold * scale.
inline MorseInfo morse_index(const Eigen::MatrixXd& hessian, double threshold, double scale = 1.0) {
  if (hessian.rows() != hessian.cols()) throw DimensionMismatch("Hessian must be square");
  MorseInfo info;
  if (hessian.rows() == 0) return info;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  info.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    info.eigenvalues.push_back(ev[i]);
    if (ev[i] < 0.0) ++info.index;
    info.min_abs_eigenvalue = std::min(info.min_abs_eigenvalue, std::abs(ev[i]));
  }
  info.degenerate = info.min_abs_eigenvalue < threshold * scale;
  return info;
}

/// Leading principal minors D_1..D_m.
inline std::vector<double> leading_minors(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  for (Eigen::Index k = 1; k <= m.rows(); ++k) out.push_back(m.topLeftCorner(k, k).determinant());
  return out;
}

/// Morse index by Sylvester's rule: the number of sign changes in
/// 1, D_1, ..., D_m. Only meaningful when every minor is nonzero.
inline int sylvester_index(const Eigen::MatrixXd& m) {
  int changes = 0;
  double prev = 1.0;
  for (double d : leading_minors(m)) {
    if ((d < 0.0) != (prev < 0.0)) ++changes;
    prev = d;
  }
  return changes;
}

}  // namespace ccycles
