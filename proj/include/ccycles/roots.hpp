#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ccycles/core.hpp"

namespace ccycles {

/// Bisection on [lo, hi] where f changes sign. Stops when the bracket is
/// narrower than tol or cannot be split further in double precision.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) throw InvalidArgument("bisection bracket has no sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// All sign changes of f on [lo, hi], located by a uniform scan with
/// `samples` cells followed by bisection inside each bracketing cell.
template <typename F>
std::vector<double> bracketed_roots(F&& f, double lo, double hi, std::size_t samples, double tol = 1e-14) {
  std::vector<double> roots;
  double x_prev = lo;
  double f_prev = f(lo);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    const double fx = f(x);
    if (f_prev == 0.0) {
      roots.push_back(x_prev);
    } else if (fx != 0.0 && (fx < 0.0) != (f_prev < 0.0)) {
      roots.push_back(bisect(f, x_prev, x, tol));
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) roots.push_back(x_prev);
  return roots;
}

}  // namespace ccycles
