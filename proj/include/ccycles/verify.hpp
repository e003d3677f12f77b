// Self-check suite behind `ccycles verify`: finite-difference derivative
// checks, closed-form cross-oracles, Morse identities and the brute-force
// completeness comparison for one set of radii.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ccycles/closed_forms.hpp"
#include "ccycles/core.hpp"
#include "ccycles/geometry.hpp"
#include "ccycles/morse.hpp"
#include "ccycles/solver.hpp"

namespace ccycles {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

namespace detail {

// Perimeter from Cartesian vertex distances, independent of the law-of-cosines path.
inline double cartesian_perimeter(const Radii& radii, const std::vector<double>& reduced) {
  const std::size_t n = radii.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    const double aj = j + 1 < n ? reduced[j] : 0.0;
    const double ak = k + 1 < n ? reduced[k] : 0.0;
    sum += std::hypot(radii[j] * std::cos(aj) - radii[k] * std::cos(ak),
                      radii[j] * std::sin(aj) - radii[k] * std::sin(ak));
  }
  return sum;
}

inline Eigen::VectorXd fd_gradient(const Radii& radii, const std::vector<double>& a, double h) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto p = a;
    auto m = a;
    p[i] += h;
    m[i] -= h;
    g[static_cast<Eigen::Index>(i)] = (cartesian_perimeter(radii, p) - cartesian_perimeter(radii, m)) / (2 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(const Radii& radii, const std::vector<double>& a, double h) {
  const auto m = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd out(m, m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto p = a;
    auto q = a;
    p[i] += h;
    q[i] -= h;
    const Eigen::VectorXd col = (fd_gradient(radii, p, 1e-5) - fd_gradient(radii, q, 1e-5)) / (2 * h);
    out.col(static_cast<Eigen::Index>(i)) = col;
  }
  return 0.5 * (out + out.transpose());
}

inline CheckResult check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, std::move(detail)};
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

inline VerifyReport verify_radii(const Radii& radii, const SolverSettings& settings = {}) {
  VerifyReport rep;
  const std::size_t n = radii.size();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);

  double grad_err = 0.0;
  double hess_err = 0.0;
  double sum_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(n - 1);
    for (double& v : a) v = angle(rng);
    const ReducedConfiguration cfg(a);
    const Eigen::VectorXd g = gradient(radii, cfg);
    const Eigen::VectorXd fd = detail::fd_gradient(radii, cfg.angles(), 1e-6);
    grad_err = std::max(grad_err, (g - fd).norm() / std::max(fd.norm(), 1.0));
    sum_err = std::max(sum_err, std::abs(full_gradient(radii, cfg).sum()));
    if (trial < 40) {
      const Eigen::MatrixXd h = hessian(radii, cfg);
      const Eigen::MatrixXd fh = detail::fd_hessian(radii, cfg.angles(), 1e-4);
      hess_err = std::max(hess_err, (h - fh).norm() / std::max(fh.norm(), 1.0));
    }
  }
  rep.checks.push_back(detail::check("gradient matches finite differences", grad_err < 1e-6,
                                     "max relative error " + detail::sci(grad_err)));
  rep.checks.push_back(detail::check("hessian matches finite differences", hess_err < 1e-5,
                                     "max relative error " + detail::sci(hess_err)));
  rep.checks.push_back(detail::check("full gradient sums to zero", sum_err < 1e-12 * (1.0 + radii.max()),
                                     "max |sum| " + detail::sci(sum_err)));

  double parade_err = 0.0;
  bool parades_nondegenerate = true;
  bool parades_checked = true;
  for (const auto& s : all_parade_signs(n)) {
    const auto cfg = parade_config(s);
    parade_err = std::max(parade_err, gradient(radii, cfg).norm());
    try {
      const auto ph = parade_hessian(radii, s);
      parade_err = std::max(parade_err, (ph.matrix - hessian(radii, cfg)).norm() / std::max(ph.matrix.norm(), 1.0));
      if (morse_index(ph.matrix, settings.degeneracy_threshold, radii.max()).degenerate) parades_nondegenerate = false;
      if (sylvester_index(ph.matrix) != ph.morse_index) parade_err = std::max(parade_err, 1.0);
    } catch (const DegenerateParade&) {
      parades_checked = false;
    }
  }
  rep.checks.push_back(detail::check("parade hessians match closed form", parade_err < 1e-10,
                                     "max deviation " + detail::sci(parade_err)));
  if (radii.generic())
    rep.checks.push_back(detail::check("parades are non-degenerate", parades_checked && parades_nondegenerate));

  if (n == 3) {
    const double t = fermat_triangle_inradius(radii[0], radii[1], radii[2]);
    const double res = socle_residual(radii, t, std::vector<int>{1, 1, 1});
    rep.checks.push_back(detail::check("triangle inradius closes the socle", std::abs(res) < 1e-10,
                                       "residual " + detail::sci(res)));
  }
  if (n == 4) {
    if (auto r = convex_quad_inradius(radii[0], radii[1], radii[2], radii[3])) {
      const std::vector<int> plus(4, 1);
      const double res = socle_residual(radii, *r, plus);
      const double g = gradient(radii, snellius_from_socle(radii, *r, plus)).norm();
      rep.checks.push_back(detail::check("quadrilateral inradius closes the socle", std::abs(res) < 1e-10 && g < 1e-8,
                                         "residual " + detail::sci(res) + ", gradient " + detail::sci(g)));
    }
  }
  if (n <= 8) {
    double worst = 0.0;
    for (const auto& c : snellius_circuits(radii)) worst = std::max(worst, gradient(radii, c.config).norm());
    rep.checks.push_back(detail::check("snellius circuits are stationary", worst < 1e-8,
                                       "max gradient " + detail::sci(worst)));
  }

  const auto cat = find_all(radii, settings);
  bool fermat = true;
  for (const auto& p : cat.points) {
    for (const auto& e : p.vertex_events)
      if (e.kind == VertexKind::NonStationary) fermat = false;
    if (p.shape != Shape::Parade) {
      const auto d = tangential_distances(radii, p.config);
      const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
      if (*hi - *lo > 1e-8) fermat = false;
    }
    if (p.gradient_norm > 1e-10) fermat = false;
  }
  rep.checks.push_back(detail::check("critical points satisfy the Fermat conditions", fermat,
                                     std::to_string(cat.points.size()) + " points"));
  const bool complete_generic = !cat.non_generic && cat.warnings.empty();
  if (complete_generic) {
    rep.checks.push_back(detail::check("euler sum is zero", cat.euler_sum == 0,
                                       "euler sum " + std::to_string(cat.euler_sum)));
    rep.checks.push_back(detail::check("catalogue size meets the Morse bound",
                                       cat.points.size() >= (std::size_t{1} << (n - 1)),
                                       std::to_string(cat.points.size()) + " points"));
  }
  if (n == 3 && radii.generic()) {
    const auto values = three_cc_catalogue(radii[0], radii[1], radii[2]);
    std::vector<double> expected;
    for (const auto& v : values)
      for (int k = 0; k < v.multiplicity; ++k) expected.push_back(v.value);
    bool ok = cat.points.size() == expected.size();
    for (std::size_t i = 0; ok && i < expected.size(); ++i)
      ok = std::abs(cat.points[i].perimeter - expected[i]) < 1e-8;
    rep.checks.push_back(detail::check("three-circle catalogue matches closed form", ok));
  }
  if (n == 4) {
    bool none = true;
    for (const auto& p : cat.points) none = none && p.shape != Shape::SelfIntersecting;
    rep.checks.push_back(detail::check("no self-intersecting critical points", none));
  }
  if (n <= 4) {
    const int density = n == 3 ? 360 : 72;
    const auto oracle = brute_force_oracle(radii, density, settings);
    rep.checks.push_back(detail::check("brute-force oracle agrees", catalogues_match(oracle, cat, 1e-6),
                                       "oracle " + std::to_string(oracle.points.size()) + " points, solver " +
                                           std::to_string(cat.points.size())));
  }
  return rep;
}

/// The regular pentagram on five equal circles.
inline ReducedConfiguration pentagram_config() {
  std::vector<double> full;
  for (int k = 0; k < 5; ++k) full.push_back(4.0 * kPi * k / 5.0);
  return reduce_full_angles(full);
}

inline VerifyReport verify_pentagram(double radius = 1.0) {
  VerifyReport rep;
  const Radii radii(std::vector<double>(5, radius));
  const auto cfg = pentagram_config();
  const double g = gradient(radii, cfg).norm();
  rep.checks.push_back(detail::check("pentagram is stationary", g < 1e-12, "gradient " + detail::sci(g)));
  const auto info = morse_index(hessian(radii, cfg), 1e-8, radius);
  double largest = -std::numeric_limits<double>::infinity();
  for (double ev : info.eigenvalues) largest = std::max(largest, ev);
  rep.checks.push_back(detail::check("pentagram hessian is negative definite", largest < 0.0 && !info.degenerate,
                                     "largest eigenvalue " + detail::sci(largest)));
  rep.checks.push_back(detail::check("pentagram is self-intersecting",
                                     shape_of(make_circuit(radii, cfg), 1e-8) == Shape::SelfIntersecting));
  return rep;
}

}  // namespace ccycles
