// Analytic constructions of stationary circuits: parades and their Hessians,
// the Fermat triangle and convex quadrilateral socle radii, Snellius circuits
// built from a socle, and partially aligned four-circle circuits.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccycles/core.hpp"
#include "ccycles/geometry.hpp"
#include "ccycles/morse.hpp"
#include "ccycles/roots.hpp"

namespace ccycles {

/// Signs of x_1..x_{n-1} for a diametrically aligned circuit; x_n = +r_n.
class ParadeSigns {
 public:
  explicit ParadeSigns(std::vector<int> signs) : signs_(std::move(signs)) {
    if (signs_.size() < 2) throw InvalidArgument("parade needs at least two free signs");
    for (int s : signs_)
      if (s != 1 && s != -1) throw InvalidArgument("parade signs must be +1 or -1");
  }

  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<int>& values() const { return signs_; }

  std::string to_string() const {
    std::string s;
    for (int v : signs_) s += v > 0 ? '+' : '-';
    return s;
  }

  friend bool operator==(const ParadeSigns&, const ParadeSigns&) = default;

 private:
  std::vector<int> signs_;
};

/// All 2^(n-1) sign patterns; pattern k has sign -1 in slot i iff bit i of k is set.
inline std::vector<ParadeSigns> all_parade_signs(std::size_t n) {
  if (n < 3 || n > 24) throw InvalidArgument("parade enumeration needs 3 <= n <= 24");
  std::vector<ParadeSigns> out;
  const std::size_t count = std::size_t{1} << (n - 1);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<int> s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) s[i] = (k >> i) & 1U ? -1 : 1;
    out.emplace_back(std::move(s));
  }
  return out;
}

inline ReducedConfiguration parade_config(const ParadeSigns& signs) {
  std::vector<double> angles(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) angles[i] = signs[i] > 0 ? 0.0 : kPi;
  return ReducedConfiguration(std::move(angles));
}

/// Signed positions x_j = +-r_j of a parade on the x-axis.
inline std::vector<double> parade_positions(const Radii& radii, const ParadeSigns& signs) {
  if (signs.size() + 1 != radii.size()) throw DimensionMismatch("parade signs do not match radii");
  std::vector<double> x(radii.size());
  for (std::size_t i = 0; i < signs.size(); ++i) x[i] = signs[i] * radii[i];
  x.back() = radii[radii.size() - 1];
  return x;
}

inline double parade_perimeter(const Radii& radii, const ParadeSigns& signs) {
  const auto x = parade_positions(radii, signs);
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += std::abs(x[j] - x[(j + 1) % x.size()]);
  return sum;
}

struct ParadeHessianReport {
  Eigen::MatrixXd matrix;
  /// b_1..b_n with b_i = x_{i-1} x_i / |x_{i-1} - x_i| (b_1 pairs x_n with x_1).
  std::vector<double> b_values;
  double determinant = 0.0;
  /// S(x) with det = C(x) S(x), C(x) = prod(b) > 0.
  double s_value = 0.0;
  /// Coefficients of 1/r_i in S(x); each is -2, 0 or 2.
  std::vector<int> epsilons;
  int morse_index = 0;
};

/// Coefficients of 1/r_i in S(x). Each side contributes |1/r_a - 1/r_b| when its
/// endpoints lie on the same side of the centre and -(1/r_a + 1/r_b) otherwise.
inline std::vector<int> parade_epsilons(const Radii& radii, const ParadeSigns& signs) {
  const auto x = parade_positions(radii, signs);
  const std::size_t n = x.size();
  std::vector<int> eps(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    if ((x[prev] > 0.0) == (x[i] > 0.0)) {
      const int sa = radii[prev] < radii[i] ? 1 : -1;
      eps[prev] += sa;
      eps[i] -= sa;
    } else {
      eps[prev] -= 1;
      eps[i] -= 1;
    }
  }
  return eps;
}

/// S(x) = sum(eps_i / r_i); finite even where adjacent parade vertices coincide.
inline double parade_s_value(const Radii& radii, const ParadeSigns& signs) {
  const auto eps = parade_epsilons(radii, signs);
  double s = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) s += eps[i] / radii[i];
  return s;
}

/// Hessian of the perimeter at a parade in closed form.
///
/// The reduced matrix is tridiagonal with diagonal b_i + b_{i+1} and
/// off-diagonal -b_{i+1}. Its determinant is a sum over spanning trees of
/// the cycle, det = prod(b) * sum(1/b), and each 1/b term is +-1/r_a +-1/r_b,
/// which yields S(x) and the epsilon coefficients. Stated for n = 4 in the
/// literature, the factorization holds for every n.
inline ParadeHessianReport parade_hessian(const Radii& radii, const ParadeSigns& signs) {
  const auto x = parade_positions(radii, signs);
  const std::size_t n = x.size();
  ParadeHessianReport rep;
  rep.b_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const double gap = std::abs(x[prev] - x[i]);
    if (gap <= 1e-12 * radii.max())
      throw DegenerateParade("parade vertices " + std::to_string(prev + 1) + " and " +
                             std::to_string(i + 1) + " coincide");
    rep.b_values[i] = x[prev] * x[i] / gap;
  }
  rep.epsilons = parade_epsilons(radii, signs);
  rep.s_value = parade_s_value(radii, signs);

  const auto m = static_cast<Eigen::Index>(n - 1);
  rep.matrix = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    // vertex k (0-based) touches sides k-1 and k; side j carries b_{j+1} (0-based b[j+1]).
    const double left = rep.b_values[static_cast<std::size_t>(k)];
    const double right = rep.b_values[static_cast<std::size_t>(k) + 1];
    rep.matrix(k, k) = left + right;
    if (k + 1 < m) {
      rep.matrix(k, k + 1) = -right;
      rep.matrix(k + 1, k) = -right;
    }
  }
  rep.determinant = rep.matrix.determinant();
  rep.morse_index = morse_index(rep.matrix, 0.0).index;
  return rep;
}

namespace detail {

inline void require_positive(std::initializer_list<double> values) {
  for (double v : values)
    if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument("radii must be positive and finite");
}

inline double triangle_cubic(double a, double b, double c, double r) {
  return 2.0 * a * b * c * r * r * r + (a * a * b * b + b * b * c * c + c * c * a * a) * r * r -
         a * a * b * b * c * c;
}

}  // namespace detail

/// Socle (inscribed circle) radius of the Fermat triangle for circles a, b, c:
/// the unique root in (0, min) of 2abc r^3 + (a^2b^2 + b^2c^2 + c^2a^2) r^2 - a^2b^2c^2.
inline double fermat_triangle_inradius(double a, double b, double c) {
  detail::require_positive({a, b, c});
  const double hi = std::min({a, b, c});
  // f(0) = -a^2b^2c^2 < 0 and f(min) > 0 for every positive triple.
  return bisect([&](double r) { return detail::triangle_cubic(a, b, c, r); }, 0.0, hi, 1e-14);
}

/// Residual of the socle closure condition sum(eps_i arccos(sigma / r_i)) - pi.
inline double socle_residual(const Radii& radii, double sigma, std::span<const int> eps) {
  if (eps.size() != radii.size()) throw DimensionMismatch("one sign per circle is required");
  if (!(sigma > 0.0) || sigma > radii.min())
    throw InvalidArgument("socle radius must lie in (0, min r_i]");
  double sum = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (eps[i] != 1 && eps[i] != -1) throw InvalidArgument("socle signs must be +1 or -1");
    sum += eps[i] * std::acos(std::min(1.0, sigma / radii[i]));
  }
  return sum - kPi;
}

/// Every socle radius in (0, min r_i] closing with the given sign pattern.
inline std::vector<double> socle_roots(const Radii& radii, std::span<const int> eps,
                                       std::size_t samples = 512) {
  const double hi = radii.min();
  auto f = [&](double s) { return socle_residual(radii, s, eps); };
  return bracketed_roots(f, hi * 1e-12, hi, samples, 1e-15);
}

/// Strictly convex Fermat quadrilateral socle radius:
/// r = 2 sqrt((Q-abc)(Q-abd)(Q-bcd)(Q-acd) / (abcd (ab+cd)(ac+bd)(ad+bc))), 2Q = abc+abd+acd+bcd.
///
/// The radicand can be positive when the root belongs to a spear sign
/// pattern; such values fail the all-plus closure and are reported as absent.
inline std::optional<double> convex_quad_inradius(double a, double b, double c, double d) {
  detail::require_positive({a, b, c, d});
  const double q = 0.5 * (a * b * c + a * b * d + a * c * d + b * c * d);
  const double num = (q - a * b * c) * (q - a * b * d) * (q - b * c * d) * (q - a * c * d);
  const double den = a * b * c * d * (a * b + c * d) * (a * c + b * d) * (a * d + b * c);
  if (!(num > 0.0)) return std::nullopt;
  const double r = 2.0 * std::sqrt(num / den);
  const Radii radii({a, b, c, d});
  if (!(r < radii.min())) return std::nullopt;
  const std::vector<int> plus(4, 1);
  if (std::abs(socle_residual(radii, r, plus)) > 1e-8) return std::nullopt;
  return r;
}

/// Builds the stationary circuit circumscribing a socle of radius sigma.
///
/// Vertex j sits at angular offset eps_j arccos(sigma/r_j) from the tangent
/// points of its two sides; consecutive vertices are separated by
/// eps_j A_j + eps_{j+1} A_{j+1}. orientation = -1 gives the mirror image.
inline ReducedConfiguration snellius_from_socle(const Radii& radii, double sigma,
                                                std::span<const int> eps, int orientation = 1) {
  if (orientation != 1 && orientation != -1) throw InvalidArgument("orientation must be +1 or -1");
  const double residual = socle_residual(radii, sigma, eps);
  if (std::abs(residual) > 1e-8)
    throw InconsistentSocle("socle does not close: residual " + std::to_string(residual));
  const std::size_t n = radii.size();
  std::vector<double> half(n);
  std::vector<double> tangent(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double ratio = std::min(1.0, sigma / radii[j]);
    half[j] = eps[j] * std::acos(ratio);
    tangent[j] = eps[j] * std::sqrt(std::max(0.0, radii[j] * radii[j] - sigma * sigma));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!(tangent[j] + tangent[(j + 1) % n] > 0.0))
      throw InconsistentSocle("sign pattern gives a side of non-positive signed length");
  std::vector<double> full(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) full[j + 1] = full[j] + orientation * (half[j] + half[j + 1]);
  return reduce_full_angles(full);
}

/// Twice the signed tangent lengths: the perimeter of a Snellius circuit.
inline double snellius_perimeter(const Radii& radii, double sigma, std::span<const int> eps) {
  double sum = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i)
    sum += eps[i] * std::sqrt(radii[i] * radii[i] - sigma * sigma);
  return 2.0 * sum;
}

struct SnelliusCircuit {
  double sigma = 0.0;
  std::vector<int> eps;
  int orientation = 1;
  ReducedConfiguration config;
};

/// All Snellius circuits reachable from socle roots of every sign pattern
/// except all-negative, in both orientations.
inline std::vector<SnelliusCircuit> snellius_circuits(const Radii& radii) {
  const std::size_t n = radii.size();
  if (n > 12) throw InvalidArgument("sign-pattern enumeration is limited to n <= 12");
  std::vector<SnelliusCircuit> out;
  const std::size_t count = std::size_t{1} << n;
  for (std::size_t k = 0; k + 1 < count; ++k) {
    std::vector<int> eps(n);
    for (std::size_t i = 0; i < n; ++i) eps[i] = (k >> i) & 1U ? -1 : 1;
    for (double sigma : socle_roots(radii, eps)) {
      for (int orientation : {1, -1}) {
        try {
          out.push_back({sigma, eps, orientation, snellius_from_socle(radii, sigma, eps, orientation)});
        } catch (const InconsistentSocle&) {
        }
      }
    }
  }
  return out;
}

/// One critical value of the three-circle catalogue.
struct CriticalValue {
  double value = 0.0;
  int multiplicity = 1;
  int index = 0;
  std::string kind;
};

/// Perimeter of the maximal Fermat triangle:
/// sum over pairs of sqrt(r_i^2 + r_j^2 + 2 t r_i r_j / r_k), t its socle radius.
inline double three_cc_max_perimeter(double a, double b, double c) {
  const double t = fermat_triangle_inradius(a, b, c);
  return std::sqrt(a * a + b * b + 2.0 * t * a * b / c) +
         std::sqrt(a * a + c * c + 2.0 * t * a * c / b) +
         std::sqrt(b * b + c * c + 2.0 * t * b * c / a);
}

/// The six critical points of three concentric circles, in increasing value.
/// Radii may be given in any order; they are sorted internally.
inline std::vector<CriticalValue> three_cc_catalogue(double a, double b, double c) {
  detail::require_positive({a, b, c});
  std::array<double, 3> r{a, b, c};
  std::sort(r.begin(), r.end());
  if (!Radii({r[0], r[1], r[2]}).generic())
    throw InvalidArgument("the three-circle catalogue requires pairwise distinct radii");
  return {
      {2.0 * (r[2] - r[0]), 1, 0, "shortest parade"},
      {2.0 * (r[0] + r[2]), 1, 1, "parade"},
      {2.0 * (r[1] + r[2]), 2, 1, "parade"},
      {three_cc_max_perimeter(r[0], r[1], r[2]), 2, 2, "fermat triangle"},
  };
}

struct PartiallyAlignedResult {
  /// Each intersection in both orientations (mirror copies), so 2 * intersections entries.
  std::vector<ReducedConfiguration> circuits;
  int intersections = 0;
  bool tangent = false;
};

/// Four-circle circuits with a refraction at circle `skip` (0-based): the
/// Fermat triangle on the other three circles, with vertex `skip` placed
/// where its circle meets the side joining its two cyclic neighbours.
inline PartiallyAlignedResult partially_aligned_circuits(const Radii& radii, std::size_t skip,
                                                         double tangent_tol = 1e-9) {
  if (radii.size() != 4) throw InvalidArgument("partially aligned circuits are built for n = 4");
  if (skip >= 4) throw InvalidArgument("skip index must be 0..3");
  const std::size_t next = (skip + 1) % 4;
  const std::size_t opp = (skip + 2) % 4;
  const std::size_t prev = (skip + 3) % 4;
  const Radii tri({radii[prev], radii[next], radii[opp]});
  const double sigma = fermat_triangle_inradius(tri[0], tri[1], tri[2]);
  const std::vector<int> plus(3, 1);
  const double r_skip = radii[skip];

  PartiallyAlignedResult result;
  for (int orientation : {1, -1}) {
    const auto tri_config = snellius_from_socle(tri, sigma, plus, orientation);
    const double a_prev = tri_config[0];
    const double a_next = tri_config[1];
    const Eigen::Vector2d p(radii[prev] * std::cos(a_prev), radii[prev] * std::sin(a_prev));
    const Eigen::Vector2d q(radii[next] * std::cos(a_next), radii[next] * std::sin(a_next));
    const Eigen::Vector2d d = q - p;
    const double dd = d.squaredNorm();
    const double foot = -p.dot(d) / dd;
    const double dist = std::abs(detail::cross(p, d)) / std::sqrt(dd);

    std::vector<double> params;
    bool tangent = false;
    if (std::abs(r_skip - dist) <= tangent_tol * r_skip) {
      tangent = true;
      if (foot > 0.0 && foot < 1.0) params.push_back(foot);
    } else if (r_skip > dist) {
      const double half_chord = std::sqrt(r_skip * r_skip - dist * dist) / std::sqrt(dd);
      for (double lambda : {foot - half_chord, foot + half_chord})
        if (lambda > 0.0 && lambda < 1.0) params.push_back(lambda);
    }

    for (double lambda : params) {
      const Eigen::Vector2d point = p + lambda * d;
      std::vector<double> full(4);
      full[prev] = a_prev;
      full[next] = a_next;
      full[opp] = 0.0;
      full[skip] = std::atan2(point.y(), point.x());
      result.circuits.push_back(reduce_full_angles(full));
    }
    if (orientation == 1) {
      result.intersections = static_cast<int>(params.size());
      result.tangent = tangent && !params.empty();
    }
  }
  return result;
}

}  // namespace ccycles
