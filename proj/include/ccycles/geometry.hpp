// Perimeter of a connecting cycle and its derivatives on the reduced torus,
// plus the geometric classification of stationary circuits.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "ccycles/core.hpp"

namespace ccycles {

/// Length of one side and its first two derivatives with respect to the
/// angular gap theta between its end points.
struct SideTerms {
  double length = 0.0;
  double first = 0.0;
  double second = 0.0;
};

namespace detail {

inline constexpr double kCoincidentTolerance = 1e-14;

// l^2 = (a-b)^2 + 4ab sin^2(theta/2) avoids the cancellation of the
// law-of-cosines form when a ~ b and theta ~ 0.
inline double side_length(double a, double b, double theta) {
  const auto [s, c] = exact_sin_cos(0.5 * theta);
  (void)c;
  return std::sqrt((a - b) * (a - b) + 4.0 * a * b * s * s);
}

inline SideTerms side_terms(double a, double b, double theta, std::size_t side) {
  SideTerms t;
  t.length = side_length(a, b, theta);
  if (t.length <= kCoincidentTolerance * (a + b))
    throw SingularConfiguration("vertices " + std::to_string(side + 1) + " and " +
                                std::to_string(side + 2) + " coincide");
  const auto [s, c] = exact_sin_cos(theta);
  const double ab = a * b;
  t.first = ab * s / t.length;
  t.second = ab * c / t.length - t.first * t.first / t.length;
  return t;
}

inline std::vector<SideTerms> all_side_terms(const Radii& radii, const std::vector<double>& full) {
  const std::size_t n = radii.size();
  std::vector<SideTerms> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    out[j] = side_terms(radii[j], radii[k], full[k] - full[j], j);
  }
  return out;
}

}  // namespace detail

/// Side lengths l_j = |p_j p_{j+1}|, indices mod n.
inline std::vector<double> side_lengths(const Radii& radii, const ReducedConfiguration& config) {
  require_matching(radii, config);
  const auto full = config.full();
  const std::size_t n = radii.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    out[j] = detail::side_length(radii[j], radii[k], full[k] - full[j]);
  }
  return out;
}

inline double perimeter(const Radii& radii, const ReducedConfiguration& config) {
  double sum = 0.0;
  for (double l : side_lengths(radii, config)) sum += l;
  return sum;
}

/// Gradient over all n angles. Its components sum to zero (rotation invariance).
inline Eigen::VectorXd full_gradient(const Radii& radii, const ReducedConfiguration& config) {
  require_matching(radii, config);
  const std::size_t n = radii.size();
  const auto terms = detail::all_side_terms(radii, config.full());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto k = static_cast<Eigen::Index>((j + 1) % n);
    g[k] += terms[j].first;
    g[static_cast<Eigen::Index>(j)] -= terms[j].first;
  }
  return g;
}

/// Gradient on the reduced torus: components for alpha_1..alpha_{n-1}.
inline Eigen::VectorXd gradient(const Radii& radii, const ReducedConfiguration& config) {
  const Eigen::VectorXd g = full_gradient(radii, config);
  return g.head(g.size() - 1);
}

/// Cyclic-tridiagonal Hessian over all n angles: diagonal c_{j-1} + c_j and
/// off-diagonal -c_j, with c_j the second derivative of l_j in its gap.
inline Eigen::MatrixXd full_hessian(const Radii& radii, const ReducedConfiguration& config) {
  require_matching(radii, config);
  const std::size_t n = radii.size();
  const auto terms = detail::all_side_terms(radii, config.full());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto a = static_cast<Eigen::Index>(j);
    const auto b = static_cast<Eigen::Index>((j + 1) % n);
    const double c = terms[j].second;
    h(a, a) += c;
    h(b, b) += c;
    h(a, b) -= c;
    h(b, a) -= c;
  }
  return h;
}

inline Eigen::MatrixXd hessian(const Radii& radii, const ReducedConfiguration& config) {
  const Eigen::MatrixXd h = full_hessian(radii, config);
  const Eigen::Index m = h.rows() - 1;
  return h.topLeftCorner(m, m);
}

/// Vertices p_j = r_j (cos alpha_j, sin alpha_j) and their side lengths.
struct Circuit {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<double> side_lengths;

  std::size_t size() const { return vertices.size(); }
};

inline Circuit make_circuit(const Radii& radii, const ReducedConfiguration& config) {
  require_matching(radii, config);
  Circuit c;
  const auto full = config.full();
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const auto [s, co] = exact_sin_cos(full[j]);
    c.vertices.emplace_back(radii[j] * co, radii[j] * s);
  }
  c.side_lengths = side_lengths(radii, config);
  return c;
}

enum class VertexKind { Reflection, Refraction, NonStationary };

inline std::string_view to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::Reflection: return "reflection";
    case VertexKind::Refraction: return "refraction";
    case VertexKind::NonStationary: return "non-stationary";
  }
  return "unknown";
}

struct VertexEvent {
  VertexKind kind = VertexKind::NonStationary;
  double residual = 0.0;

  friend bool operator==(const VertexEvent&, const VertexEvent&) = default;
};

namespace detail {

inline double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace detail

/// Sine of the turning angle at each vertex, positive for a left turn.
/// Zero when the two adjacent sides are collinear.
inline std::vector<double> vertex_turns(const Circuit& circuit) {
  const std::size_t n = circuit.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& prev = circuit.vertices[(j + n - 1) % n];
    const auto& cur = circuit.vertices[j];
    const auto& next = circuit.vertices[(j + 1) % n];
    const double l_in = circuit.side_lengths[(j + n - 1) % n];
    const double l_out = circuit.side_lengths[j];
    out[j] = detail::cross(cur - prev, next - cur) / (l_in * l_out);
  }
  return out;
}

/// Tags every vertex as a reflection (radius bisects the angle between the
/// sides), a refraction (sides collinear) or non-stationary.
///
/// The balance residual at vertex j is |t.(u+v)| with u, v the unit vectors
/// towards the neighbours and t the unit tangent of circle j; the gradient
/// component equals -r_j t.(u+v).
inline std::vector<VertexEvent> classify_vertices(const Radii& radii,
                                                  const ReducedConfiguration& config,
                                                  double tol) {
  const Circuit c = make_circuit(radii, config);
  const std::size_t n = c.size();
  for (std::size_t j = 0; j < n; ++j)
    if (c.side_lengths[j] <= detail::kCoincidentTolerance * (radii[j] + radii[(j + 1) % n]))
      throw SingularConfiguration("vertices " + std::to_string(j + 1) + " and " +
                                  std::to_string((j + 1) % n + 1) + " coincide");
  std::vector<VertexEvent> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& cur = c.vertices[j];
    const Eigen::Vector2d u = (c.vertices[(j + n - 1) % n] - cur) / c.side_lengths[(j + n - 1) % n];
    const Eigen::Vector2d v = (c.vertices[(j + 1) % n] - cur) / c.side_lengths[j];
    const Eigen::Vector2d tangent(-cur.y() / radii[j], cur.x() / radii[j]);
    const double balance = std::abs(tangent.dot(u + v));
    const double collinear = std::abs(detail::cross(u, v));
    if (balance < tol && collinear < tol) {
      out[j] = {VertexKind::Refraction, std::max(balance, collinear)};
    } else if (balance < tol) {
      out[j] = {VertexKind::Reflection, balance};
    } else {
      out[j] = {VertexKind::NonStationary, balance};
    }
  }
  return out;
}

/// Distance from the common centre to the line through each side.
inline std::vector<double> tangential_distances(const Radii& radii, const ReducedConfiguration& config) {
  const Circuit c = make_circuit(radii, config);
  const std::size_t n = c.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double l = c.side_lengths[j];
    if (l <= detail::kCoincidentTolerance * (radii[j] + radii[(j + 1) % n]))
      throw SingularConfiguration("side " + std::to_string(j + 1) + " has zero length");
    out[j] = std::abs(detail::cross(c.vertices[j], c.vertices[(j + 1) % n])) / l;
  }
  return out;
}

enum class Shape { Parade, Convex, Spear, PartiallyAligned, SelfIntersecting, Other };

inline std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::Parade: return "parade";
    case Shape::Convex: return "convex";
    case Shape::Spear: return "spear";
    case Shape::PartiallyAligned: return "partially-aligned";
    case Shape::SelfIntersecting: return "self-intersecting";
    case Shape::Other: return "other";
  }
  return "unknown";
}

inline Shape shape_from_string(std::string_view s) {
  for (Shape shape : {Shape::Parade, Shape::Convex, Shape::Spear, Shape::PartiallyAligned,
                      Shape::SelfIntersecting, Shape::Other})
    if (to_string(shape) == s) return shape;
  throw InvalidArgument("unknown shape '" + std::string(s) + "'");
}

namespace detail {

// Proper crossing of segments ab and cd (touching within tol does not count).
inline bool segments_cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                           const Eigen::Vector2d& c, const Eigen::Vector2d& d, double tol) {
  const double scale = std::max({a.norm(), b.norm(), c.norm(), d.norm(), 1.0});
  const double eps = tol * scale * scale;
  const double o1 = cross(b - a, c - a);
  const double o2 = cross(b - a, d - a);
  const double o3 = cross(d - c, a - c);
  const double o4 = cross(d - c, b - c);
  return ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) &&
         ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps));
}

}  // namespace detail

inline Shape shape_of(const Circuit& circuit, double tol) {
  const std::size_t n = circuit.size();
  const auto& anchor = circuit.vertices.back();
  bool on_diameter = true;
  for (const auto& p : circuit.vertices)
    if (std::abs(detail::cross(p, anchor)) > tol * p.norm() * anchor.norm()) on_diameter = false;
  if (on_diameter) return Shape::Parade;

  const auto turns = vertex_turns(circuit);
  std::size_t collinear = 0;
  for (double t : turns)
    if (std::abs(t) < tol) ++collinear;
  if (collinear == n) return Shape::Other;
  if (collinear > 0) return Shape::PartiallyAligned;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 2; k < n; ++k) {
      if (i == 0 && k == n - 1) continue;
      if (detail::segments_cross(circuit.vertices[i], circuit.vertices[i + 1], circuit.vertices[k],
                                 circuit.vertices[(k + 1) % n], tol))
        return Shape::SelfIntersecting;
    }

  const bool all_left = std::all_of(turns.begin(), turns.end(), [](double t) { return t > 0; });
  const bool all_right = std::all_of(turns.begin(), turns.end(), [](double t) { return t < 0; });
  return (all_left || all_right) ? Shape::Convex : Shape::Spear;
}

}  // namespace ccycles
