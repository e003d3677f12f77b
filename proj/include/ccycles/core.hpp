// Core value types shared by every part of the library: radii of the
// concentric circles, reduced configurations on the (n-1)-torus, and the
// error hierarchy.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccycles {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Two consecutive vertices coincide; the perimeter is not differentiable there.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

class DegenerateParade : public Error {
 public:
  using Error::Error;
};

class InconsistentSocle : public Error {
 public:
  using Error::Error;
};

/// Reduces an angle into [0, 2*pi).
inline double wrap_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Signed difference a - b folded into [-pi, pi].
inline double angle_difference(double a, double b) {
  return std::remainder(a - b, kTwoPi);
}

/// sin and cos of an angle, exact at 0 and +-pi so diametrically aligned
/// circuits evaluate to machine-zero gradients.
inline std::pair<double, double> exact_sin_cos(double theta) {
  theta = std::remainder(theta, kTwoPi);
  if (theta == 0.0) return {0.0, 1.0};
  if (std::abs(theta) == kPi) return {0.0, -1.0};
  return {std::sin(theta), std::cos(theta)};
}

/// Ordered radii r_1..r_n of the circles, in the order the circuit visits them.
class Radii {
 public:
  explicit Radii(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 3)
      throw InvalidArgument("at least three radii are required, got " +
                            std::to_string(values_.size()));
    for (double r : values_) {
      if (!std::isfinite(r) || r <= 0.0)
        throw InvalidArgument("radii must be positive and finite, got " +
                              std::to_string(r));
    }
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }

  /// True when all radii are pairwise distinct (relative gap above 1e-12).
  bool generic() const {
    for (std::size_t i = 0; i < values_.size(); ++i)
      for (std::size_t j = i + 1; j < values_.size(); ++j) {
        const double scale = std::max(values_[i], values_[j]);
        if (std::abs(values_[i] - values_[j]) <= 1e-12 * scale) return false;
      }
    return true;
  }

  /// Copy with radius `index` replaced.
  Radii with(std::size_t index, double value) const {
    if (index >= values_.size()) throw InvalidArgument("radius index out of range");
    auto copy = values_;
    copy[index] = value;
    return Radii(std::move(copy));
  }

  friend bool operator==(const Radii&, const Radii&) = default;

 private:
  std::vector<double> values_;
};

/// Polar angles alpha_1..alpha_{n-1} of the free vertices; alpha_n is pinned at 0.
class ReducedConfiguration {
 public:
  ReducedConfiguration() = default;
  explicit ReducedConfiguration(std::vector<double> angles) : angles_(std::move(angles)) {
    for (double& a : angles_) {
      if (!std::isfinite(a)) throw InvalidArgument("configuration angle is not finite");
      a = wrap_angle(a);
    }
  }

  std::size_t size() const { return angles_.size(); }
  double operator[](std::size_t i) const { return angles_[i]; }
  const std::vector<double>& angles() const { return angles_; }

  /// All n polar angles, with the pinned outer vertex appended as 0.
  std::vector<double> full() const {
    auto out = angles_;
    out.push_back(0.0);
    return out;
  }

  /// Image under the reflection alpha -> -alpha.
  ReducedConfiguration mirrored() const {
    std::vector<double> out(angles_.size());
    for (std::size_t i = 0; i < angles_.size(); ++i) out[i] = -angles_[i];
    return ReducedConfiguration(std::move(out));
  }

  friend bool operator==(const ReducedConfiguration&, const ReducedConfiguration&) = default;

 private:
  std::vector<double> angles_;
};

/// Builds a reduced configuration from all n angles by rotating the last one to 0.
inline ReducedConfiguration reduce_full_angles(std::span<const double> full) {
  if (full.size() < 3) throw InvalidArgument("need at least three angles");
  std::vector<double> out(full.size() - 1);
  for (std::size_t i = 0; i + 1 < full.size(); ++i) out[i] = full[i] - full.back();
  return ReducedConfiguration(std::move(out));
}

/// Max-norm distance on the torus.
inline double torus_distance(const ReducedConfiguration& a, const ReducedConfiguration& b) {
  if (a.size() != b.size()) throw DimensionMismatch("configurations differ in dimension");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(angle_difference(a[i], b[i])));
  return d;
}

inline void require_matching(const Radii& radii, const ReducedConfiguration& config) {
  if (config.size() + 1 != radii.size())
    throw DimensionMismatch("configuration has " + std::to_string(config.size()) +
                            " angles but " + std::to_string(radii.size()) +
                            " radii need " + std::to_string(radii.size() - 1));
}

}  // namespace ccycles
