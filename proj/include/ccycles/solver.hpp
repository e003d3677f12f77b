// Critical points of the perimeter on the reduced torus: Newton refinement,
// closed-form plus grid multistart, deduplication and mirror pairing, and a
// brute-force grid oracle used to certify completeness.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ccycles/closed_forms.hpp"
#include "ccycles/core.hpp"
#include "ccycles/geometry.hpp"
#include "ccycles/morse.hpp"

namespace ccycles {

struct SolverSettings {
  int grid_density = 48;
  double newton_tol = 1e-12;
  int max_iter = 100;
  double dedupe_radius = 1e-6;
  double degeneracy_threshold = 1e-8;
  /// Upper bound on grid seeds; the per-angle density is lowered for large n.
  std::size_t max_grid_points = 120000;
  /// Classification tolerance for vertex events and shapes.
  double geometry_tol = 1e-8;
  bool closed_form_seeds = true;

  void validate() const {
    if (grid_density <= 0 || newton_tol <= 0.0 || max_iter <= 0 || dedupe_radius <= 0.0 ||
        degeneracy_threshold <= 0.0 || max_grid_points == 0 || geometry_tol <= 0.0)
      throw InvalidArgument("solver settings must all be positive");
  }

  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

struct CriticalPoint {
  ReducedConfiguration config;
  double perimeter = 0.0;
  double gradient_norm = 0.0;
  int morse_index = 0;
  bool degenerate = false;
  double hessian_determinant = 0.0;
  double min_abs_eigenvalue = 0.0;
  Shape shape = Shape::Other;
  double tangential_radius = 0.0;
  std::vector<VertexEvent> vertex_events;
  std::optional<std::size_t> mirror_partner;

  friend bool operator==(const CriticalPoint&, const CriticalPoint&) = default;
};

/// Fully classifies a configuration assumed to be (near) stationary.
inline CriticalPoint describe_point(const Radii& radii, const ReducedConfiguration& config,
                                    const SolverSettings& settings) {
  CriticalPoint p;
  p.config = config;
  p.perimeter = perimeter(radii, config);
  p.gradient_norm = gradient(radii, config).norm();
  const Eigen::MatrixXd h = hessian(radii, config);
  const MorseInfo info = morse_index(h, settings.degeneracy_threshold, radii.max());
  p.morse_index = info.index;
  p.degenerate = info.degenerate;
  p.min_abs_eigenvalue = info.min_abs_eigenvalue;
  p.hessian_determinant = h.determinant();
  const Circuit circuit = make_circuit(radii, config);
  p.shape = shape_of(circuit, settings.geometry_tol);
  p.vertex_events = classify_vertices(radii, config, settings.geometry_tol);
  if (p.shape == Shape::Parade) {
    p.tangential_radius = 0.0;
  } else {
    const auto d = tangential_distances(radii, config);
    double sum = 0.0;
    for (double v : d) sum += v;
    p.tangential_radius = sum / static_cast<double>(d.size());
  }
  return p;
}

namespace detail {

// Allocation-free gradient / Hessian evaluation for the Newton inner loop.
class PerimeterModel {
 public:
  explicit PerimeterModel(const Radii& radii)
      : radii_(radii.vector()),
        n_(radii.size()),
        first_(n_),
        second_(n_),
        grad_(n_ - 1),
        mat_((n_ - 1) * (n_ - 1)),
        rhs_(n_ - 1) {}

  std::size_t dim() const { return n_ - 1; }

  // Returns false at a singular configuration (coincident consecutive vertices).
  bool evaluate(const std::vector<double>& angles, bool with_second) {
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t k = (j + 1) % n_;
      const double aj = j + 1 < n_ ? angles[j] : 0.0;
      const double ak = k + 1 < n_ ? angles[k] : 0.0;
      const double a = radii_[j];
      const double b = radii_[k];
      const double theta = ak - aj;
      const double l = side_length(a, b, theta);
      if (l <= kCoincidentTolerance * (a + b)) return false;
      const auto [s, c] = exact_sin_cos(theta);
      first_[j] = a * b * s / l;
      if (with_second) second_[j] = a * b * c / l - first_[j] * first_[j] / l;
    }
    norm2_ = 0.0;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      const std::size_t left = (k + n_ - 1) % n_;
      grad_[k] = first_[left] - first_[k];
      norm2_ += grad_[k] * grad_[k];
    }
    return true;
  }

  double gradient_norm() const { return std::sqrt(norm2_); }
  double gradient_norm2() const { return norm2_; }

  // Solves H step = -grad with partial pivoting. False if H is numerically singular.
  bool newton_step(std::vector<double>& step) {
    const std::size_t m = n_ - 1;
    std::fill(mat_.begin(), mat_.end(), 0.0);
    double scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t left = (k + n_ - 1) % n_;
      mat_[k * m + k] = second_[left] + second_[k];
      if (k + 1 < m) {
        mat_[k * m + k + 1] = -second_[k];
        mat_[(k + 1) * m + k] = -second_[k];
      }
      rhs_[k] = -grad_[k];
    }
    for (double v : mat_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return false;
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m; ++r)
        if (std::abs(mat_[r * m + col]) > std::abs(mat_[piv * m + col])) piv = r;
      if (std::abs(mat_[piv * m + col]) <= 1e-13 * scale) return false;
      if (piv != col) {
        for (std::size_t c = 0; c < m; ++c) std::swap(mat_[piv * m + c], mat_[col * m + c]);
        std::swap(rhs_[piv], rhs_[col]);
      }
      for (std::size_t r = col + 1; r < m; ++r) {
        const double f = mat_[r * m + col] / mat_[col * m + col];
        if (f == 0.0) continue;
        for (std::size_t c = col; c < m; ++c) mat_[r * m + c] -= f * mat_[col * m + c];
        rhs_[r] -= f * rhs_[col];
      }
    }
    step.assign(m, 0.0);
    for (std::size_t i = m; i-- > 0;) {
      double acc = rhs_[i];
      for (std::size_t c = i + 1; c < m; ++c) acc -= mat_[i * m + c] * step[c];
      step[i] = acc / mat_[i * m + i];
    }
    return true;
  }

  const std::vector<double>& grad() const { return grad_; }

  double hessian_scale() const {
    double s = 0.0;
    for (double c : second_) s = std::max(s, std::abs(c));
    return s;
  }

 private:
  std::vector<double> radii_;
  std::size_t n_;
  std::vector<double> first_;
  std::vector<double> second_;
  std::vector<double> grad_;
  std::vector<double> mat_;
  std::vector<double> rhs_;
  double norm2_ = 0.0;
};

struct RawRefine {
  bool converged = false;
  bool singular = false;
  int iterations = 0;
  std::vector<double> angles;
  double gradient_norm = std::numeric_limits<double>::infinity();
};

inline RawRefine refine_raw(PerimeterModel& model, double max_radius, std::vector<double> x,
                            const SolverSettings& settings) {
  RawRefine out;
  const double tol = settings.newton_tol * (1.0 + max_radius);
  std::vector<double> step;
  std::vector<double> trial(x.size());
  constexpr double kMaxStep = 1.0;
  int descent_rounds = 0;
  for (int it = 0; it <= settings.max_iter; ++it) {
    out.iterations = it;
    if (!model.evaluate(x, true)) {
      out.singular = true;
      break;
    }
    const double gn = model.gradient_norm();
    out.gradient_norm = gn;
    if (gn < tol) {
      out.converged = true;
      break;
    }
    if (it == settings.max_iter) break;

    if (!model.newton_step(step)) {
      // Singular Hessian: a few plain gradient steps, then Newton again.
      if (++descent_rounds > 3) break;
      const double eta = 0.5 / std::max(model.hessian_scale(), 1e-3);
      bool ok = true;
      for (int k = 0; k < 10 && ok; ++k) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= eta * model.grad()[i];
        ok = model.evaluate(x, false);
      }
      if (!ok) {
        out.singular = true;
        break;
      }
      continue;
    }
    double biggest = 0.0;
    for (double s : step) biggest = std::max(biggest, std::abs(s));
    if (biggest > kMaxStep)
      for (double& s : step) s *= kMaxStep / biggest;

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + t * step[i];
      if (model.evaluate(trial, false) && model.gradient_norm() < gn) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    x = trial;
  }
  for (double& a : x) a = wrap_angle(a);
  out.angles = std::move(x);
  return out;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, std::thread::hardware_concurrency()), 16);
  if (workers <= 1 || count < 256) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

enum class RefineStatus { Converged, NoConvergence, Singular };

struct RefineResult {
  RefineStatus status = RefineStatus::NoConvergence;
  int iterations = 0;
  std::optional<CriticalPoint> point;
};

/// Damped Newton on grad L = 0 in reduced coordinates, from `start`.
inline RefineResult newton_refine(const Radii& radii, const ReducedConfiguration& start,
                                  const SolverSettings& settings = {}) {
  settings.validate();
  require_matching(radii, start);
  detail::PerimeterModel model(radii);
  const auto raw = detail::refine_raw(model, radii.max(), start.angles(), settings);
  RefineResult result;
  result.iterations = raw.iterations;
  if (raw.singular) {
    result.status = RefineStatus::Singular;
  } else if (raw.converged) {
    result.status = RefineStatus::Converged;
    result.point = describe_point(radii, ReducedConfiguration(raw.angles), settings);
  }
  return result;
}

struct CriticalCatalogue {
  std::vector<double> radii;
  std::vector<CriticalPoint> points;
  /// Counts of non-degenerate points by Morse index 0..n-1.
  std::vector<int> morse_counts;
  /// Sum of (-1)^index over non-degenerate points.
  int euler_sum = 0;
  bool non_generic = false;
  std::vector<std::string> warnings;
  /// The longest critical point is a parade.
  bool max_is_parade = false;

  friend bool operator==(const CriticalCatalogue&, const CriticalCatalogue&) = default;
};

namespace detail {

inline bool same_point(const ReducedConfiguration& a, double pa, const ReducedConfiguration& b, double pb,
                       double radius) {
  return std::abs(pa - pb) <= 1e-8 * (1.0 + std::abs(pa)) && torus_distance(a, b) < radius;
}

struct Candidate {
  ReducedConfiguration config;
  double perimeter;
};

inline void add_unique(std::vector<Candidate>& unique, const Radii& radii, ReducedConfiguration config,
                       double radius) {
  const double p = perimeter(radii, config);
  for (const auto& u : unique)
    if (same_point(u.config, u.perimeter, config, p, radius)) return;
  unique.push_back({std::move(config), p});
}

inline std::vector<Candidate> refine_all(const Radii& radii, const std::vector<ReducedConfiguration>& seeds,
                                         const SolverSettings& settings) {
  std::vector<RawRefine> raw(seeds.size());
  const double rmax = radii.max();
  detail::parallel_for(seeds.size(), [&](std::size_t i) {
    PerimeterModel model(radii);
    raw[i] = refine_raw(model, rmax, seeds[i].angles(), settings);
  });
  std::vector<Candidate> unique;
  for (auto& r : raw)
    if (r.converged) add_unique(unique, radii, ReducedConfiguration(std::move(r.angles)), settings.dedupe_radius);
  return unique;
}

inline CriticalCatalogue assemble(const Radii& radii, const std::vector<Candidate>& unique,
                                  const SolverSettings& settings) {
  CriticalCatalogue cat;
  cat.radii = radii.vector();
  for (const auto& u : unique) cat.points.push_back(describe_point(radii, u.config, settings));
  // Runs of perimeters that agree to 1e-10 are ordered by angle so mirror
  // twins do not swap places on rounding noise.
  std::sort(cat.points.begin(), cat.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.perimeter < b.perimeter; });
  for (std::size_t begin = 0; begin < cat.points.size();) {
    std::size_t end = begin + 1;
    while (end < cat.points.size() &&
           cat.points[end].perimeter - cat.points[end - 1].perimeter <=
               1e-10 * (1.0 + std::abs(cat.points[end].perimeter)))
      ++end;
    std::sort(cat.points.begin() + static_cast<std::ptrdiff_t>(begin),
              cat.points.begin() + static_cast<std::ptrdiff_t>(end),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.config.angles() < b.config.angles(); });
    begin = end;
  }
  for (std::size_t i = 0; i < cat.points.size(); ++i) {
    const auto mirror = cat.points[i].config.mirrored();
    if (torus_distance(mirror, cat.points[i].config) < settings.dedupe_radius) continue;
    for (std::size_t k = 0; k < cat.points.size(); ++k)
      if (k != i && torus_distance(mirror, cat.points[k].config) < settings.dedupe_radius) {
        cat.points[i].mirror_partner = k;
        break;
      }
  }
  cat.morse_counts.assign(radii.size(), 0);
  bool any_degenerate = false;
  for (const auto& p : cat.points) {
    if (p.degenerate) {
      any_degenerate = true;
      continue;
    }
    ++cat.morse_counts[static_cast<std::size_t>(p.morse_index)];
    cat.euler_sum += p.morse_index % 2 == 0 ? 1 : -1;
  }
  cat.non_generic = !radii.generic();
  if (cat.non_generic) cat.warnings.emplace_back("non-generic radii");
  if (any_degenerate) cat.warnings.emplace_back("degenerate critical points present");
  if (!cat.points.empty()) cat.max_is_parade = cat.points.back().shape == Shape::Parade;
  return cat;
}

inline std::vector<ReducedConfiguration> grid_seeds(std::size_t dim, int density) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= static_cast<std::size_t>(density);
  std::vector<ReducedConfiguration> out;
  out.reserve(total);
  std::vector<double> angles(dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < dim; ++i) {
      angles[i] = kTwoPi * static_cast<double>(rest % static_cast<std::size_t>(density)) / density;
      rest /= static_cast<std::size_t>(density);
    }
    out.emplace_back(angles);
  }
  return out;
}

}  // namespace detail

/// Per-angle grid density used by find_all after applying max_grid_points.
inline int effective_grid_density(std::size_t n, const SolverSettings& settings) {
  int d = settings.grid_density;
  auto total = [&](int dens) {
    double t = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) t *= dens;
    return t;
  };
  while (d > 2 && total(d) > static_cast<double>(settings.max_grid_points)) --d;
  return d;
}

/// Closed-form seeds: parades, Snellius circuits of every sign pattern, the
/// convex quadrilateral and partially aligned circuits (n = 4).
inline std::vector<ReducedConfiguration> closed_form_seeds(const Radii& radii) {
  std::vector<ReducedConfiguration> seeds;
  const std::size_t n = radii.size();
  for (const auto& s : all_parade_signs(n)) seeds.push_back(parade_config(s));
  if (n <= 8)
    for (auto& c : snellius_circuits(radii)) seeds.push_back(std::move(c.config));
  if (n == 4) {
    if (auto r = convex_quad_inradius(radii[0], radii[1], radii[2], radii[3])) {
      const std::vector<int> plus(4, 1);
      for (int o : {1, -1}) seeds.push_back(snellius_from_socle(radii, *r, plus, o));
    }
    for (std::size_t skip = 0; skip < 4; ++skip)
      for (auto& c : partially_aligned_circuits(radii, skip).circuits) seeds.push_back(std::move(c));
  }
  return seeds;
}

/// All critical points of the perimeter for the given radii, sorted by perimeter.
inline CriticalCatalogue find_all(const Radii& radii, const SolverSettings& settings = {}) {
  settings.validate();
  const std::size_t n = radii.size();
  std::vector<ReducedConfiguration> seeds;
  if (settings.closed_form_seeds) {
    seeds = closed_form_seeds(radii);
  } else {
    for (const auto& s : all_parade_signs(n)) seeds.push_back(parade_config(s));
  }
  auto grid = detail::grid_seeds(n - 1, effective_grid_density(n, settings));
  seeds.insert(seeds.end(), std::make_move_iterator(grid.begin()), std::make_move_iterator(grid.end()));

  auto unique = detail::refine_all(radii, seeds, settings);

  // Mirror images are critical whenever the original is; add any the seeds missed.
  detail::PerimeterModel model(radii);
  const std::size_t found = unique.size();
  for (std::size_t i = 0; i < found; ++i) {
    const auto mirror = unique[i].config.mirrored();
    auto raw = detail::refine_raw(model, radii.max(), mirror.angles(), settings);
    if (raw.converged)
      detail::add_unique(unique, radii, ReducedConfiguration(std::move(raw.angles)), settings.dedupe_radius);
  }
  return detail::assemble(radii, unique, settings);
}

/// Independent completeness oracle: damped Newton from every node of a
/// uniform density^(n-1) grid. No closed-form seeds and no mirror
/// completion. Limited to n <= 4.
///
/// Seeding only from grid minima of |grad L|^2 misses critical points whose
/// basin is narrower than a cell (two nearly coincident vertices).
inline CriticalCatalogue brute_force_oracle(const Radii& radii, int density, const SolverSettings& settings = {}) {
  settings.validate();
  const std::size_t n = radii.size();
  if (n > 4) throw InvalidArgument("brute-force oracle is limited to n <= 4");
  if (density < 4) throw InvalidArgument("oracle density must be at least 4");
  const std::size_t dim = n - 1;
  const auto d = static_cast<std::size_t>(density);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= d;

  std::vector<ReducedConfiguration> seeds;
  seeds.reserve(total);
  std::vector<double> angles(dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < dim; ++i) {
      angles[i] = kTwoPi * static_cast<double>(rest % d) / static_cast<double>(density);
      rest /= d;
    }
    seeds.emplace_back(angles);
  }
  return detail::assemble(radii, detail::refine_all(radii, seeds, settings), settings);
}

/// True when both catalogues hold the same points (one-to-one within `tol`, torus metric).
inline bool catalogues_match(const CriticalCatalogue& a, const CriticalCatalogue& b, double tol) {
  if (a.points.size() != b.points.size()) return false;
  std::vector<bool> used(b.points.size(), false);
  for (const auto& p : a.points) {
    bool hit = false;
    for (std::size_t k = 0; k < b.points.size(); ++k) {
      if (used[k] || torus_distance(p.config, b.points[k].config) >= tol) continue;
      used[k] = true;
      hit = true;
      break;
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace ccycles
