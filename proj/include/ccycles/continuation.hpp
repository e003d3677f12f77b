// Natural-parameter continuation of critical points while one radius varies,
// with detection and bisection-localization of folds, pitchforks, tangency
// transitions and index changes.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccycles/closed_forms.hpp"
#include "ccycles/core.hpp"
#include "ccycles/geometry.hpp"
#include "ccycles/solver.hpp"

namespace ccycles {

struct SweepPlan {
  SweepPlan(Radii base, std::size_t vary, double start, double stop, int step_count = 200)
      : radii(std::move(base)), vary_index(vary), from(start), to(stop), steps(step_count) {}

  Radii radii;
  /// 0-based index of the radius that varies.
  std::size_t vary_index;
  double from;
  double to;
  int steps;
  /// A failed corrector step is halved at most this many times before the branch ends.
  int max_halvings = 12;
  /// find_all is re-run every this many steps (and at the last step) to pick up new branches.
  int checkpoint_interval = 10;
  int checkpoint_grid_density = 24;
  /// Largest accepted torus distance between predictor and corrected point.
  double jump_tolerance = 0.25;
  /// Parameter resolution of event bisection.
  double event_tolerance = 1e-9;
  SolverSettings settings;

  void validate() const {
    settings.validate();
    if (vary_index >= radii.size()) throw InvalidArgument("vary index out of range");
    if (!std::isfinite(from) || !std::isfinite(to) || from <= 0.0 || to <= 0.0)
      throw InvalidArgument("sweep range must be positive and finite");
    if (from == to) throw InvalidArgument("sweep range is empty");
    if (steps < 1 || max_halvings < 0 || checkpoint_interval < 1 || checkpoint_grid_density < 2 ||
        !(jump_tolerance > 0.0) || !(event_tolerance > 0.0))
      throw InvalidArgument("invalid sweep resolution settings");
  }

  double step() const { return (to - from) / steps; }
  double param(int k) const { return k == steps ? to : from + k * step(); }
  Radii radii_at(double p) const { return radii.with(vary_index, p); }
};

struct SweepSample {
  double param = 0.0;
  CriticalPoint point;

  friend bool operator==(const SweepSample&, const SweepSample&) = default;
};

struct SweepBranch {
  int id = 0;
  /// Samples at the sweep grid parameters, in sweep order.
  std::vector<SweepSample> samples;
  /// Parameter where the branch appears; empty when it exists at the start.
  std::optional<double> birth;
  /// Parameter where the branch ends; empty when it survives to the end.
  std::optional<double> death;

  friend bool operator==(const SweepBranch&, const SweepBranch&) = default;
};

enum class EventKind { Fold, Pitchfork, Tangency, IndexChange };

inline std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Fold: return "Fold";
    case EventKind::Pitchfork: return "Pitchfork";
    case EventKind::Tangency: return "Tangency";
    case EventKind::IndexChange: return "IndexChange";
  }
  return "?";
}

inline EventKind event_kind_from_string(std::string_view s) {
  for (auto k : {EventKind::Fold, EventKind::Pitchfork, EventKind::Tangency, EventKind::IndexChange})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown event kind '" + std::string(s) + "'");
}

struct SweepEvent {
  EventKind kind = EventKind::Fold;
  double param = 0.0;
  /// The persisting branch first (Pitchfork, Tangency, IndexChange), then ending or starting ones.
  std::vector<int> branches;
  double hessian_min_eig = 0.0;
  int index_before = -1;
  int index_after = -1;

  friend bool operator==(const SweepEvent&, const SweepEvent&) = default;
};

struct SweepResult {
  std::vector<SweepBranch> branches;
  std::vector<SweepEvent> events;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

namespace detail {

class Continuer {
 public:
  explicit Continuer(const SweepPlan& plan) : plan_(plan) {}

  std::optional<ReducedConfiguration> correct(double p, const ReducedConfiguration& guess) const {
    const Radii r = plan_.radii_at(p);
    PerimeterModel model(r);
    auto raw = refine_raw(model, r.max(), guess.angles(), plan_.settings);
    if (!raw.converged) return std::nullopt;
    ReducedConfiguration c(std::move(raw.angles));
    if (torus_distance(c, guess) > plan_.jump_tolerance) return std::nullopt;
    return c;
  }

  // Follows a branch from (pa, ca) to pb, halving on failure. On failure the
  // last reached parameter and configuration are returned with ok = false.
  struct Advance {
    bool ok = false;
    double param = 0.0;
    ReducedConfiguration config;
  };

  Advance advance(double pa, const ReducedConfiguration& ca, double pb) const {
    double p = pa;
    ReducedConfiguration c = ca;
    double h = pb - pa;
    const double floor = std::abs(pb - pa) / std::ldexp(1.0, plan_.max_halvings);
    while (p != pb) {
      const double q = std::abs(pb - p) <= std::abs(h) ? pb : p + h;
      if (auto next = correct(q, c)) {
        p = q;
        c = std::move(*next);
      } else {
        h *= 0.5;
        if (std::abs(h) < floor * (1.0 - 1e-12)) return {false, p, c};
      }
    }
    return {true, pb, c};
  }

  // Last parameter in [alive, dead] at which `alive_at` holds, to event tolerance.
  template <typename Pred>
  double localize(double alive, double dead, Pred&& alive_at) const {
    while (std::abs(dead - alive) > plan_.event_tolerance) {
      const double mid = 0.5 * (alive + dead);
      if (alive_at(mid))
        alive = mid;
      else
        dead = mid;
    }
    return 0.5 * (alive + dead);
  }

  // Bisects a sign change of f(param, config) along a branch between two samples.
  template <typename Fn>
  double bisect_indicator(const SweepSample& a, const SweepSample& b, Fn&& f) const {
    double lo = a.param;
    double hi = b.param;
    ReducedConfiguration clo = a.point.config;
    const double flo = f(lo, clo);
    while (std::abs(hi - lo) > plan_.event_tolerance) {
      const double mid = 0.5 * (lo + hi);
      const auto adv = advance(lo, clo, mid);
      if (!adv.ok) break;
      if ((f(mid, adv.config) > 0.0) == (flo > 0.0)) {
        lo = mid;
        clo = adv.config;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  CriticalPoint describe(double p, const ReducedConfiguration& c) const {
    return describe_point(plan_.radii_at(p), c, plan_.settings);
  }

  bool same(double p, const ReducedConfiguration& a, const ReducedConfiguration& b) const {
    const Radii r = plan_.radii_at(p);
    return same_point(a, perimeter(r, a), b, perimeter(r, b), plan_.settings.dedupe_radius);
  }

 private:
  const SweepPlan& plan_;
};

struct Transition {
  int branch;
  double param;
  bool used = false;
};

struct Indicator {
  int branch;
  double param;
};

inline double det_at(const SweepPlan& plan, double p, const ReducedConfiguration& c) {
  return hessian(plan.radii_at(p), c).determinant();
}

inline int index_near(const SweepBranch& b, double param, bool before, double direction) {
  int idx = -1;
  for (const auto& s : b.samples) {
    const double rel = (s.param - param) * direction;
    if (before && rel < 0.0) idx = s.point.morse_index;
    if (!before && rel > 0.0) return s.point.morse_index;
  }
  return idx;
}

}  // namespace detail

/// Tracks every critical point while radius `vary_index` moves from `from` to `to`.
inline SweepResult sweep(const SweepPlan& plan) {
  plan.validate();
  const detail::Continuer cont(plan);
  const double direction = plan.to > plan.from ? 1.0 : -1.0;

  SolverSettings checkpoint_settings = plan.settings;
  checkpoint_settings.grid_density = plan.checkpoint_grid_density;

  SweepResult result;
  std::vector<detail::Transition> transitions;
  std::vector<bool> alive;

  {
    const double p0 = plan.param(0);
    const auto cat = find_all(plan.radii_at(p0), plan.settings);
    for (const auto& pt : cat.points) {
      SweepBranch b;
      b.id = static_cast<int>(result.branches.size());
      b.samples.push_back({p0, pt});
      result.branches.push_back(std::move(b));
      alive.push_back(true);
    }
  }

  auto sample_at = [&](const SweepBranch& b, double p) -> const SweepSample* {
    for (const auto& s : b.samples)
      if (s.param == p) return &s;
    return nullptr;
  };

  for (int k = 0; k < plan.steps; ++k) {
    const double pa = plan.param(k);
    const double pb = plan.param(k + 1);

    for (std::size_t i = 0; i < result.branches.size(); ++i) {
      if (!alive[i]) continue;
      auto& b = result.branches[i];
      const auto& last = b.samples.back();
      auto adv = cont.advance(pa, last.point.config, pb);
      if (adv.ok) {
        b.samples.push_back({pb, cont.describe(pb, adv.config)});
        continue;
      }
      const ReducedConfiguration from_config = adv.config;
      const double from_param = adv.param;
      const double death = cont.localize(from_param, pb, [&](double q) {
        return cont.advance(from_param, from_config, q).ok;
      });
      b.death = death;
      alive[i] = false;
      transitions.push_back({b.id, death});
    }

    // Two branches landing on one point: the one that moved further ends.
    for (std::size_t i = 0; i < result.branches.size(); ++i) {
      for (std::size_t j = i + 1; j < result.branches.size() && alive[i]; ++j) {
        if (!alive[j]) continue;
        auto& bi = result.branches[i];
        auto& bj = result.branches[j];
        if (!cont.same(pb, bi.samples.back().point.config, bj.samples.back().point.config)) continue;
        const auto& si = bi.samples[bi.samples.size() - 2];
        const auto& sj = bj.samples[bj.samples.size() - 2];
        const double moved_i = torus_distance(si.point.config, bi.samples.back().point.config);
        const double moved_j = torus_distance(sj.point.config, bj.samples.back().point.config);
        const bool lose_i = moved_i > moved_j;
        auto& loser = lose_i ? bi : bj;
        const auto& winner_prev = lose_i ? sj : si;
        const auto loser_prev = loser.samples[loser.samples.size() - 2];
        loser.samples.pop_back();
        const double death = cont.localize(pa, pb, [&](double q) {
          const auto l = cont.advance(pa, loser_prev.point.config, q);
          if (!l.ok) return false;
          const auto w = cont.advance(pa, winner_prev.point.config, q);
          return !w.ok || !cont.same(q, l.config, w.config);
        });
        loser.death = death;
        alive[lose_i ? i : j] = false;
        transitions.push_back({loser.id, death});
      }
    }

    if ((k + 1) % plan.checkpoint_interval != 0 && k + 1 != plan.steps) continue;

    // Checkpoint: branches the continuation does not know yet are traced back to their birth.
    const auto cat = find_all(plan.radii_at(pb), checkpoint_settings);
    for (const auto& pt : cat.points) {
      bool known = false;
      for (std::size_t i = 0; i < result.branches.size() && !known; ++i)
        if (alive[i] && cont.same(pb, result.branches[i].samples.back().point.config, pt.config)) known = true;
      if (known) continue;

      std::vector<SweepSample> back{{pb, cont.describe(pb, pt.config)}};
      std::optional<double> birth;
      for (int j = k; j >= 0 && !birth; --j) {
        const double pj = plan.param(j);
        const double pj1 = plan.param(j + 1);
        const auto cur = back.back();
        const auto adv = cont.advance(pj1, cur.point.config, pj);
        const SweepBranch* twin = nullptr;
        if (adv.ok)
          for (const auto& other : result.branches)
            if (const auto* s = sample_at(other, pj); s && cont.same(pj, s->point.config, adv.config)) twin = &other;
        if (adv.ok && twin == nullptr) {
          back.push_back({pj, cont.describe(pj, adv.config)});
          continue;
        }
        const SweepSample* twin_sample = twin ? sample_at(*twin, pj) : nullptr;
        birth = cont.localize(pj1, pj, [&](double q) {
          const auto l = cont.advance(pj1, cur.point.config, q);
          if (!l.ok) return false;
          if (twin_sample == nullptr) return true;
          const auto w = cont.advance(pj, twin_sample->point.config, q);
          return !w.ok || !cont.same(q, l.config, w.config);
        });
      }
      SweepBranch b;
      b.id = static_cast<int>(result.branches.size());
      b.samples.assign(back.rbegin(), back.rend());
      b.birth = birth;
      if (birth) transitions.push_back({b.id, *birth});
      result.branches.push_back(std::move(b));
      alive.push_back(true);
    }
  }

  // Indicator sign changes along each branch.
  std::vector<detail::Indicator> det_changes;
  std::vector<detail::Indicator> turn_flips;
  const double tol = plan.settings.geometry_tol;
  for (const auto& b : result.branches) {
    for (std::size_t s = 0; s + 1 < b.samples.size(); ++s) {
      const auto& a = b.samples[s];
      const auto& c = b.samples[s + 1];
      if ((a.point.hessian_determinant > 0.0) != (c.point.hessian_determinant > 0.0) &&
          a.point.hessian_determinant != 0.0 && c.point.hessian_determinant != 0.0)
        det_changes.push_back({b.id, cont.bisect_indicator(a, c, [&](double p, const ReducedConfiguration& x) {
                                 return detail::det_at(plan, p, x);
                               })});
      if (a.point.shape == Shape::Parade || c.point.shape == Shape::Parade) continue;
      const auto ta = vertex_turns(make_circuit(plan.radii_at(a.param), a.point.config));
      const auto tc = vertex_turns(make_circuit(plan.radii_at(c.param), c.point.config));
      for (std::size_t v = 0; v < ta.size(); ++v) {
        if (std::abs(ta[v]) <= tol || std::abs(tc[v]) <= tol || (ta[v] > 0.0) == (tc[v] > 0.0)) continue;
        turn_flips.push_back({b.id, cont.bisect_indicator(a, c, [&](double p, const ReducedConfiguration& x) {
                                return vertex_turns(make_circuit(plan.radii_at(p), x))[v];
                              })});
      }
    }
  }

  const double window = std::max(2.0 * std::abs(plan.step()), 1e-3);
  auto min_eig = [&](int branch, double param) {
    const auto& b = result.branches[static_cast<std::size_t>(branch)];
    const SweepSample* best = &b.samples.front();
    for (const auto& s : b.samples)
      if (std::abs(s.param - param) < std::abs(best->param - param)) best = &s;
    const auto adv = cont.advance(best->param, best->point.config, param);
    const auto& x = adv.ok ? adv.config : best->point.config;
    return morse_index(hessian(plan.radii_at(param), x), 0.0).min_abs_eigenvalue;
  };
  auto with_indices = [&](SweepEvent& e) {
    const auto& b = result.branches[static_cast<std::size_t>(e.branches.front())];
    e.index_before = detail::index_near(b, e.param, true, direction);
    e.index_after = detail::index_near(b, e.param, false, direction);
    e.hessian_min_eig = min_eig(e.branches.front(), e.param);
  };
  auto nearest_config = [&](int branch, double param) -> const ReducedConfiguration& {
    const auto& b = result.branches[static_cast<std::size_t>(branch)];
    const SweepSample* best = &b.samples.front();
    for (const auto& s : b.samples)
      if (std::abs(s.param - param) < std::abs(best->param - param)) best = &s;
    return best->point.config;
  };

  // Branch-local events; a det change on a branch that also flips a turn belongs to the tangency.
  std::vector<SweepEvent> primary;
  for (const auto& t : turn_flips) primary.push_back({EventKind::Tangency, t.param, {t.branch}, 0.0, -1, -1});
  for (const auto& d : det_changes) {
    bool absorbed = false;
    for (const auto& t : turn_flips)
      if (t.branch == d.branch && std::abs(t.param - d.param) <= window) absorbed = true;
    if (!absorbed) primary.push_back({EventKind::IndexChange, d.param, {d.branch}, 0.0, -1, -1});
  }
  // Each ending or starting branch joins the nearby event whose branch it is closest to.
  for (auto& t : transitions) {
    SweepEvent* best = nullptr;
    double best_distance = 0.0;
    for (auto& e : primary) {
      if (e.branches.front() == t.branch || std::abs(e.param - t.param) > window) continue;
      const double d = torus_distance(nearest_config(t.branch, e.param), nearest_config(e.branches.front(), e.param));
      if (best == nullptr || d < best_distance) {
        best = &e;
        best_distance = d;
      }
    }
    if (best == nullptr) continue;
    best->branches.push_back(t.branch);
    t.used = true;
  }
  for (auto& e : primary) {
    std::sort(e.branches.begin() + 1, e.branches.end());
    if (e.kind == EventKind::IndexChange && e.branches.size() > 1) e.kind = EventKind::Pitchfork;
    with_indices(e);
    result.events.push_back(std::move(e));
  }
  std::sort(transitions.begin(), transitions.end(), [&](const auto& a, const auto& b) {
    return (a.param - b.param) * direction < 0.0 || (a.param == b.param && a.branch < b.branch);
  });
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    if (transitions[i].used) continue;
    SweepEvent e;
    e.kind = EventKind::Fold;
    e.param = transitions[i].param;
    e.branches = {transitions[i].branch};
    transitions[i].used = true;
    for (std::size_t j = i + 1; j < transitions.size(); ++j)
      if (!transitions[j].used && std::abs(transitions[j].param - e.param) <= window) {
        transitions[j].used = true;
        e.branches.push_back(transitions[j].branch);
      }
    e.hessian_min_eig = min_eig(e.branches.front(), e.param);
    result.events.push_back(std::move(e));
  }
  std::stable_sort(result.events.begin(), result.events.end(), [&](const SweepEvent& a, const SweepEvent& b) {
    return (a.param - b.param) * direction < 0.0;
  });
  return result;
}

struct DegeneracyRoot {
  ParadeSigns signs;
  double value = 0.0;
};

/// Values of radius `vary_index` in [lo, hi] where a parade Hessian determinant
/// vanishes, from sign changes of the closed-form S(x).
inline std::vector<DegeneracyRoot> parade_degeneracy_locus(const Radii& radii, std::size_t vary_index, double lo,
                                                           double hi, std::size_t samples = 2000) {
  if (vary_index >= radii.size()) throw InvalidArgument("vary index out of range");
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw InvalidArgument("invalid radius range");
  std::vector<DegeneracyRoot> out;
  for (const auto& signs : all_parade_signs(radii.size())) {
    auto s = [&](double v) { return parade_s_value(radii.with(vary_index, v), signs); };
    for (double root : bracketed_roots(s, lo, hi, samples, 1e-15)) {
      // S vanishing identically on an interval is not an isolated degeneracy.
      const double h = 1e-6 * (hi - lo);
      if (s(std::max(lo, root - h)) == 0.0 && s(std::min(hi, root + h)) == 0.0) continue;
      out.push_back({signs, root});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

}  // namespace ccycles
