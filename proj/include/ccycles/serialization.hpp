// JSON and CSV encodings of catalogues, sweeps and run records. Every double
// is written with enough digits to read back to the same bits.
#pragma once

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccycles/continuation.hpp"
#include "ccycles/core.hpp"
#include "ccycles/geometry.hpp"
#include "ccycles/solver.hpp"

namespace ccycles {

inline constexpr const char* kToolVersion = "1.0.0";

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void to_json(json& j, const SolverSettings& s) {
  j = json{{"grid_density", s.grid_density},
           {"newton_tol", s.newton_tol},
           {"max_iter", s.max_iter},
           {"dedupe_radius", s.dedupe_radius},
           {"degeneracy_threshold", s.degeneracy_threshold},
           {"max_grid_points", s.max_grid_points},
           {"geometry_tol", s.geometry_tol},
           {"closed_form_seeds", s.closed_form_seeds}};
}

inline void from_json(const json& j, SolverSettings& s) {
  j.at("grid_density").get_to(s.grid_density);
  j.at("newton_tol").get_to(s.newton_tol);
  j.at("max_iter").get_to(s.max_iter);
  j.at("dedupe_radius").get_to(s.dedupe_radius);
  j.at("degeneracy_threshold").get_to(s.degeneracy_threshold);
  j.at("max_grid_points").get_to(s.max_grid_points);
  j.at("geometry_tol").get_to(s.geometry_tol);
  j.at("closed_form_seeds").get_to(s.closed_form_seeds);
}

inline void to_json(json& j, const VertexEvent& e) {
  j = json{{"kind", std::string(to_string(e.kind))}, {"residual", e.residual}};
}

inline void from_json(const json& j, VertexEvent& e) {
  const auto kind = j.at("kind").get<std::string>();
  bool known = false;
  for (auto k : {VertexKind::Reflection, VertexKind::Refraction, VertexKind::NonStationary})
    if (to_string(k) == kind) {
      e.kind = k;
      known = true;
    }
  if (!known) throw InvalidArgument("unknown vertex kind '" + kind + "'");
  j.at("residual").get_to(e.residual);
}

inline void to_json(json& j, const CriticalPoint& p) {
  j = json{{"angles", p.config.angles()},
           {"perimeter", p.perimeter},
           {"gradient_norm", p.gradient_norm},
           {"index", p.morse_index},
           {"degenerate", p.degenerate},
           {"det_hessian", p.hessian_determinant},
           {"min_abs_eigenvalue", p.min_abs_eigenvalue},
           {"shape", std::string(to_string(p.shape))},
           {"tangential_radius", p.tangential_radius},
           {"vertex_events", p.vertex_events},
           {"mirror_of", p.mirror_partner ? json(*p.mirror_partner) : json(nullptr)}};
}

inline void from_json(const json& j, CriticalPoint& p) {
  p.config = ReducedConfiguration(j.at("angles").get<std::vector<double>>());
  j.at("perimeter").get_to(p.perimeter);
  j.at("gradient_norm").get_to(p.gradient_norm);
  j.at("index").get_to(p.morse_index);
  j.at("degenerate").get_to(p.degenerate);
  j.at("det_hessian").get_to(p.hessian_determinant);
  j.at("min_abs_eigenvalue").get_to(p.min_abs_eigenvalue);
  p.shape = shape_from_string(j.at("shape").get<std::string>());
  j.at("tangential_radius").get_to(p.tangential_radius);
  j.at("vertex_events").get_to(p.vertex_events);
  const auto& m = j.at("mirror_of");
  p.mirror_partner = m.is_null() ? std::nullopt : std::optional<std::size_t>(m.get<std::size_t>());
}

inline void to_json(json& j, const CriticalCatalogue& c) {
  j = json{{"radii", c.radii},
           {"points", c.points},
           {"morse_counts", c.morse_counts},
           {"euler_sum", c.euler_sum},
           {"non_generic", c.non_generic},
           {"warnings", c.warnings},
           {"max_is_parade", c.max_is_parade}};
}

inline void from_json(const json& j, CriticalCatalogue& c) {
  j.at("radii").get_to(c.radii);
  j.at("points").get_to(c.points);
  j.at("morse_counts").get_to(c.morse_counts);
  j.at("euler_sum").get_to(c.euler_sum);
  j.at("non_generic").get_to(c.non_generic);
  j.at("warnings").get_to(c.warnings);
  j.at("max_is_parade").get_to(c.max_is_parade);
}

inline json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> optional_from_json(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

inline void to_json(json& j, const SweepEvent& e) {
  j = json{{"kind", std::string(to_string(e.kind))},
           {"param", e.param},
           {"branches", e.branches},
           {"hessian_min_eig", e.hessian_min_eig},
           {"index_before", e.index_before},
           {"index_after", e.index_after}};
}

inline void from_json(const json& j, SweepEvent& e) {
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  j.at("param").get_to(e.param);
  j.at("branches").get_to(e.branches);
  j.at("hessian_min_eig").get_to(e.hessian_min_eig);
  j.at("index_before").get_to(e.index_before);
  j.at("index_after").get_to(e.index_after);
}

inline void to_json(json& j, const SweepSample& s) { j = json{{"param", s.param}, {"point", s.point}}; }

inline void from_json(const json& j, SweepSample& s) {
  j.at("param").get_to(s.param);
  j.at("point").get_to(s.point);
}

inline void to_json(json& j, const SweepBranch& b) {
  j = json{{"id", b.id}, {"birth", optional_to_json(b.birth)}, {"death", optional_to_json(b.death)},
           {"samples", b.samples}};
}

inline void from_json(const json& j, SweepBranch& b) {
  j.at("id").get_to(b.id);
  b.birth = optional_from_json(j.at("birth"));
  b.death = optional_from_json(j.at("death"));
  j.at("samples").get_to(b.samples);
}

inline void to_json(json& j, const SweepResult& r) { j = json{{"branches", r.branches}, {"events", r.events}}; }

inline void from_json(const json& j, SweepResult& r) {
  j.at("branches").get_to(r.branches);
  j.at("events").get_to(r.events);
}

/// Sweep range as given on the command line; `vary` is 1-based.
struct SweepInputs {
  std::size_t vary = 1;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;

  friend bool operator==(const SweepInputs&, const SweepInputs&) = default;
};

inline void to_json(json& j, const SweepInputs& s) {
  j = json{{"vary", s.vary}, {"from", s.from}, {"to", s.to}, {"steps", s.steps}};
}

inline void from_json(const json& j, SweepInputs& s) {
  j.at("vary").get_to(s.vary);
  j.at("from").get_to(s.from);
  j.at("to").get_to(s.to);
  j.at("steps").get_to(s.steps);
}

struct RunRecord {
  std::string tool_version = kToolVersion;
  std::string command;
  std::vector<double> radii;
  SolverSettings settings;
  std::optional<SweepInputs> sweep_inputs;
  std::optional<CriticalCatalogue> catalogue;
  std::optional<SweepResult> sweep;
  /// Wall-clock seconds; only recorded on request so that output stays reproducible.
  std::optional<double> elapsed_seconds;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline void to_json(json& j, const RunRecord& r) {
  j = json{{"tool_version", r.tool_version},
           {"command", r.command},
           {"radii", r.radii},
           {"settings", r.settings}};
  if (r.sweep_inputs) j["sweep_inputs"] = *r.sweep_inputs;
  if (r.catalogue) j["catalogue"] = *r.catalogue;
  if (r.sweep) j["sweep"] = *r.sweep;
  if (r.elapsed_seconds) j["timing"] = json{{"elapsed_seconds", *r.elapsed_seconds}};
}

inline void from_json(const json& j, RunRecord& r) {
  j.at("tool_version").get_to(r.tool_version);
  j.at("command").get_to(r.command);
  j.at("radii").get_to(r.radii);
  j.at("settings").get_to(r.settings);
  r.sweep_inputs = j.contains("sweep_inputs") ? std::optional(j["sweep_inputs"].get<SweepInputs>()) : std::nullopt;
  r.catalogue = j.contains("catalogue") ? std::optional(j["catalogue"].get<CriticalCatalogue>()) : std::nullopt;
  r.sweep = j.contains("sweep") ? std::optional(j["sweep"].get<SweepResult>()) : std::nullopt;
  r.elapsed_seconds = j.contains("timing") ? std::optional(j["timing"].at("elapsed_seconds").get<double>())
                                           : std::nullopt;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Sweep samples as CSV: one row per branch sample, in branch then parameter order.

inline std::string sweep_csv_header(std::size_t n) {
  std::string h = "param,branch_id,perimeter,index,shape,det_hessian,tangential_radius";
  for (std::size_t i = 1; i < n; ++i) h += ",angle_" + std::to_string(i);
  return h;
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& r, std::size_t n) {
  out << sweep_csv_header(n) << "\n";
  for (const auto& b : r.branches) {
    for (const auto& s : b.samples) {
      const auto& p = s.point;
      out << format_double(s.param) << ',' << b.id << ',' << format_double(p.perimeter) << ',' << p.morse_index
          << ',' << to_string(p.shape) << ',' << format_double(p.hessian_determinant) << ','
          << format_double(p.tangential_radius);
      for (double a : p.config.angles()) out << ',' << format_double(a);
      out << "\n";
    }
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

inline double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InvalidArgument("malformed number '" + s + "'");
  return v;
}

}  // namespace detail

/// Reads branches back from write_sweep_csv output. Only the CSV columns are
/// restored; birth, death and the remaining point fields stay default.
inline std::vector<SweepBranch> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty sweep CSV");
  const auto header = detail::split_csv_line(line);
  if (header.size() < 9 || sweep_csv_header(header.size() - 6) != line)
    throw InvalidArgument("unexpected sweep CSV header");
  const std::size_t angles = header.size() - 7;
  std::map<int, SweepBranch> branches;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) throw InvalidArgument("sweep CSV row has wrong column count");
    SweepSample s;
    s.param = detail::parse_double(cells[0]);
    const int id = std::stoi(cells[1]);
    s.point.perimeter = detail::parse_double(cells[2]);
    s.point.morse_index = std::stoi(cells[3]);
    s.point.shape = shape_from_string(cells[4]);
    s.point.hessian_determinant = detail::parse_double(cells[5]);
    s.point.tangential_radius = detail::parse_double(cells[6]);
    std::vector<double> a(angles);
    for (std::size_t i = 0; i < angles; ++i) a[i] = detail::parse_double(cells[7 + i]);
    s.point.config = ReducedConfiguration(std::move(a));
    auto& b = branches[id];
    b.id = id;
    b.samples.push_back(std::move(s));
  }
  std::vector<SweepBranch> out;
  for (auto& [id, b] : branches) out.push_back(std::move(b));
  return out;
}

}  // namespace ccycles
