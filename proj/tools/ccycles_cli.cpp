// ccycles: critical points of the perimeter of connecting cycles through
// concentric circles.
//
//   ccycles critical --radii 1,2,3
//   ccycles sweep --radii 3,2.53,3,4.6 --vary 2 --from 2.53 --to 1 --steps 200 --csv out.csv --json events.json
//   ccycles verify --pentagram
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccycles/ccycles.hpp"

namespace {

using ccycles::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalid = 2;

struct Options {
  std::string radii_list;
  std::vector<double> radius;
  std::string angles_list;
  std::size_t vary = 0;
  double from = 0.0;
  double to = 0.0;
  int steps = 200;
  int grid = 0;
  double tol = 0.0;
  std::string json_path;
  std::string csv_path;
  bool pentagram = false;
  bool timing = false;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(ccycles::detail::parse_double(cell));
    } catch (const ccycles::Error&) {
      throw ccycles::InvalidArgument(std::string("cannot parse ") + what + " value '" + cell + "'");
    }
  }
  return out;
}

ccycles::Radii radii_from(const Options& o) {
  std::vector<double> r = parse_list(o.radii_list, "radius");
  r.insert(r.end(), o.radius.begin(), o.radius.end());
  if (r.empty()) throw ccycles::InvalidArgument("no radii given (use --radii or --radius)");
  return ccycles::Radii(std::move(r));
}

ccycles::SolverSettings settings_from(const Options& o) {
  ccycles::SolverSettings s;
  if (o.grid != 0) s.grid_density = o.grid;
  if (o.tol != 0.0) s.newton_tol = o.tol;
  s.validate();
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ccycles::InvalidArgument("cannot open '" + path + "' for writing");
  out << text;
}

void emit(const json& j, const Options& o) {
  const std::string text = ccycles::dump(j);
  std::cout << text;
  if (!o.json_path.empty()) write_file(o.json_path, text);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_critical(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto radii = radii_from(o);
  const auto settings = settings_from(o);
  const auto cat = ccycles::find_all(radii, settings);
  json j = cat;
  j["tool_version"] = ccycles::kToolVersion;
  j["settings"] = settings;
  if (o.timing) j["timing"] = json{{"elapsed_seconds", seconds_since(t0)}};
  emit(j, o);
  return kExitOk;
}

int cmd_parades(const Options& o) {
  const auto radii = radii_from(o);
  json points = json::array();
  for (const auto& s : ccycles::all_parade_signs(radii.size())) {
    json p{{"signs", s.to_string()},
           {"angles", ccycles::parade_config(s).angles()},
           {"perimeter", ccycles::parade_perimeter(radii, s)},
           {"s_value", ccycles::parade_s_value(radii, s)},
           {"epsilons", ccycles::parade_epsilons(radii, s)}};
    try {
      const auto rep = ccycles::parade_hessian(radii, s);
      p["b_values"] = rep.b_values;
      p["det_hessian"] = rep.determinant;
      p["index"] = rep.morse_index;
      p["degenerate"] = false;
    } catch (const ccycles::DegenerateParade& e) {
      p["degenerate"] = true;
      p["error"] = e.what();
    }
    points.push_back(std::move(p));
  }
  emit(json{{"tool_version", ccycles::kToolVersion}, {"radii", radii.vector()}, {"parades", points}}, o);
  return kExitOk;
}

int cmd_closed_form(const Options& o) {
  const auto radii = radii_from(o);
  const std::size_t n = radii.size();
  json j{{"tool_version", ccycles::kToolVersion}, {"radii", radii.vector()}};
  if (n == 3) {
    j["triangle_inradius"] = ccycles::fermat_triangle_inradius(radii[0], radii[1], radii[2]);
    if (radii.generic()) {
      json values = json::array();
      for (const auto& v : ccycles::three_cc_catalogue(radii[0], radii[1], radii[2]))
        values.push_back({{"value", v.value}, {"multiplicity", v.multiplicity}, {"index", v.index}, {"kind", v.kind}});
      j["three_circle_catalogue"] = values;
    }
  }
  if (n == 4) {
    const auto q = ccycles::convex_quad_inradius(radii[0], radii[1], radii[2], radii[3]);
    j["convex_quad_inradius"] = q ? json(*q) : json(nullptr);
    json aligned = json::array();
    for (std::size_t skip = 0; skip < 4; ++skip) {
      const auto pa = ccycles::partially_aligned_circuits(radii, skip);
      json configs = json::array();
      for (const auto& c : pa.circuits) configs.push_back(c.angles());
      aligned.push_back({{"skip", skip + 1}, {"intersections", pa.intersections}, {"tangent", pa.tangent},
                         {"circuits", configs}});
    }
    j["partially_aligned"] = aligned;
  }
  if (n <= 12) {
    json circuits = json::array();
    for (const auto& c : ccycles::snellius_circuits(radii)) {
      if (c.orientation != 1) continue;
      circuits.push_back({{"eps", c.eps},
                          {"sigma", c.sigma},
                          {"perimeter", ccycles::snellius_perimeter(radii, c.sigma, c.eps)},
                          {"angles", c.config.angles()}});
    }
    j["snellius_circuits"] = circuits;
  }
  emit(j, o);
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto radii = radii_from(o);
  if (o.vary < 1 || o.vary > radii.size())
    throw ccycles::InvalidArgument("--vary must lie in 1.." + std::to_string(radii.size()));
  ccycles::SweepPlan plan(radii, o.vary - 1, o.from, o.to, o.steps);
  plan.settings = settings_from(o);
  plan.validate();
  const auto res = ccycles::sweep(plan);

  std::ostringstream csv;
  ccycles::write_sweep_csv(csv, res, radii.size());

  json branches = json::array();
  for (const auto& b : res.branches)
    branches.push_back({{"id", b.id},
                        {"birth", ccycles::optional_to_json(b.birth)},
                        {"death", ccycles::optional_to_json(b.death)},
                        {"shape_start", std::string(ccycles::to_string(b.samples.front().point.shape))},
                        {"shape_end", std::string(ccycles::to_string(b.samples.back().point.shape))}});
  json locus = json::array();
  const double lo = std::min(o.from, o.to);
  const double hi = std::max(o.from, o.to);
  for (const auto& r : ccycles::parade_degeneracy_locus(radii, plan.vary_index, lo, hi))
    locus.push_back({{"signs", r.signs.to_string()}, {"value", r.value}});
  json events{{"tool_version", ccycles::kToolVersion},
              {"radii", radii.vector()},
              {"settings", plan.settings},
              {"sweep_inputs", ccycles::SweepInputs{o.vary, o.from, o.to, o.steps}},
              {"events", res.events},
              {"branches", branches},
              {"degeneracy_locus", locus}};
  if (o.timing) events["timing"] = json{{"elapsed_seconds", seconds_since(t0)}};

  if (o.csv_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file(o.csv_path, csv.str());
  }
  if (!o.json_path.empty()) {
    write_file(o.json_path, ccycles::dump(events));
  } else if (!o.csv_path.empty()) {
    std::cout << ccycles::dump(events);
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  ccycles::VerifyReport rep;
  json j{{"tool_version", ccycles::kToolVersion}};
  if (o.pentagram) {
    rep = ccycles::verify_pentagram();
    j["subject"] = "pentagram";
  } else {
    const auto radii = radii_from(o);
    rep = ccycles::verify_radii(radii, settings_from(o));
    j["radii"] = radii.vector();
  }
  json checks = json::array();
  for (const auto& c : rep.checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["passed"] = rep.passed();
  if (!o.json_path.empty()) write_file(o.json_path, ccycles::dump(j));
  if (!rep.passed()) {
    std::cerr << "verification failed:";
    for (const auto& c : rep.checks)
      if (!c.passed) std::cerr << " [" << c.name << "]";
    std::cerr << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int cmd_check_config(const Options& o) {
  const auto radii = radii_from(o);
  const ccycles::ReducedConfiguration config(parse_list(o.angles_list, "angle"));
  ccycles::require_matching(radii, config);
  const auto settings = settings_from(o);
  const auto g = ccycles::gradient(radii, config);
  const double gn = g.norm();
  const auto events = ccycles::classify_vertices(radii, config, settings.geometry_tol);
  json j{{"tool_version", ccycles::kToolVersion},
         {"radii", radii.vector()},
         {"angles", config.angles()},
         {"perimeter", ccycles::perimeter(radii, config)},
         {"gradient", std::vector<double>(g.data(), g.data() + g.size())},
         {"gradient_norm", gn},
         {"stationary", gn < 1e-10},
         {"vertex_events", events},
         {"tangential_distances", ccycles::tangential_distances(radii, config)},
         {"shape", std::string(ccycles::to_string(ccycles::shape_of(ccycles::make_circuit(radii, config),
                                                                    settings.geometry_tol)))}};
  if (gn < 1e-10) {
    const auto info = ccycles::morse_index(ccycles::hessian(radii, config), settings.degeneracy_threshold,
                                           radii.max());
    j["index"] = info.index;
    j["degenerate"] = info.degenerate;
  }
  emit(j, o);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical connecting cycles of concentric circles"};
  app.require_subcommand(1);
  Options o;

  auto add_radii = [&](CLI::App* sub) {
    sub->add_option("--radii", o.radii_list, "Comma-separated radii in circuit order");
    sub->add_option("--radius", o.radius, "One radius (repeatable)");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--grid", o.grid, "Grid seeds per angle")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  };

  auto* critical = app.add_subcommand("critical", "All critical points as JSON");
  add_radii(critical);
  add_solver(critical);
  critical->add_option("--json", o.json_path, "Also write the JSON to this file");
  critical->add_flag("--timing", o.timing, "Record wall-clock time in the output");

  auto* parades = app.add_subcommand("parades", "Every parade with its closed-form Hessian data");
  add_radii(parades);
  parades->add_option("--json", o.json_path, "Also write the JSON to this file");

  auto* closed = app.add_subcommand("closed-form", "Closed-form socle radii and circuits");
  add_radii(closed);
  closed->add_option("--json", o.json_path, "Also write the JSON to this file");

  auto* sweep = app.add_subcommand("sweep", "Track critical points while one radius varies");
  add_radii(sweep);
  add_solver(sweep);
  sweep->add_option("--vary", o.vary, "1-based index of the varying radius")->required();
  sweep->add_option("--from", o.from, "Start value")->required();
  sweep->add_option("--to", o.to, "End value")->required();
  sweep->add_option("--steps", o.steps, "Continuation steps");
  sweep->add_option("--csv", o.csv_path, "Samples CSV file (default: standard output)");
  sweep->add_option("--json", o.json_path, "Events JSON file");
  sweep->add_flag("--timing", o.timing, "Record wall-clock time in the events file");

  auto* verify = app.add_subcommand("verify", "Run the oracle checks");
  add_radii(verify);
  add_solver(verify);
  verify->add_flag("--pentagram", o.pentagram, "Check the pentagram on five equal circles");
  verify->add_option("--json", o.json_path, "Write the report as JSON");

  auto* check = app.add_subcommand("check-config", "Stationarity report for given angles");
  add_radii(check);
  check->add_option("--angles", o.angles_list, "Comma-separated alpha_1..alpha_{n-1} in radians")->required();
  check->add_option("--tol", o.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  check->add_option("--json", o.json_path, "Also write the JSON to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*critical) return cmd_critical(o);
    if (*parades) return cmd_parades(o);
    if (*closed) return cmd_closed_form(o);
    if (*sweep) return cmd_sweep(o);
    if (*verify) return cmd_verify(o);
    if (*check) return cmd_check_config(o);
  } catch (const ccycles::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
