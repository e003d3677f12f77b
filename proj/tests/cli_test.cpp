#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ccycles/serialization.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CCYCLES_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + "ccycles_cli_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CliTest, CriticalThreeCircles) {
  const auto r = run("critical --radii 1,2,3");
  ASSERT_EQ(r.code, 0);
  const auto j = ccycles::json::parse(r.out);
  EXPECT_EQ(j["points"].size(), 6u);
  EXPECT_EQ(j["euler_sum"], 0);
  EXPECT_TRUE(j["warnings"].empty());
  const auto cat = j.get<ccycles::CriticalCatalogue>();
  EXPECT_EQ(cat.morse_counts, (std::vector<int>{1, 3, 2}));
}

TEST(CliTest, RepeatedRadiusFlags) {
  const auto a = run("critical --radius 1 --radius 2 --radius 3");
  const auto b = run("critical --radii 1,2,3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, EqualRadiiWarn) {
  const auto r = run("critical --radii 1,1,1");
  ASSERT_EQ(r.code, 0);
  const auto j = ccycles::json::parse(r.out);
  ASSERT_FALSE(j["warnings"].empty());
  EXPECT_EQ(j["warnings"][0], "non-generic radii");
}

TEST(CliTest, ExampleShapes) {
  const auto r = run("critical --radii 3,2.53,3,4.6");
  ASSERT_EQ(r.code, 0);
  bool convex = false;
  bool aligned = false;
  const auto j = ccycles::json::parse(r.out);
  for (const auto& p : j["points"]) {
    convex |= p["shape"] == "convex";
    aligned |= p["shape"] == "partially-aligned";
  }
  EXPECT_TRUE(convex);
  EXPECT_TRUE(aligned);
}

TEST(CliTest, InvalidInputExitsTwo) {
  EXPECT_EQ(run("critical --radii 1,-2,3").code, 2);
  EXPECT_EQ(run("critical --radii 1,x,3").code, 2);
  EXPECT_EQ(run("critical --radii 1,2").code, 2);
  EXPECT_EQ(run("critical").code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
  EXPECT_EQ(run("sweep --radii 1,2,3 --vary 4 --from 1 --to 2").code, 2);
  EXPECT_EQ(run("sweep --radii 1,2,3 --vary 2 --from 2 --to 2").code, 2);
  EXPECT_EQ(run("sweep --radii 1,2,3 --vary 2 --from 0 --to 2").code, 2);
  EXPECT_EQ(run("check-config --radii 1,2,3 --angles 0.1").code, 2);
}

TEST(CliTest, OutputIsByteIdentical) {
  const auto a = run("critical --radii 1.3,2.2,3.7,0.9");
  const auto b = run("critical --radii 1.3,2.2,3.7,0.9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find("timing"), std::string::npos);
  EXPECT_NE(run("critical --radii 1,2,3 --timing").out.find("elapsed_seconds"), std::string::npos);
}

TEST(CliTest, JsonFileMatchesStdout) {
  const auto path = temp_path("critical.json");
  const auto r = run("critical --radii 1,2,3 --json " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(slurp(path), r.out);
}

TEST(CliTest, ParadesAndClosedForm) {
  const auto p = run("parades --radii 1,2,3,4.6");
  ASSERT_EQ(p.code, 0);
  const auto pj = ccycles::json::parse(p.out);
  ASSERT_EQ(pj["parades"].size(), 8u);
  EXPECT_EQ(pj["parades"][0]["signs"], "+++");
  EXPECT_EQ(pj["parades"][0]["index"], 0);

  const auto c = run("closed-form --radii 3,2.53,3,4.6");
  ASSERT_EQ(c.code, 0);
  const auto cj = ccycles::json::parse(c.out);
  EXPECT_NEAR(cj["convex_quad_inradius"].get<double>(), 2.171161252712580614, 1e-13);
  EXPECT_EQ(cj["partially_aligned"][1]["skip"], 2);
  EXPECT_EQ(cj["partially_aligned"][1]["intersections"], 2);

  const auto t = run("closed-form --radii 1,2,3");
  const auto tj = ccycles::json::parse(t.out);
  EXPECT_NEAR(tj["triangle_inradius"].get<double>(), 0.785001367109781573633, 1e-14);
  EXPECT_EQ(tj["three_circle_catalogue"].size(), 4u);
}

TEST(CliTest, CheckConfig) {
  const auto r = run("check-config --radii 1,1,1 --angles 2.0943951023931957,4.1887902047863914");
  ASSERT_EQ(r.code, 0);
  const auto j = ccycles::json::parse(r.out);
  EXPECT_TRUE(j["stationary"].get<bool>());
  EXPECT_NEAR(j["tangential_distances"][0].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(j["vertex_events"][0]["kind"], "reflection");

  const auto q = ccycles::json::parse(run("check-config --radii 1,2,3 --angles 0.7,2.1").out);
  EXPECT_FALSE(q["stationary"].get<bool>());
}

TEST(CliTest, VerifyPasses) {
  const auto a = run("verify --radii 1,2,3");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out.find("FAIL"), std::string::npos);
  const auto b = run("verify --radii 1,2,3,4.6");
  EXPECT_EQ(b.code, 0) << b.out;
  EXPECT_NE(b.out.find("PASS  no self-intersecting critical points"), std::string::npos);
  const auto c = run("verify --pentagram");
  EXPECT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("PASS  pentagram hessian is negative definite"), std::string::npos);
}

TEST(CliTest, SweepExampleEvents) {
  const auto csv = temp_path("sweep200.csv");
  const auto events = temp_path("events200.json");
  const auto r = run("sweep --radii 3,2.53,3,4.6 --vary 2 --from 2.53 --to 1.0 --steps 200 --csv " + csv +
                     " --json " + events);
  ASSERT_EQ(r.code, 0);
  const auto j = ccycles::json::parse(slurp(events));
  double tangency = 0.0;
  double pitchfork = 0.0;
  for (const auto& e : j["events"]) {
    if (e["kind"] == "Tangency") tangency = e["param"];
    if (e["kind"] == "Pitchfork") pitchfork = e["param"];
  }
  EXPECT_NEAR(tangency, 1.7, 0.05);
  EXPECT_NEAR(pitchfork, 1.13, 0.02);

  const auto events400 = temp_path("events400.json");
  ASSERT_EQ(run("sweep --radii 3,2.53,3,4.6 --vary 2 --from 2.53 --to 1.0 --steps 400 --csv " +
                temp_path("sweep400.csv") + " --json " + events400)
                .code,
            0);
  const auto j400 = ccycles::json::parse(slurp(events400));
  ASSERT_EQ(j400["events"].size(), j["events"].size());
  for (std::size_t i = 0; i < j["events"].size(); ++i) {
    EXPECT_EQ(j400["events"][i]["kind"], j["events"][i]["kind"]);
    EXPECT_NEAR(j400["events"][i]["param"].get<double>(), j["events"][i]["param"].get<double>(), 1e-4);
  }

  std::ifstream in(csv);
  const auto branches = ccycles::read_sweep_csv(in);
  EXPECT_EQ(branches.size(), j["branches"].size());
  std::ostringstream again;
  ccycles::SweepResult rebuilt;
  rebuilt.branches = branches;
  ccycles::write_sweep_csv(again, rebuilt, 4);
  EXPECT_EQ(again.str(), slurp(csv));
}

TEST(CliTest, SweepCsvOnStdout) {
  const auto r = run("sweep --radii 1,2,3 --vary 2 --from 1.5 --to 2.5 --steps 5");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  const auto branches = ccycles::read_sweep_csv(in);
  ASSERT_EQ(branches.size(), 6u);
  EXPECT_EQ(branches[0].samples.size(), 6u);
}

}  // namespace
