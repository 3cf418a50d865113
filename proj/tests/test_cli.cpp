#include "doctest.h"

#include "ctoda/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ctoda;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / "ctoda_test_cli") {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("lie info golden output") {
  const auto r = cli({"lie", "info", "A2"});
  CHECK(r.code == 0);
  const json golden = json::parse(R"J({
    "affine_label": "A2(1)", "comarks": [1, 1, 1], "coxeter_number": 3, "dimension": 8,
    "exponents": [1, 2], "marks": [1, 1, 1], "positive_root_count": 3, "rank": 2,
    "type": "A2", "x_coefficients": [1.0, 1.0]})J");
  CHECK(r.j() == golden);

  const auto g2 = cli({"lie", "info", "G2"}).j();
  CHECK(g2["exponents"] == json::array({1, 5}));
  CHECK(g2["coxeter_number"] == 6);
  CHECK(g2["x_coefficients"] == json::array({3.0, 5.0}));

  const auto bad = cli({"lie", "info", "Q9"});
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("lie restrict golden output") {
  const auto r = cli({"lie", "restrict", "E6"});
  CHECK(r.code == 0);
  const json golden = json::parse(R"J({
    "gcm": [[2, 0, -1, 0, 0], [0, 2, 0, -1, 0], [-1, 0, 2, 0, -1], [0, -1, 0, 2, -2], [0, 0, -1, -1, 2]],
    "label": "F4(1)", "nu": [5, 1, 4, 3, 2, 0], "orbits": [[0, 5], [1], [2, 4], [3]],
    "r_tilde": [8.0, 11.0, 15.0, 21.0], "type": "E6"})J");
  CHECK(r.j()["label"] == "F4(1)");
  CHECK(r.j() == golden);
  CHECK(cli({"lie", "restrict", "A3"}).j()["label"] == "C2(1)");
  CHECK(cli({"lie", "restrict", "B2"}).j()["label"] == "B2(1)");
}

TEST_CASE("lie check") {
  const auto r = cli({"lie", "check", "B3"});
  CHECK(r.code == 0);
  const auto j = r.j();
  CHECK(j["passed"] == true);
  CHECK(j["reports"].size() == 1);
  CHECK(j["reports"][0]["jacobi_defect"] == 0);
  CHECK(j["reports"][0]["dimension"] == 21);
}

TEST_CASE("solve, verify and export round trip") {
  TempDir dir;
  const std::string field = dir / "omega.bin";
  const auto s = cli({"toda", "solve", "--type", "A1", "--grid", "32x32", "--q", "const:1.0", "--init", "perturbed",
                      "--seed", "3", "--out", field});
  REQUIRE(s.code == 0);
  const auto sj = s.j();
  CHECK(sj["converged"] == true);
  CHECK(sj["residual"].get<double>() < 1e-10);

  const auto manifest = json::parse(std::ifstream(manifest_path(field)));
  CHECK(manifest["command"] == "toda solve");
  CHECK(manifest["config"]["type"] == "A1");
  CHECK(manifest["config"]["nx"] == 32);
  CHECK(manifest["conventions"].contains("root_order"));
  CHECK(manifest["residual"] == sj["residual"]);
  CHECK(manifest["sigma_defect"] == sj["sigma_defect"]);
  CHECK(manifest["curvature_norm"] == sj["curvature_norm"]);

  const auto v = cli({"toda", "verify", field});
  CHECK(v.code == 0);
  const auto vj = v.j();
  CHECK(vj["reproduced"] == true);
  CHECK(vj["residual"].get<double>() == sj["residual"].get<double>());
  CHECK(vj["curvature_norm"].get<double>() == sj["curvature_norm"].get<double>());
  CHECK(vj["sigma_defect"].get<double>() == sj["sigma_defect"].get<double>());
  CHECK(cli({"toda", "verify", field}).out == v.out);

  const auto p = cli({"export-plot", field, "--out", dir / "plot.csv"});
  CHECK(p.code == 0);
  std::ifstream csv(dir / "plot.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "ix,iy,x,y,alpha1,residual");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 32 * 32);

  // a tampered field no longer reproduces the manifest
  auto f = read_field(field, config_from_json(manifest["config"]).grid);
  f.values[7] += 1e-3;
  write_field(field, f);
  CHECK(cli({"toda", "verify", field}).code == 1);

  CHECK(cli({"toda", "verify", dir / "missing.bin"}).code == 2);
}

TEST_CASE("config files and CSV output") {
  TempDir dir;
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# A2 run\n\ntype = A2\ngrid=16x16\nq=const:0.5+0.5i\ninit=perturbed\nseed=7\ntol=1e-11\n";
  }
  const std::string field = dir / "omega.csv";
  const auto r = cli({"toda", "solve", "--config", dir / "run.cfg", "--seed", "9", "--out", field});
  REQUIRE(r.code == 0);
  const auto m = json::parse(std::ifstream(manifest_path(field)));
  CHECK(m["config"]["type"] == "A2");
  CHECK(m["config"]["seed"] == 9);  // flag overrides the file
  CHECK(m["config"]["tol"] == 1e-11);
  CHECK(m["config"]["init"] == "perturbed");
  CHECK(cli({"toda", "verify", field}).code == 0);

  // restart from the written field
  const auto again = cli({"toda", "solve", "--type", "A2", "--grid", "16", "--q", "const:0.5+0.5i", "--init-file",
                          field, "--out", dir / "again.bin"});
  CHECK(again.code == 0);
  CHECK(again.j()["iterations"] == 0);

  std::ofstream(dir / "bad.cfg") << "type A2\n";
  CHECK(cli({"toda", "solve", "--config", dir / "bad.cfg", "--out", dir / "x.bin"}).code == 2);
  std::ofstream(dir / "unknown.cfg") << "colour=blue\n";
  CHECK(cli({"toda", "solve", "--config", dir / "unknown.cfg", "--type", "A1", "--out", dir / "x.bin"}).code == 2);

  const auto v = read_config_tokens(dir / "run.cfg");
  CHECK(v.front() == "--type=A2");
  CHECK(v.size() == 6);
}

TEST_CASE("non-convergence is a verification failure") {
  TempDir dir;
  const auto r = cli({"toda", "solve", "--type", "A1", "--grid", "16", "--init", "zero", "--max-iter", "0", "--out",
                      dir / "o.bin"});
  CHECK(r.code == 1);
  CHECK(r.j()["converged"] == false);
}

TEST_CASE("conn check") {
  const auto r = cli({"conn", "check", "--type", "A2", "--grid", "32", "--q", "const:1.0"});
  CHECK(r.code == 0);
  const auto j = r.j();
  CHECK(j["passed"] == true);
  CHECK(j["refinement_ratio"].get<double>() == doctest::Approx(4.0).epsilon(0.2));
  CHECK(j["gauge_covariance_defect"].get<double>() < 1e-10);
  CHECK(j["oracle_curvature_norm"].get<double>() < 1e-10);
}

TEST_CASE("usage errors") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{}, {"bogus"}, {"lie"}, {"lie", "info"}, {"toda", "solve", "--type", "A2"},
        {"toda", "solve", "--type", "A2", "--grid", "abc", "--out", "x.bin"},
        {"toda", "solve", "--type", "A2", "--grid", "4", "--out", "x.bin"},
        {"toda", "solve", "--type", "A2", "--damping", "2", "--out", "x.bin"},
        {"toda", "solve", "--type", "A2", "--q", "nonsense", "--out", "x.bin"},
        {"conn", "check", "--type", "A2", "--frobnicate"}}) {
    CAPTURE(args.size());
    const auto r = cli(args);
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }
  const auto usage = cli({"toda", "solve"});
  CHECK(usage.err.find("--type") != std::string::npos);

  const auto help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("export-plot") != std::string::npos);

  ::setenv("TODA_THREADS", "-3", 1);
  CHECK(cli({"lie", "info", "A1"}).code == 2);
  ::unsetenv("TODA_THREADS");
}

TEST_CASE("configuration JSON round trip") {
  SolverConfig c;
  c.type = {'B', 3};
  c.grid = DomainGrid::rectangle(17, 19, 0.3, 0.7);
  c.q = QDifferential::polynomial({{0.1, 0.2}, {0.3, -0.4}});
  c.tol = 3e-11;
  c.seed = 42;
  c.init = InitKind::perturbed;
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.type == c.type);
  CHECK(back.grid == c.grid);
  CHECK(back.q(Complex(0.2, 0.1)) == c.q(Complex(0.2, 0.1)));
  CHECK(back.tol == c.tol);
  CHECK(back.seed == 42);
  CHECK(back.init == InitKind::perturbed);
  CHECK_THROWS_AS(config_from_json(json{{"type", "A2"}}), std::invalid_argument);
}
