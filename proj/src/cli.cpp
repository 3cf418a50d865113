#include "ctoda/cli.hpp"

#include "ctoda/connection.hpp"
#include "ctoda/parallel.hpp"
#include "ctoda/restriction.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace ctoda {

using nlohmann::json;

namespace {

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_double(q));
  return a;
}

DomainGrid make_grid(Topology topo, const std::string& spec, double lx, double ly) {
  int nx = 0, ny = 0;
  const auto x = spec.find('x');
  try {
    std::size_t used = 0;
    nx = std::stoi(spec.substr(0, x), &used);
    if (used != spec.substr(0, x).size()) throw std::invalid_argument("");
    ny = nx;
    if (x != std::string::npos) {
      const std::string rest = spec.substr(x + 1);
      ny = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("");
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like 64 or 64x32: " + spec);
  }
  const DomainGrid g = topo == Topology::torus ? DomainGrid::torus(nx, ny, lx, ly) : DomainGrid::rectangle(nx, ny, lx, ly);
  g.validate();
  return g;
}

struct FieldSummary {
  double residual = 0.0;
  double curvature_norm = 0.0;
  double sigma_defect = 0.0;
};

FieldSummary summarize(const HFieldGrid& omega, const SolverConfig& cfg, const ChevalleyAlgebra& alg,
                       const PrincipalSL2& sl2) {
  FieldSummary s;
  const TodaProblem problem(alg.root_system(), cfg.grid, cfg.q);
  std::vector<double> r;
  problem.residual(omega.values, r);
  s.residual = problem.residual_norm(r);
  const auto conn = build_toda_connection(omega, cfg.q, alg, sl2, Gauge::toda);
  s.curvature_norm = max_norm(cfg.grid, curvature(alg, conn));
  s.sigma_defect = sigma_symmetry_defect(omega, alg, sl2);
  return s;
}

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::invalid_argument("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + p.string() + ": " + e.what());
  }
}

// Smooth nu-symmetric perturbation of a base field, periodic over the grid extent.
HFieldGrid smooth_field(const HFieldGrid& base, const DiagramAutomorphism& nu, double eps) {
  HFieldGrid f = base;
  const auto& g = base.grid;
  const double lx = g.topology == Topology::torus ? g.dx * g.nx : g.dx * (g.nx - 1);
  const double ly = g.topology == Topology::torus ? g.dy * g.ny : g.dy * (g.ny - 1);
  const double kx = 2.0 * std::numbers::pi / lx, ky = 2.0 * std::numbers::pi / ly;
  for (int n = 0; n < g.nodes(); ++n)
    for (int i = 0; i < f.rank; ++i) {
      const int k = std::min(i, nu.perm[i]) + 1;
      f(n, i) += eps * (std::sin(kx * g.x(n) + 0.3 * k) * std::cos(ky * g.y(n)) / k + 0.5 * std::cos(kx * g.x(n) + ky * g.y(n) + k));
    }
  return f;
}

// max over the norm region of F + R (F the Toda-gauge curvature, R the Toda residual).
double curvature_residual_gap(const HFieldGrid& omega, const QDifferential& q, const ChevalleyAlgebra& alg,
                              const PrincipalSL2& sl2) {
  const auto conn = build_toda_connection(omega, q, alg, sl2, Gauge::toda);
  auto f = curvature(alg, conn);
  const auto r = higgs_residual(omega, q, alg, sl2);
  for (int n = 0; n < omega.grid.nodes(); ++n)
    for (int i = 0; i < alg.rank(); ++i) f[n][i] += r(n, i);
  return max_norm(omega.grid, f);
}

}  // namespace

// ---------------------------------------------------------------------------

json lie_info_json(const RootSystem& rs) {
  const auto aff = affine_cartan(rs);
  return json{{"type", rs.type().name()},
              {"rank", rs.rank()},
              {"dimension", rs.dimension()},
              {"exponents", exponents(rs)},
              {"coxeter_number", coxeter_number(rs)},
              {"x_coefficients", rationals(x_coefficients(rs))},
              {"marks", aff.marks},
              {"comarks", aff.comarks},
              {"positive_root_count", rs.positive_count()},
              {"affine_label", aff.kac_label}};
}

json lie_restrict_json(const RootSystem& rs) {
  const auto rest = restrict(rs);
  return json{{"type", rs.type().name()},
              {"nu", rest.nu.perm},
              {"orbits", rest.orbits},
              {"gcm", rest.gcm},
              {"r_tilde", rest.r_tilde},
              {"label", rest.label}};
}

json config_to_json(const SolverConfig& cfg) {
  const auto& g = cfg.grid;
  return json{{"type", cfg.type.name()},
              {"topology", to_string(g.topology)},
              {"nx", g.nx},
              {"ny", g.ny},
              {"dx", g.dx},
              {"dy", g.dy},
              {"q", cfg.q.to_string()},
              {"tol", cfg.tol},
              {"max_iter", cfg.max_iter},
              {"damping", cfg.damping},
              {"init", to_string(cfg.init)},
              {"seed", cfg.seed},
              {"amplitude", cfg.amplitude},
              {"patience", cfg.patience}};
}

SolverConfig config_from_json(const json& j) {
  try {
    SolverConfig cfg;
    cfg.type = LieType::parse(j.at("type").get<std::string>());
    cfg.grid.topology = parse_topology(j.at("topology").get<std::string>());
    cfg.grid.nx = j.at("nx").get<int>();
    cfg.grid.ny = j.at("ny").get<int>();
    cfg.grid.dx = j.at("dx").get<double>();
    cfg.grid.dy = j.at("dy").get<double>();
    cfg.q = QDifferential::parse(j.at("q").get<std::string>());
    cfg.tol = j.at("tol").get<double>();
    cfg.max_iter = j.at("max_iter").get<int>();
    cfg.damping = j.at("damping").get<double>();
    cfg.init = parse_init(j.at("init").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.amplitude = j.at("amplitude").get<double>();
    cfg.patience = j.at("patience").get<int>();
    cfg.grid.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad configuration: ") + e.what());
  }
}

json conventions_json() {
  return json{{"node_numbering", "Bourbaki, 0-based"},
              {"cartan", "A[i][j] = alpha_j(h_i)"},
              {"root_order", "height, then descending lexicographic simple-root coordinates"},
              {"field_basis", "coroots h_1..h_l, node-major, node = iy * nx + ix"},
              {"residual", "-(1/2) lap5 Omega + sum r_i e^{2 alpha_i(Omega)} h_i + |q|^2 e^{-2 delta(Omega)} h_{-delta}"},
              {"residual_norm", "max over unpinned nodes and coordinates"}};
}

std::vector<std::string> read_config_tokens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": bad key");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

void write_field(const std::filesystem::path& path, const HFieldGrid& field) {
  if (path.extension() == ".csv")
    write_grid_csv(path, field);
  else
    write_grid_binary(path, field);
}

HFieldGrid read_field(const std::filesystem::path& path, const DomainGrid& grid) {
  return to_field(path.extension() == ".csv" ? read_grid_csv(path) : read_grid_binary(path), grid);
}

std::filesystem::path manifest_path(const std::filesystem::path& field_path) {
  return field_path.string() + ".manifest.json";
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyclic Higgs bundles and affine Toda equations", "ctoda"};
  app.require_subcommand(1);

  // lie
  auto* lie = app.add_subcommand("lie", "Root data and Lie algebra structure");
  lie->require_subcommand(1);
  std::string type_name;
  auto* lie_info = lie->add_subcommand("info", "Exponents, Coxeter number, x and affine data as JSON");
  lie_info->add_option("type", type_name, "Lie type, e.g. A2, E6")->required();
  auto* lie_check = lie->add_subcommand("check", "Structure invariant suite (type or 'all')");
  lie_check->add_option("type", type_name, "Lie type or 'all'")->required();
  auto* lie_restrict = lie->add_subcommand("restrict", "Restricted affine diagram under the diagram automorphism");
  lie_restrict->add_option("type", type_name, "Lie type")->required();

  // toda
  auto* toda = app.add_subcommand("toda", "Affine Toda solver");
  toda->require_subcommand(1);
  auto* solve_cmd = toda->add_subcommand("solve", "Solve on a grid and write the field plus a manifest");
  solve_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string grid_spec = "64", topology = "torus", q_spec = "const:1", init = "constant-oracle", out_path,
              init_file, config_path;
  double lx = 1.0, ly = 1.0;
  SolverConfig cfg;
  solve_cmd->add_option("--config", config_path, "key=value file; keys are long flag names, flags win");
  solve_cmd->add_option("--type", type_name, "Lie type")->required();
  solve_cmd->add_option("--grid", grid_spec, "NX or NXxNY")->capture_default_str();
  solve_cmd->add_option("--topology", topology, "torus or rectangle")->capture_default_str();
  solve_cmd->add_option("--lx", lx, "domain width")->capture_default_str();
  solve_cmd->add_option("--ly", ly, "domain height")->capture_default_str();
  solve_cmd->add_option("--q", q_spec, "const:<complex> or poly:c0,c1,...")->capture_default_str();
  solve_cmd->add_option("--tol", cfg.tol, "residual tolerance (max norm)")->capture_default_str();
  solve_cmd->add_option("--max-iter", cfg.max_iter, "Newton iterations")->capture_default_str();
  solve_cmd->add_option("--damping", cfg.damping, "largest step fraction")->capture_default_str();
  solve_cmd->add_option("--init", init, "zero, constant-oracle, perturbed or file")->capture_default_str();
  solve_cmd->add_option("--seed", cfg.seed, "seed for perturbed init")->capture_default_str();
  solve_cmd->add_option("--amplitude", cfg.amplitude, "perturbation amplitude")->capture_default_str();
  solve_cmd->add_option("--patience", cfg.patience, "iterations without progress")->capture_default_str();
  solve_cmd->add_option("--init-file", init_file, "initial field (.csv or binary); implies --init file");
  solve_cmd->add_option("--out", out_path, "output field (.csv or binary)")->required();

  auto* verify_cmd = toda->add_subcommand("verify", "Recompute residual, curvature and sigma defect of a field");
  std::string field_path, manifest_arg;
  verify_cmd->add_option("field", field_path, "field file written by solve")->required();
  verify_cmd->add_option("--manifest", manifest_arg, "manifest (default <field>.manifest.json)");

  // conn
  auto* conn = app.add_subcommand("conn", "Flat connection checks");
  conn->require_subcommand(1);
  auto* conn_check = conn->add_subcommand("check", "Curvature vs Toda residual, refinement and gauge covariance");
  std::uint64_t conn_seed = 1;
  conn_check->add_option("--type", type_name, "Lie type")->required();
  conn_check->add_option("--grid", grid_spec, "NX or NXxNY (refined once by 2)")->capture_default_str();
  conn_check->add_option("--topology", topology, "torus or rectangle")->capture_default_str();
  conn_check->add_option("--lx", lx, "domain width")->capture_default_str();
  conn_check->add_option("--ly", ly, "domain height")->capture_default_str();
  conn_check->add_option("--q", q_spec, "holomorphic differential")->capture_default_str();
  conn_check->add_option("--seed", conn_seed, "seed of the random gauge field")->capture_default_str();

  // export-plot
  auto* plot = app.add_subcommand("export-plot", "Per-node CSV of alpha_i(Omega) and the residual norm");
  std::string plot_out;
  plot->add_option("field", field_path, "field file written by solve")->required();
  plot->add_option("--manifest", manifest_arg, "manifest (default <field>.manifest.json)");
  plot->add_option("--out", plot_out, "CSV path")->required();

  try {
    std::vector<std::string> argv = args;
    // Splice config tokens in front of the solve flags so explicit flags take precedence.
    for (std::size_t k = 0; k + 1 < argv.size(); ++k)
      if (argv[k] == "toda" && argv[k + 1] == "solve") {
        for (std::size_t m = k + 2; m < argv.size(); ++m) {
          std::string path;
          if (argv[m] == "--config" && m + 1 < argv.size()) path = argv[m + 1];
          else if (argv[m].rfind("--config=", 0) == 0) path = argv[m].substr(9);
          if (path.empty()) continue;
          const auto tokens = read_config_tokens(path);
          argv.insert(argv.begin() + static_cast<std::ptrdiff_t>(k + 2), tokens.begin(), tokens.end());
          break;
        }
        break;
      }
    std::reverse(argv.begin(), argv.end());
    app.parse(std::move(argv));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* ctx = &app;
    for (const CLI::App* sub = ctx; sub;) {
      ctx = sub;
      const auto subs = sub->get_subcommands();
      sub = subs.empty() ? nullptr : subs.front();
    }
    err << ctx->help();
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    thread_count();  // rejects a malformed TODA_THREADS up front

    if (*lie_info) {
      out << lie_info_json(RootSystem(LieType::parse(type_name))).dump(2) << "\n";
      return 0;
    }
    if (*lie_restrict) {
      out << lie_restrict_json(RootSystem(LieType::parse(type_name))).dump(2) << "\n";
      return 0;
    }
    if (*lie_check) {
      std::vector<LieType> types;
      if (type_name == "all")
        types = all_supported_types();
      else
        types.push_back(LieType::parse(type_name));
      json reports = json::array();
      bool all_ok = true;
      for (const auto& t : types) {
        const ChevalleyAlgebra alg{RootSystem(t)};
        const auto sl2 = build_principal_sl2(alg);
        const auto rep = check_structure(alg, sl2);
        const bool ok = rep.passed();
        all_ok = all_ok && ok;
        reports.push_back({{"type", t.name()},
                           {"passed", ok},
                           {"jacobi_defect", rep.jacobi_defect},
                           {"antisymmetry_defect", rep.antisymmetry_defect},
                           {"killing_invariance_defect", rep.killing_invariance_defect},
                           {"x_root_failures", rep.x_root_failures},
                           {"dimension", rep.dimension},
                           {"dim_from_exponents", rep.dim_from_exponents},
                           {"sl2_defect", rep.sl2_defect},
                           {"highest_weight_defect", rep.highest_weight_defect},
                           {"ad_x_spectrum_ok", rep.ad_x_spectrum_ok},
                           {"coxeter_ok", rep.coxeter_ok}});
      }
      out << json{{"passed", all_ok}, {"reports", reports}}.dump(2) << "\n";
      return all_ok ? 0 : 1;
    }

    if (*solve_cmd) {
      cfg.type = LieType::parse(type_name);
      cfg.grid = make_grid(parse_topology(topology), grid_spec, lx, ly);
      cfg.q = QDifferential::parse(q_spec);
      cfg.init = parse_init(init);
      if (!init_file.empty()) {
        cfg.init = InitKind::file;
        cfg.init_field = read_field(init_file, cfg.grid);
      }
      const RootSystem rs(cfg.type);
      const ChevalleyAlgebra alg(rs);
      const auto sl2 = build_principal_sl2(alg);
      Solution sol;
      try {
        sol = solve(cfg, alg, sl2);
      } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
      }
      write_field(out_path, sol.omega);
      const auto s = summarize(sol.omega, cfg, alg, sl2);
      json cfg_json = config_to_json(cfg);
      if (!init_file.empty()) cfg_json["init_file"] = init_file;
      const json manifest{{"command", "toda solve"},
                          {"config", cfg_json},
                          {"conventions", conventions_json()},
                          {"output", out_path},
                          {"iterations", sol.iterations},
                          {"converged", sol.converged},
                          {"diagnostics", sol.diagnostics},
                          {"residual_history", sol.residual_history},
                          {"residual", s.residual},
                          {"curvature_norm", s.curvature_norm},
                          {"sigma_defect", s.sigma_defect}};
      std::ofstream mf(manifest_path(out_path));
      if (!mf) throw std::invalid_argument("cannot write manifest next to " + out_path);
      mf << manifest.dump(2) << "\n";
      out << json{{"iterations", sol.iterations},
                  {"converged", sol.converged},
                  {"residual", s.residual},
                  {"sigma_defect", s.sigma_defect},
                  {"curvature_norm", s.curvature_norm},
                  {"output", out_path},
                  {"manifest", manifest_path(out_path).string()}}
                 .dump(2)
          << "\n";
      if (!sol.converged) err << "solver did not converge: " << sol.diagnostics << "\n";
      return sol.converged ? 0 : 1;
    }

    if (*verify_cmd || *plot) {
      const std::filesystem::path mpath = manifest_arg.empty() ? manifest_path(field_path) : std::filesystem::path(manifest_arg);
      const json manifest = read_json(mpath);
      const SolverConfig vcfg = config_from_json(manifest.at("config"));
      const HFieldGrid omega = read_field(field_path, vcfg.grid);
      if (omega.rank != vcfg.type.rank) throw std::invalid_argument("field rank does not match the manifest type");
      const RootSystem rs(vcfg.type);
      const ChevalleyAlgebra alg(rs);
      const auto sl2 = build_principal_sl2(alg);

      if (*plot) {
        const TodaProblem problem(rs, vcfg.grid, vcfg.q);
        std::vector<double> r;
        problem.residual(omega.values, r);
        std::ofstream csv(plot_out);
        if (!csv) throw std::invalid_argument("cannot write " + plot_out);
        csv << "ix,iy,x,y";
        for (int i = 1; i <= rs.rank(); ++i) csv << ",alpha" << i;
        csv << ",residual\n" << std::setprecision(17);
        const auto& tc = problem.coefficients();
        for (int n = 0; n < vcfg.grid.nodes(); ++n) {
          csv << vcfg.grid.ix(n) << "," << vcfg.grid.iy(n) << "," << vcfg.grid.x(n) << "," << vcfg.grid.y(n);
          for (int i = 0; i < rs.rank(); ++i) csv << "," << tc.alpha(i, omega.at(n));
          double m = 0.0;
          for (int i = 0; i < rs.rank(); ++i) m = std::max(m, std::abs(r[static_cast<std::size_t>(n) * rs.rank() + i]));
          csv << "," << m << "\n";
        }
        out << json{{"output", plot_out}, {"nodes", vcfg.grid.nodes()}}.dump(2) << "\n";
        return 0;
      }

      const auto s = summarize(omega, vcfg, alg, sl2);
      const double reported = manifest.at("residual").get<double>();
      const bool reproduced = s.residual == reported;
      const bool within_tol = s.residual <= vcfg.tol;
      out << json{{"residual", s.residual},
                  {"reported_residual", reported},
                  {"reproduced", reproduced},
                  {"within_tolerance", within_tol},
                  {"sigma_defect", s.sigma_defect},
                  {"curvature_norm", s.curvature_norm}}
                 .dump(2)
          << "\n";
      return reproduced && within_tol ? 0 : 1;
    }

    if (*conn_check) {
      const RootSystem rs(LieType::parse(type_name));
      const ChevalleyAlgebra alg(rs);
      const auto sl2 = build_principal_sl2(alg);
      const auto q = QDifferential::parse(q_spec);
      const auto topo = parse_topology(topology);
      const auto nu = diagram_automorphism(rs);
      const DomainGrid g1 = make_grid(topo, grid_spec, lx, ly);
      const DomainGrid g2 = make_grid(topo, std::to_string(2 * g1.nx) + "x" + std::to_string(2 * g1.ny), lx, ly);

      SolverConfig base;
      base.type = rs.type();
      base.q = q;
      base.init = InitKind::constant_oracle;
      json report;
      std::vector<double> gaps;
      double covariance = 0.0, higgs_defect = 0.0;
      for (const DomainGrid* gp : {&g1, &g2}) {
        const DomainGrid& g = *gp;
        base.grid = g;
        const HFieldGrid omega = smooth_field(initial_field(base, rs), nu, 0.1);
        gaps.push_back(curvature_residual_gap(omega, q, alg, sl2));
        if (gp != &g1) continue;
        const auto toda_conn = build_toda_connection(omega, q, alg, sl2, Gauge::toda);
        const auto f = curvature(alg, toda_conn);
        const auto fh = curvature(alg, build_toda_connection(omega, q, alg, sl2, Gauge::higgs));
        HFieldGrid h(g, rs.rank());
        std::mt19937_64 rng(conn_seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : h.values) v = u(rng);
        const auto ft = curvature(alg, gauge_transform(alg, toda_conn, h));
        for (int n = 0; n < g.nodes(); ++n) {
          if (!g.in_norm_region(n)) continue;
          covariance = std::max(covariance, (ft[n] - ad_exp_cartan(alg, h.at(n), f[n])).cwiseAbs().maxCoeff());
          higgs_defect = std::max(higgs_defect, (fh[n] - ad_exp_cartan(alg, omega.at(n), f[n])).cwiseAbs().maxCoeff());
        }
      }
      const double ratio = gaps[0] / gaps[1];
      const bool ok = covariance <= 1e-10 && higgs_defect <= 1e-10 && ratio >= 3.2 && ratio <= 4.8;
      report = {{"type", rs.type().name()},
                {"grids", {g1.nx, g2.nx}},
                {"curvature_residual_gap", gaps},
                {"refinement_ratio", ratio},
                {"gauge_covariance_defect", covariance},
                {"higgs_gauge_defect", higgs_defect},
                {"passed", ok}};
      if (q.kind == QDifferential::Kind::constant && std::norm(q(0.0)) > 0.0) {
        base.grid = g1;
        const auto oracle = initial_field(base, rs);
        report["oracle_curvature_norm"] =
            max_norm(g1, curvature(alg, build_toda_connection(oracle, q, alg, sl2, Gauge::toda)));
      }
      out << report.dump(2) << "\n";
      return ok ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace ctoda
