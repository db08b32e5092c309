// Command-line surface for the weighted Laplacian eigenvalue laboratory.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "lapden/density.hpp"
#include "lapden/eigsolve.hpp"
#include "lapden/io.hpp"
#include "lapden/mesh.hpp"
#include "lapden/verify.hpp"

using json = nlohmann::json;
using namespace lapden;

namespace {

struct RunConfig {
  std::string manifold = "sphere";
  int level = 5;
  int grid = 64;
  std::string rho = "const";
  double alpha = 2.0;
  int j = 10;
  int j_min = 8;
  int j_max = 64;
  int count = 5;
  double eig_tol = 1e-8;
  int quadrature_N = 256;
  std::vector<double> basepoint = {0.0, 0.0, 1.0};
  std::string output_dir;
  unsigned seed = 12345;
  bool vectors = false;

  Eigen::Vector3d basepoint_vec() const {
    return Eigen::Vector3d(basepoint[0], basepoint[1], basepoint[2]);
  }

  json to_json() const {
    return {{"manifold", manifold},   {"level", level},
            {"grid", grid},           {"rho", rho},
            {"alpha", alpha},         {"j", j},
            {"j_min", j_min},         {"j_max", j_max},
            {"count", count},         {"eig_tol", eig_tol},
            {"quadrature_N", quadrature_N},
            {"basepoint", basepoint}, {"output_dir", output_dir},
            {"seed", seed}};
  }

  std::string provenance() const { return to_json().dump(); }
};

Mesh make_mesh(const RunConfig& cfg) {
  if (cfg.manifold == "sphere") return build_icosphere(cfg.level);
  if (cfg.manifold == "hemisphere") return build_hemisphere(cfg.level);
  if (cfg.manifold == "torus") return build_torus_grid(cfg.grid);
  throw CLI::ValidationError("--manifold", "unknown manifold " + cfg.manifold);
}

DensityField make_density(const RunConfig& cfg, const Mesh& mesh) {
  if (cfg.rho == "const") return build_constant_density(mesh, cfg.alpha);
  if (cfg.rho == "family") {
    auto params = FamilyParams::lower_bound_family(cfg.alpha, cfg.j);
    return build_family_density(mesh, cfg.basepoint_vec(), params);
  }
  throw CLI::ValidationError("--rho", "unknown density " + cfg.rho);
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::path dir(cfg.output_dir);
  if (cfg.output_dir.empty() || !std::filesystem::is_directory(dir))
    throw std::invalid_argument("output dir does not exist: " + cfg.output_dir);
  return dir / name;
}

json eigresult_json(const EigenResult& r, bool vectors) {
  json out;
  out["eigenvalues"] = std::vector<double>(
      r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  out["residuals"] = std::vector<double>(
      r.residuals.data(), r.residuals.data() + r.residuals.size());
  out["iterations"] = r.iterations;
  out["method"] = r.method;
  if (vectors) {
    std::vector<std::vector<double>> vecs;
    for (int i = 0; i < r.eigenvectors.cols(); ++i)
      vecs.emplace_back(r.eigenvectors.col(i).data(),
                        r.eigenvectors.col(i).data() + r.eigenvectors.rows());
    out["eigenvectors"] = vecs;
  }
  return out;
}

int cmd_eig(const RunConfig& cfg) {
  auto mesh = make_mesh(cfg);
  auto field = make_density(cfg, mesh);
  auto problem = assemble_problem(mesh, field);
  auto result = solve_smallest(problem, cfg.count, cfg.eig_tol,
                               SolveStrategy::Auto, cfg.seed);

  json out;
  out["config"] = cfg.to_json();
  out["result"] = eigresult_json(result, cfg.vectors);
  out["lambda_tilde"] = lambda_tilde(mesh, field, result);
  atomic_write(out_path(cfg, "eig.json"), out.dump(2) + "\n");

  std::string csv = "# " + cfg.provenance() + "\nindex,eigenvalue,residual\n";
  for (int i = 0; i < result.eigenvalues.size(); ++i)
    csv += std::to_string(i) + ',' + fmt17(result.eigenvalues[i]) + ',' +
           fmt17(result.residuals[i]) + '\n';
  atomic_write(out_path(cfg, "eig.csv"), csv);

  std::cout << "eigenvalues:";
  for (int i = 0; i < result.eigenvalues.size(); ++i)
    std::cout << ' ' << result.eigenvalues[i];
  std::cout << "\nwrote " << out_path(cfg, "eig.json").string() << '\n';
  return 0;
}

int cmd_scan(const RunConfig& cfg) {
  if (cfg.manifold != "sphere")
    throw std::invalid_argument("scan requires --manifold sphere");
  if (cfg.j_max < cfg.j_min) throw std::invalid_argument("empty j range");
  if (cfg.j_min < 2) throw std::invalid_argument("scan requires j_min >= 2");

  verify::ScanConfig scfg;
  scfg.alpha = cfg.alpha;
  scfg.j_min = cfg.j_min;
  scfg.j_max = cfg.j_max;
  scfg.mesh_level = cfg.level;
  scfg.basepoint = cfg.basepoint_vec();
  scfg.eig_tol = cfg.eig_tol;
  scfg.seed = cfg.seed;

  std::cout << "j0 = ceil(4*alpha/kappa) = " << family_j0(cfg.alpha, scfg.kappa)
            << "\n";

  auto mesh = build_icosphere(cfg.level);
  auto rows = verify::theorem1_scan(scfg, mesh);
  atomic_write(out_path(cfg, "scan.csv"),
               verify::scan_csv(rows, cfg.provenance()));

  json jrows = json::array();
  for (const auto& r : rows) {
    json row = {{"j", r.j},
                {"ok", r.ok},
                {"lambda1", r.lambda1},
                {"mass", r.mass},
                {"normalization", r.normalization},
                {"lambda_tilde", r.lambda_tilde},
                {"bound_proof", r.bound_proof},
                {"bound_stated", r.bound_stated},
                {"hypothesis_margin", r.hypothesis_margin},
                {"excluded_fraction", r.excluded_fraction},
                {"residual_norm", r.residual_norm},
                {"iterations", r.iterations},
                {"method", r.method}};
    if (!r.ok) row["error"] = r.error;
    jrows.push_back(row);
  }
  json out = {{"config", cfg.to_json()}, {"rows", jrows}};
  atomic_write(out_path(cfg, "scan.json"), out.dump(2) + "\n");

  int succeeded = 0;
  for (const auto& r : rows)
    if (r.ok) ++succeeded;
  std::cout << succeeded << "/" << rows.size() << " rows succeeded, wrote "
            << out_path(cfg, "scan.csv").string() << '\n';
  return succeeded > 0 ? 0 : 3;
}

int verify_reilly(const RunConfig& cfg) {
  auto pairs = verify::random_trig_pairs(20, cfg.seed);
  double worst = 0.0, worst_pair = 0.0;
  bool ok = true;
  for (const auto& [u, h] : pairs)
    for (double alpha : {1.5, 2.0, 3.0}) {
      auto r = verify::reilly_residual(u, h, alpha, cfg.quadrature_N);
      worst = std::max(worst, r.residual);
      worst_pair = std::max(worst_pair, r.pair_disagreement);
      if (r.residual > 1e-8 * (1.0 + std::abs(r.lhs))) ok = false;
      if (r.pair_disagreement > 1e-9) ok = false;
    }
  std::cout << "reilly: max residual " << worst << ", max N/2N disagreement "
            << worst_pair << (ok ? " [ok]\n" : " [FAIL]\n");
  return ok ? 0 : 1;
}

int verify_bochner(const RunConfig& cfg) {
  auto pairs = verify::random_trig_pairs(20, cfg.seed);
  double worst = 0.0;
  bool ok = true;
  for (const auto& [u, h] : pairs)
    for (double alpha : {1.5, 2.0, 3.0}) {
      auto r = verify::bochner_residual(u, h, alpha, cfg.quadrature_N);
      worst = std::max(worst, r.max_residual);
      if (r.max_residual > 1e-8) ok = false;
    }
  // constant h: classical flat Bochner identity
  for (const auto& [u, h] : verify::random_trig_pairs(5, cfg.seed + 1)) {
    auto r = verify::bochner_residual(u, exact::ExactFunction::constant(0.7),
                                      2.0, cfg.quadrature_N);
    if (r.max_residual > 1e-9) ok = false;
  }
  std::cout << "bochner: max pointwise residual " << worst
            << (ok ? " [ok]\n" : " [FAIL]\n");
  return ok ? 0 : 1;
}

int verify_lemma3(const RunConfig& cfg) {
  auto mesh = build_icosphere(std::min(cfg.level, 5));
  bool ok = true;
  double worst_i = 1e300, worst_ii = 1e300, worst_gap = 0.0;
  for (double alpha : {1.5, 2.0, 3.0})
    for (int j = 2; j <= 100; ++j) {
      auto params = FamilyParams::lower_bound_family(alpha, j);
      auto rep = verify::lemma3_check(params, mesh, cfg.basepoint_vec());
      worst_i = std::min(worst_i, rep.margin_i);
      worst_ii = std::min(worst_ii, rep.margin_ii);
      worst_gap = std::max(worst_gap, rep.basepoint_gap_ii);
      if (!rep.pass_i || !rep.pass_ii) ok = false;
      if (rep.basepoint_gap_ii > 1e-10) ok = false;
    }
  std::cout << "lemma3: worst margin (i) " << worst_i << ", (ii) " << worst_ii
            << ", basepoint gap " << worst_gap
            << (ok ? " [ok]\n" : " [FAIL]\n");
  // single detailed report for the requested parameters
  auto rep = verify::lemma3_check(
      FamilyParams::lower_bound_family(cfg.alpha, cfg.j), mesh,
      cfg.basepoint_vec());
  std::cout << "lemma3 alpha=" << cfg.alpha << " j=" << cfg.j << ": (i) "
            << rep.margin_i << " (ii) " << rep.margin_ii << " (iii flat) "
            << rep.margin_iii_flat << " (iii sphere) " << rep.margin_iii_sphere
            << " excluded " << rep.excluded_fraction << "\n";
  return ok ? 0 : 1;
}

int verify_hypothesis(const RunConfig& cfg) {
  auto mesh = build_icosphere(std::min(cfg.level, 5));
  int j0 = family_j0(cfg.alpha, 1.0);
  std::cout << "j0 = " << j0 << "\n";
  for (int j = j0; j <= j0 + 16; j += 4) {
    auto params = FamilyParams::lower_bound_family(cfg.alpha, j);
    auto rep = verify::hypothesis_check(params, 0.5, mesh, cfg.basepoint_vec());
    std::cout << "j=" << j << " margin full " << rep.margin_full << " flat "
              << rep.margin_flat << " excluded " << rep.excluded_fraction
              << "\n";
  }
  // measured margins are informational; the run fails only on errors
  return 0;
}

int verify_scale(const RunConfig& cfg) {
  auto mesh = build_icosphere(std::min(cfg.level, 4));
  auto field = build_family_density(
      mesh, cfg.basepoint_vec(),
      FamilyParams::lower_bound_family(cfg.alpha, cfg.j));
  double dev = verify::scale_invariance_check(mesh, field, {0.1, 10.0});
  bool ok = dev <= 1e-10;
  std::cout << "scale: max relative deviation " << dev
            << (ok ? " [ok]\n" : " [FAIL]\n");
  return ok ? 0 : 1;
}

int cmd_export(const RunConfig& cfg, const std::string& off,
               const std::string& stiffness, const std::string& mass_path,
               const std::string& density) {
  auto mesh = make_mesh(cfg);
  if (!off.empty()) {
    std::ostringstream os;
    write_off(mesh, os);
    atomic_write(off, os.str());
  }
  if (!stiffness.empty() || !mass_path.empty() || !density.empty()) {
    auto field = make_density(cfg, mesh);
    if (!stiffness.empty()) {
      std::ostringstream os;
      write_matrix_market(assemble_stiffness(mesh, field.rho_alpha), os);
      atomic_write(stiffness, os.str());
    }
    if (!mass_path.empty()) {
      std::ostringstream os;
      write_matrix_market_diagonal(assemble_mass(mesh, field.rho), os);
      atomic_write(mass_path, os.str());
    }
    if (!density.empty()) {
      std::ostringstream os;
      write_density_csv(field, os);
      atomic_write(density, os.str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the weighted Laplacian eigenproblem"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifold", cfg.manifold)
        ->check(CLI::IsMember({"sphere", "torus", "hemisphere"}));
    sub->add_option("--level", cfg.level)->check(CLI::Range(0, 8));
    sub->add_option("--grid", cfg.grid);
    sub->add_option("--alpha", cfg.alpha);
    sub->add_option("--j", cfg.j);
    sub->add_option("--tol", cfg.eig_tol);
    sub->add_option("--basepoint", cfg.basepoint)->expected(3);
    sub->add_option("--seed", cfg.seed);
  };

  auto* eig = app.add_subcommand("eig", "solve one eigenproblem");
  add_common(eig);
  eig->add_option("--rho", cfg.rho)->check(CLI::IsMember({"const", "family"}));
  eig->add_option("--count", cfg.count);
  eig->add_option("--out", cfg.output_dir);
  eig->add_flag("--vectors", cfg.vectors);

  auto* scan = app.add_subcommand("scan", "lower-bound measurement sweep");
  add_common(scan);
  scan->add_option("--j-min", cfg.j_min);
  scan->add_option("--j-max", cfg.j_max);
  scan->add_option("--out", cfg.output_dir);

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  add_common(ver);
  std::string which;
  ver->add_option("which", which, "reilly|bochner|lemma3|hypothesis|scale")
      ->required();
  ver->add_option("--grid-n", cfg.quadrature_N);

  auto* exp = app.add_subcommand("export", "mesh and operator export");
  add_common(exp);
  exp->add_option("--rho", cfg.rho)->check(CLI::IsMember({"const", "family"}));
  std::string off_path, stiff_path, mass_path, density_path;
  exp->add_option("--off", off_path);
  exp->add_option("--stiffness", stiff_path);
  exp->add_option("--mass", mass_path);
  exp->add_option("--density", density_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(eig)) return cmd_eig(cfg);
    if (app.got_subcommand(scan)) return cmd_scan(cfg);
    if (app.got_subcommand(exp))
      return cmd_export(cfg, off_path, stiff_path, mass_path, density_path);
    if (app.got_subcommand(ver)) {
      if (which == "reilly") return verify_reilly(cfg);
      if (which == "bochner") return verify_bochner(cfg);
      if (which == "lemma3") return verify_lemma3(cfg);
      if (which == "hypothesis") return verify_hypothesis(cfg);
      if (which == "scale") return verify_scale(cfg);
      std::cerr << "unknown verification suite: " << which << '\n';
      return 2;
    }
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
