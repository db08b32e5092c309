// Acceptance suite: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "lapden/verify.hpp"

using namespace lapden;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Sphere spectrum oracle: level-5 icosphere, rho == 1 -> (0, 2, 2, 2, 6).
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  auto mesh = build_icosphere(5);
  auto problem = assemble_problem(mesh, build_constant_density(mesh, 2.0));
  auto r = solve_smallest(problem, 5, 1e-8);
  double elapsed = seconds_since(t0);

  bool pass = r.eigenvalues[0] <= 1e-8;
  for (int i = 1; i <= 3; ++i)
    pass = pass && std::abs(r.eigenvalues[i] - 2.0) <= 0.01 * 2.0;
  pass = pass && std::abs(r.eigenvalues[4] - 6.0) <= 0.01 * 6.0;
  pass = pass && elapsed <= 60.0;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "sphere spectrum (%g, %g, %g, %g, %g) in %.1fs",
                r.eigenvalues[0], r.eigenvalues[1], r.eigenvalues[2],
                r.eigenvalues[3], r.eigenvalues[4], elapsed);
  report(1, pass, buf);
}

// 2. Torus spectrum oracle: N = 64, rho == 1 -> (0, 1, 1, 1, 1).
void criterion2() {
  auto mesh = build_torus_grid(64);
  auto problem = assemble_problem(mesh, build_constant_density(mesh, 2.0));
  auto r = solve_smallest(problem, 5, 1e-8);
  bool pass = r.eigenvalues[0] <= 1e-8;
  for (int i = 1; i <= 4; ++i)
    pass = pass && std::abs(r.eigenvalues[i] - 1.0) <= 0.01;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "torus spectrum (%g, %g, %g, %g, %g)",
                r.eigenvalues[0], r.eigenvalues[1], r.eigenvalues[2],
                r.eigenvalues[3], r.eigenvalues[4]);
  report(2, pass, buf);
}

// 3. Reilly identity, closed case, randomized trig suite.
void criterion3() {
  auto pairs = verify::random_trig_pairs(20, 12345);
  double worst = 0.0, worst_pair = 0.0;
  bool pass = true;
  for (const auto& [u, h] : pairs)
    for (double alpha : {1.5, 2.0, 3.0}) {
      auto r = verify::reilly_residual(u, h, alpha, 256);
      worst = std::max(worst, r.residual);
      worst_pair = std::max(worst_pair, r.pair_disagreement);
      if (r.residual > 1e-8 * (1.0 + std::abs(r.lhs))) pass = false;
      if (r.pair_disagreement > 1e-9) pass = false;
    }
  report(3, pass,
         "reilly: max residual " + std::to_string(worst) +
             ", max N/2N disagreement " + std::to_string(worst_pair));
}

// 4. Bochner lemma pointwise residuals; constant h reduces to the classical
// identity.
void criterion4() {
  auto pairs = verify::random_trig_pairs(20, 12345);
  double worst = 0.0;
  bool pass = true;
  for (const auto& [u, h] : pairs)
    for (double alpha : {1.5, 2.0, 3.0}) {
      auto r = verify::bochner_residual(u, h, alpha, 256);
      worst = std::max(worst, r.max_residual);
      if (r.max_residual > 1e-8) pass = false;
    }
  double worst_classical = 0.0;
  for (const auto& [u, h] : pairs) {
    auto r = verify::bochner_residual(u, exact::ExactFunction::constant(0.7),
                                      2.0, 256);
    worst_classical = std::max(worst_classical, r.max_residual);
    if (r.max_residual > 1e-9) pass = false;
  }
  report(4, pass,
         "bochner: max residual " + std::to_string(worst) + ", classical " +
             std::to_string(worst_classical));
}

// 5. Family inequalities (i)-(ii) across the grid plus the closed-form root
// and surd identities.
void criterion5() {
  auto mesh = build_icosphere(5);
  Eigen::Vector3d north(0, 0, 1);
  bool pass = true;
  double worst_gap = 0.0;
  for (double alpha : {1.5, 2.0, 3.0})
    for (int j = 2; j <= 100; ++j) {
      auto params = FamilyParams::lower_bound_family(alpha, j);
      auto rep = verify::lemma3_check(params, mesh, north);
      if (!rep.pass_i || !rep.pass_ii) pass = false;
      worst_gap = std::max(worst_gap, rep.basepoint_gap_ii);
      if (rep.basepoint_gap_ii > 1e-10) pass = false;

      double c0 = compute_c0(params);
      auto roots = lemma3_roots(params);
      double root_id =
          std::abs(std::exp((1.0 + compute_Cj(params)) * (alpha - 1.0)) -
                   roots.u2);
      double surd = std::sqrt(4.0 / params.b() +
                              1.0 / (double(j) * j * c0 * c0));
      double closed = (2.0 * std::exp(alpha - 1.0) - 1.0 / j) / c0;
      if (root_id > 1e-12 * roots.u2) pass = false;
      if (std::abs(surd - closed) > 1e-12 * closed) pass = false;
    }
  report(5, pass,
         "lemma 3 (i)-(ii) for j in {2..100}, basepoint gap " +
             std::to_string(worst_gap));
}

// 6. Scale invariance of lambda_tilde and the intermediate scaling of
// lambda1.
void criterion6() {
  auto mesh = build_icosphere(3);
  auto field = build_family_density(mesh, Eigen::Vector3d(0, 0, 1),
                                    FamilyParams::lower_bound_family(2.0, 10));
  double dev = verify::scale_invariance_check(mesh, field, {0.1, 10.0});

  auto problem = assemble_problem(mesh, field);
  double l1 = solve_smallest(problem, 2).eigenvalues[1];
  double worst_factor = 0.0;
  for (double a : {0.1, 10.0}) {
    auto sp = assemble_problem(mesh, scaled(field, a));
    double sl1 = solve_smallest(sp, 2).eigenvalues[1];
    worst_factor = std::max(
        worst_factor,
        std::abs(sl1 - std::pow(a, field.alpha - 1.0) * l1) / sl1);
  }
  bool pass = dev <= 1e-10 && worst_factor <= 1e-10;
  report(6, pass,
         "scale invariance: lambda_tilde deviation " + std::to_string(dev) +
             ", factor deviation " + std::to_string(worst_factor));
}

// 7. Min-max consistency and dense/iterative solver agreement.
void criterion7() {
  auto mesh = build_icosphere(4);  // 2562 vertices, both paths run
  auto problem = assemble_problem(mesh, build_constant_density(mesh, 2.0));
  auto dense = solve_smallest(problem, 5, 1e-9, SolveStrategy::Dense);
  auto iter = solve_smallest(problem, 5, 1e-9, SolveStrategy::Iterative);
  double agree = 0.0;
  for (int i = 1; i < 5; ++i)
    agree = std::max(agree, std::abs(dense.eigenvalues[i] -
                                     iter.eigenvalues[i]) /
                                dense.eigenvalues[i]);
  bool pass = agree <= 1e-7;

  double l1 = dense.eigenvalues[1];
  std::mt19937 rng(99);
  std::normal_distribution<double> g;
  double bsum = problem.mass_diag.sum();
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd u(problem.dimension);
    for (int i = 0; i < u.size(); ++i) u[i] = g(rng);
    u.array() -= problem.mass_diag.dot(u) / bsum;
    if (rayleigh_quotient(problem, u) < l1 - 1e-9) pass = false;
  }
  report(7, pass,
         "min-max holds for 200 trials, dense/iterative gap " +
             std::to_string(agree));
}

// 8. Mesh convergence: lambda1 differences shrink by >= 3x per level.
void criterion8() {
  double l[3];
  for (int i = 0; i < 3; ++i) {
    auto mesh = build_icosphere(4 + i);
    auto problem = assemble_problem(mesh, build_constant_density(mesh, 2.0));
    l[i] = solve_smallest(problem, 2, 1e-9).eigenvalues[1];
  }
  double d45 = std::abs(l[0] - l[1]), d56 = std::abs(l[1] - l[2]);
  bool pass = d45 >= 3.0 * d56;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "lambda1 = %.8f, %.8f, %.8f; diff ratio %.2f", l[0], l[1],
                l[2], d45 / d56);
  report(8, pass, buf);
}

// 9. Lower-bound sweep completes and reports; no quantitative bound asserted.
void criterion9() {
  auto mesh = build_icosphere(5);
  verify::ScanConfig cfg;  // alpha = 2, j in {8..64}, level 5
  auto rows = verify::theorem1_scan(cfg, mesh);
  bool pass = rows.size() == size_t(1 + 64 - 8 + 1);
  double control = rows.empty() ? 0.0 : rows[0].lambda_tilde;
  pass = pass && std::abs(control - 2.0) <= 0.02;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.ok || !(r.lambda_tilde > 0.0) || !std::isfinite(r.hypothesis_margin))
      pass = false;
  }
  report(9, pass,
         "scan complete: " + std::to_string(rows.size()) +
             " rows, control lambda_tilde " + std::to_string(control));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d criteria failed\n", failures);
  return failures;
}
