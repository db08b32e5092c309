#include <catch2/catch_amalgamated.hpp>

#include "lapden/verify.hpp"

using namespace lapden;
using exact::Axis;
using exact::ExactFunction;

TEST_CASE("reilly residual: closed-form cases") {
  auto zero = ExactFunction::constant(0.0);
  auto c = ExactFunction::constant(4.0);
  auto h = 0.5 * ExactFunction::cos(Axis::Y, 1);

  // constant u kills every term
  auto rc = verify::reilly_residual(c, h, 2.0, 64);
  CHECK(rc.lhs == 0.0);
  CHECK(rc.rhs == 0.0);

  // u = cos x, h = 0: LHS = int cos^2 - cos^2 = 0, RHS = 0
  auto r0 = verify::reilly_residual(ExactFunction::cos(Axis::X, 1), zero, 2.0, 64);
  CHECK(r0.residual < 1e-10);

  auto r = verify::reilly_residual(ExactFunction::cos(Axis::X, 1), h, 2.0, 256);
  CHECK(r.residual <= 1e-9);
  CHECK(r.pair_disagreement <= 1e-9);
}

TEST_CASE("reilly residual: randomized trig suite") {
  auto pairs = verify::random_trig_pairs(6, 101);
  for (const auto& [u, h] : pairs)
    for (double alpha : {1.5, 2.0, 3.0}) {
      auto r = verify::reilly_residual(u, h, alpha, 256);
      CHECK(r.residual <= 1e-8 * (1.0 + std::abs(r.lhs)));
      CHECK(r.pair_disagreement <= 1e-9);
    }
}

TEST_CASE("bochner residual") {
  // constant u: exact zero
  auto rc = verify::bochner_residual(ExactFunction::constant(2.0),
                                     0.3 * ExactFunction::sin(Axis::X, 1), 2.0,
                                     32);
  CHECK(rc.max_residual < 1e-14);

  // constant h reduces to the classical flat Bochner identity
  auto u = ExactFunction::sin(Axis::X, 2) * ExactFunction::cos(Axis::Y, 1) +
           0.5 * ExactFunction::cos(Axis::X, 1);
  auto rh = verify::bochner_residual(u, ExactFunction::constant(0.8), 2.5, 64);
  CHECK(rh.max_residual <= 1e-9);

  auto r = verify::bochner_residual(ExactFunction::cos(Axis::X, 1),
                                    (1.0 / 3.0) * ExactFunction::sin(Axis::Y, 1),
                                    1.5, 256);
  CHECK(r.max_residual <= 1e-8);
  CHECK(r.max_residual_refined <= 1e-8);
}

TEST_CASE("lemma3_check clauses") {
  auto mesh = build_icosphere(4);
  Eigen::Vector3d north(0, 0, 1);
  auto params = FamilyParams{2.0, 2, 2.0, 10, 1.0};
  auto rep = verify::lemma3_check(params, mesh, north);

  CHECK(rep.c0 == Catch::Approx(6.534781365624138).epsilon(1e-12));
  CHECK(rep.pass_i);
  CHECK(rep.margin_i > 0.0);
  CHECK(rep.pass_ii);
  // clause (ii) is tight exactly at the basepoint
  CHECK(rep.basepoint_gap_ii <= 1e-12);
  // clause (iii), flat reading: equality at r = 0, so the margin is ~0+
  CHECK(rep.margin_iii_flat >= -1e-12);
  CHECK(rep.excluded_fraction >= 0.0);
  CHECK(rep.excluded_fraction < 0.01);
}

TEST_CASE("lemma3 clauses (i)-(ii) across the parameter grid") {
  auto mesh = build_icosphere(3);
  Eigen::Vector3d north(0, 0, 1);
  for (double alpha : {1.5, 2.0, 3.0})
    for (int j : {2, 10, 50, 100}) {
      auto params = FamilyParams::lower_bound_family(alpha, j);
      auto rep = verify::lemma3_check(params, mesh, north);
      CHECK(rep.pass_i);
      CHECK(rep.pass_ii);
    }
}

TEST_CASE("hypothesis margins") {
  auto mesh = build_icosphere(3);
  Eigen::Vector3d north(0, 0, 1);

  CHECK(family_j0(2.0, 1.0) == 8);

  auto params = FamilyParams::lower_bound_family(2.0, 8);
  auto rep = verify::hypothesis_check(params, 0.5, mesh, north);
  // both readings are reported; the flat bookkeeping follows the proof
  CHECK(std::isfinite(rep.margin_full));
  CHECK(rep.margin_flat >= rep.margin_full - 1e-12);
  CHECK(rep.excluded_fraction < 0.01);

  // the proof's chain gives margin >= kappa - 2 alpha / j - A for the flat
  // reading when z = alpha^2 / n
  double chain = 1.0 - 2.0 * params.alpha / params.j - 0.5;
  CHECK(rep.margin_flat >= chain - 1e-12);
}

TEST_CASE("theorem1 scan rows") {
  auto mesh = build_icosphere(3);
  verify::ScanConfig cfg;
  cfg.alpha = 2.0;
  cfg.j_min = 8;
  cfg.j_max = 12;
  cfg.mesh_level = 3;
  auto rows = verify::theorem1_scan(cfg, mesh);
  REQUIRE(rows.size() == 6);  // control + 5

  // control row: rho == 1 on the sphere
  CHECK(rows[0].j == 0);
  CHECK(rows[0].lambda_tilde == Catch::Approx(2.0).epsilon(0.015));

  int prev_j = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.ok);
    CHECK(r.j > prev_j);
    prev_j = r.j;
    CHECK(r.lambda_tilde > 0.0);
    CHECK(r.bound_proof == Catch::Approx(0.5 * r.j));
    CHECK(r.bound_stated == Catch::Approx(2.0 * r.j));
    CHECK(std::abs(r.lambda_tilde - r.lambda1 * r.normalization) <=
          1e-12 * r.lambda_tilde);
  }

  verify::ScanConfig empty = cfg;
  empty.j_max = cfg.j_min - 1;
  CHECK_THROWS_AS(verify::theorem1_scan(empty, mesh), std::invalid_argument);
}

TEST_CASE("scan CSV is deterministic") {
  auto mesh = build_icosphere(2);
  verify::ScanConfig cfg;
  cfg.j_min = 8;
  cfg.j_max = 10;
  cfg.mesh_level = 2;
  auto csv1 = verify::scan_csv(verify::theorem1_scan(cfg, mesh), "alpha=2");
  auto csv2 = verify::scan_csv(verify::theorem1_scan(cfg, mesh), "alpha=2");
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("# alpha=2\n", 0) == 0);
  CHECK(csv1.find("j,lambda1,mass,normalization,lambda_tilde,bound_proof,"
                  "bound_stated,hypothesis_margin,excluded_fraction,"
                  "residual_norm\n") != std::string::npos);
}

TEST_CASE("scale invariance of lambda_tilde") {
  auto mesh = build_icosphere(3);
  auto field = build_family_density(mesh, Eigen::Vector3d(0, 0, 1),
                                    FamilyParams::lower_bound_family(2.0, 10));
  CHECK(verify::scale_invariance_check(mesh, field, {1.0}) == 0.0);
  CHECK(verify::scale_invariance_check(mesh, field, {0.1, 10.0}) <= 1e-10);
}
