#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lapden/density.hpp"
#include "lapden/eigsolve.hpp"
#include "lapden/exact.hpp"
#include "lapden/io.hpp"
#include "lapden/mesh.hpp"

namespace lapden::verify {

inline constexpr double kCutLocusRadius = 1e-3;  // geodesic exclusion radius

// ---------------------------------------------------------------------------
// Integrated identity on the closed torus:
//   int e^{h(a-1)} |L_h u|^2 - e^{-h(a-1)} |D^2 u|^2 dm
//     = int e^{-h(a-1)} (Ric + a D^2 h)(grad u, grad u) dm,
// with Ric = 0 and dm = e^{-h} dv.
// ---------------------------------------------------------------------------
struct ResidualReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;          // |lhs - rhs| at N
  double residual_refined = 0.0;  // |lhs - rhs| at 2N
  double pair_disagreement = 0.0;
  int grid = 0;
};

inline ResidualReport reilly_residual(const exact::ExactFunction& u,
                                      const exact::ExactFunction& h,
                                      double alpha, int N = 256) {
  using exact::ExactFunction;
  auto lhu = exact::apply_Lh(u, h, alpha);
  auto ep = ExactFunction::exp((alpha - 1.0) * h);
  auto em = ExactFunction::exp((-(alpha - 1.0)) * h);
  auto dm = ExactFunction::exp(-1.0 * h);
  auto lhs_integrand = (ep * lhu.pow(2) - em * exact::hessian_norm_sq(u)) * dm;
  auto rhs_integrand = alpha * (em * exact::hessian_form(h, u) * dm);

  ResidualReport r;
  r.grid = N;
  r.lhs = exact::torus_quadrature(lhs_integrand, N);
  r.rhs = exact::torus_quadrature(rhs_integrand, N);
  r.residual = std::abs(r.lhs - r.rhs);
  r.residual_refined = std::abs(exact::torus_quadrature(lhs_integrand, 2 * N) -
                                exact::torus_quadrature(rhs_integrand, 2 * N));
  r.pair_disagreement = std::abs(r.residual - r.residual_refined);
  return r;
}

// ---------------------------------------------------------------------------
// Pointwise identity on the torus (Ric = 0):
//   1/2 L_h |grad u|^2 = -e^{-h(a-1)} (|D^2 u|^2 + a D^2 h(grad u, grad u))
//                        + g(grad u, grad L_h u) + (a-1) L_h u g(grad h, grad u)
// ---------------------------------------------------------------------------
struct PointwiseReport {
  double max_residual = 0.0;          // over the N grid
  double max_residual_refined = 0.0;  // over the 2N grid
  int grid = 0;
};

inline PointwiseReport bochner_residual(const exact::ExactFunction& u,
                                        const exact::ExactFunction& h,
                                        double alpha, int N = 256) {
  using exact::Axis;
  using exact::ExactFunction;
  auto lhu = exact::apply_Lh(u, h, alpha);
  auto em = ExactFunction::exp((-(alpha - 1.0)) * h);
  auto lhs = 0.5 * exact::apply_Lh(exact::grad_norm_sq(u), h, alpha);
  auto rhs = -(em * (exact::hessian_norm_sq(u) +
                     alpha * exact::hessian_form(h, u))) +
             exact::grad_dot(u, lhu) +
             (alpha - 1.0) * (lhu * exact::grad_dot(h, u));
  auto diff = lhs - rhs;

  auto max_on = [&](int n) {
    Eigen::ArrayXd x, y;
    exact::torus_grid(n, x, y);
    return diff.eval(x, y).abs().maxCoeff();
  };
  PointwiseReport r;
  r.grid = N;
  r.max_residual = max_on(N);
  r.max_residual_refined = max_on(2 * N);
  return r;
}

// ---------------------------------------------------------------------------
// Radial Hessian eigenvalues of the family profile at distance r from the
// basepoint (radial f'', tangential f' cot r, with the smooth r -> 0 limit).
// ---------------------------------------------------------------------------
inline std::pair<double, double> profile_hessian_eigs(const RadialProfile& prof,
                                                      double r) {
  double radial = prof.fpp(r);
  double tangential = r < 1e-6 ? prof.fpp(0.0) : prof.fp(r) / std::tan(r);
  return {radial, tangential};
}

// ---------------------------------------------------------------------------
// Pointwise checks of the three family inequalities:
//  (i)   (int e^{-h_j} dv / |M|)^{a-1} <= c0
//  (ii)  (e^{h_j(a-1)} b - e^{-h_j(a-1)}) / b <= 1/(j c0),  b = n(z+1)
//  (iii) |grad h_j|^2 - a D^2 h_j <= 2a/j   (flat radial scalar reading and
//        the sphere quadratic-form reading, worst direction)
// ---------------------------------------------------------------------------
struct Lemma3Report {
  double c0 = 0.0;
  double margin_i = 0.0;           // c0 - (mass/|M|)^(a-1)
  double margin_ii = 0.0;          // min over vertices of bound - expr
  double basepoint_gap_ii = 0.0;   // |expr - bound| at r = 0
  double margin_iii_flat = 0.0;    // 2a/j - max (f'^2 - a f'')
  double margin_iii_sphere = 0.0;  // worst direction on the sphere
  double excluded_fraction = 0.0;
  bool pass_i = false;
  bool pass_ii = false;
};

inline Lemma3Report lemma3_check(const FamilyParams& params, const Mesh& mesh,
                                 const Eigen::Vector3d& basepoint) {
  auto field = build_family_density(mesh, basepoint, params);
  const auto& prof = *field.profile;
  const double b = params.b();
  const double c0 = compute_c0(params);
  const double bound_ii = 1.0 / (params.j * c0);
  const double a1 = params.alpha - 1.0;

  Lemma3Report rep;
  rep.c0 = c0;
  rep.margin_i =
      c0 - std::pow(mass(mesh, field) / mesh.total_area(), a1);

  auto expr_ii = [&](double h) {
    return (std::exp(h * a1) * b - std::exp(-h * a1)) / b;
  };
  double worst_ii = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.vertex_count(); ++v)
    worst_ii = std::min(worst_ii, bound_ii - expr_ii(field.h[v]));
  rep.margin_ii = worst_ii;
  rep.basepoint_gap_ii = std::abs(expr_ii(prof.f(0.0)) - bound_ii);

  const double bound_iii = 2.0 * params.alpha / params.j;
  double worst_flat = std::numeric_limits<double>::infinity();
  double worst_sphere = std::numeric_limits<double>::infinity();
  int excluded = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    double r = geodesic_distance(basepoint, mesh.vertices.row(v));
    double fp = prof.fp(r);
    worst_flat = std::min(worst_flat,
                          bound_iii - (fp * fp - params.alpha * prof.fpp(r)));
    if (r > kPi - kCutLocusRadius) {
      ++excluded;
      continue;
    }
    auto [radial, tangential] = profile_hessian_eigs(prof, r);
    double worst_dir = fp * fp - params.alpha * std::min(radial, tangential);
    worst_sphere = std::min(worst_sphere, bound_iii - worst_dir);
  }
  rep.margin_iii_flat = worst_flat;
  rep.margin_iii_sphere = worst_sphere;
  rep.excluded_fraction = double(excluded) / mesh.vertex_count();
  rep.pass_i = rep.margin_i > 0.0;
  rep.pass_ii = rep.margin_ii >= -1e-12;
  return rep;
}

// ---------------------------------------------------------------------------
// Curvature hypothesis Ric + a D^2 h >= a^2 |grad h|^2 / (nz) + A on the unit
// sphere, scanned over vertices and Hessian eigendirections. Positive margin
// means the hypothesis holds on the sampled set.
// ---------------------------------------------------------------------------
struct HypothesisReport {
  double margin_full = 0.0;  // worst over both eigendirections
  double margin_flat = 0.0;  // radial scalar bookkeeping only
  double excluded_fraction = 0.0;
};

inline HypothesisReport hypothesis_check(const FamilyParams& params, double A,
                                         const Mesh& mesh,
                                         const Eigen::Vector3d& basepoint) {
  if (mesh.kind == ManifoldKind::Torus)
    throw std::invalid_argument("hypothesis_check runs on sphere meshes");
  RadialProfile prof{params.j, compute_Cj(params)};
  const double kappa = 1.0;  // unit sphere: Ric(v,v) = |v|^2
  const double gradsq_coeff = params.alpha * params.alpha / (params.n * params.z);

  HypothesisReport rep;
  rep.margin_full = std::numeric_limits<double>::infinity();
  rep.margin_flat = std::numeric_limits<double>::infinity();
  int excluded = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    double r = geodesic_distance(basepoint, mesh.vertices.row(v));
    if (r > kPi - kCutLocusRadius) {
      ++excluded;
      continue;
    }
    double fp = prof.fp(r);
    double common = -gradsq_coeff * fp * fp - A + kappa;
    auto [radial, tangential] = profile_hessian_eigs(prof, r);
    rep.margin_full = std::min(
        rep.margin_full, common + params.alpha * std::min(radial, tangential));
    rep.margin_flat = std::min(rep.margin_flat, common + params.alpha * radial);
  }
  rep.excluded_fraction = double(excluded) / mesh.vertex_count();
  return rep;
}

// ---------------------------------------------------------------------------
// The lower-bound measurement sweep. Nothing is asserted about the claimed
// growth; each row records lambda_tilde next to both candidate bounds
// (kappa j / 2 from the proof, 2 kappa j from the statement) and the measured
// hypothesis margin.
// ---------------------------------------------------------------------------
struct ReportRow {
  int j = 0;  // 0 marks the rho == 1 control row
  double lambda1 = 0.0;
  double mass = 0.0;
  double normalization = 0.0;
  double lambda_tilde = 0.0;
  double bound_proof = 0.0;   // kappa j / 2
  double bound_stated = 0.0;  // 2 kappa j
  double hypothesis_margin = 0.0;
  double excluded_fraction = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string method;
  bool ok = true;
  std::string error;
};

struct ScanConfig {
  double alpha = 2.0;
  int j_min = 8;
  int j_max = 64;
  int mesh_level = 5;
  double kappa = 1.0;
  Eigen::Vector3d basepoint = Eigen::Vector3d(0, 0, 1);
  double eig_tol = 1e-8;
  unsigned seed = 12345;
};

inline std::vector<ReportRow> theorem1_scan(const ScanConfig& cfg,
                                            const Mesh& mesh) {
  if (mesh.kind == ManifoldKind::Torus)
    throw std::invalid_argument("theorem1_scan runs on sphere meshes");
  if (cfg.j_max < cfg.j_min)
    throw std::invalid_argument("theorem1_scan: empty j range");
  const double A = cfg.kappa / 2.0;

  std::vector<ReportRow> rows;

  // rho == 1 control row
  {
    ReportRow row;
    auto field = build_constant_density(mesh, cfg.alpha);
    auto problem = assemble_problem(mesh, field);
    auto eig = solve_smallest(problem, 2, cfg.eig_tol, SolveStrategy::Auto,
                              cfg.seed);
    row.lambda1 = eig.eigenvalues[1];
    row.mass = mass(mesh, field);
    row.normalization = normalization(mesh, field, cfg.alpha);
    row.lambda_tilde = row.lambda1 * row.normalization;
    row.hypothesis_margin = cfg.kappa - A;  // constant h: curvature only
    row.residual_norm = eig.residuals.maxCoeff();
    row.iterations = eig.iterations;
    row.method = eig.method;
    rows.push_back(row);
  }

  for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
    ReportRow row;
    row.j = j;
    row.bound_proof = cfg.kappa * j / 2.0;
    row.bound_stated = 2.0 * cfg.kappa * j;
    try {
      auto params = FamilyParams::lower_bound_family(cfg.alpha, j, cfg.kappa);
      auto field = build_family_density(mesh, cfg.basepoint, params);
      auto problem = assemble_problem(mesh, field);
      auto eig = solve_smallest(problem, 2, cfg.eig_tol, SolveStrategy::Auto,
                                cfg.seed);
      row.lambda1 = eig.eigenvalues[1];
      row.mass = mass(mesh, field);
      row.normalization = normalization(mesh, field, cfg.alpha);
      row.lambda_tilde = row.lambda1 * row.normalization;
      auto hyp = hypothesis_check(params, A, mesh, cfg.basepoint);
      row.hypothesis_margin = hyp.margin_full;
      row.excluded_fraction = hyp.excluded_fraction;
      row.residual_norm = eig.residuals.maxCoeff();
      row.iterations = eig.iterations;
      row.method = eig.method;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string scan_csv(const std::vector<ReportRow>& rows,
                            const std::string& config_line = "") {
  std::string out;
  if (!config_line.empty()) out += "# " + config_line + "\n";
  out +=
      "j,lambda1,mass,normalization,lambda_tilde,bound_proof,bound_stated,"
      "hypothesis_margin,excluded_fraction,residual_norm\n";
  for (const auto& r : rows) {
    if (!r.ok) {
      out += std::to_string(r.j) + ",error: " + r.error + "\n";
      continue;
    }
    out += std::to_string(r.j) + ',' + fmt17(r.lambda1) + ',' + fmt17(r.mass) +
           ',' + fmt17(r.normalization) + ',' + fmt17(r.lambda_tilde) + ',' +
           fmt17(r.bound_proof) + ',' + fmt17(r.bound_stated) + ',' +
           fmt17(r.hypothesis_margin) + ',' + fmt17(r.excluded_fraction) +
           ',' + fmt17(r.residual_norm) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rescaling invariance of lambda_tilde: max relative deviation of
// lambda_tilde(a rho) from lambda_tilde(rho) over the given scales.
// ---------------------------------------------------------------------------
inline double scale_invariance_check(const Mesh& mesh,
                                     const DensityField& field,
                                     const std::vector<double>& scales,
                                     double tol = 1e-8,
                                     SolveStrategy strategy = SolveStrategy::Auto) {
  double base = lambda_tilde(mesh, field, tol, strategy);
  double worst = 0.0;
  for (double a : scales) {
    double lt = lambda_tilde(mesh, scaled(field, a), tol, strategy);
    worst = std::max(worst, std::abs(lt - base) / base);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Randomized trig-polynomial test functions for the identity suites.
// ---------------------------------------------------------------------------
struct TrigPair {
  exact::ExactFunction u;
  exact::ExactFunction h;
};

inline std::vector<TrigPair> random_trig_pairs(int count, unsigned seed) {
  using exact::Axis;
  using exact::ExactFunction;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> freq(1, 3);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> ucoef(-1.0, 1.0);
  std::uniform_real_distribution<double> hcoef(-0.4, 0.4);

  auto term = [&](double coef) {
    auto trig = [&](Axis axis) {
      return kind(rng) % 2 == 0 ? ExactFunction::sin(axis, freq(rng))
                                : ExactFunction::cos(axis, freq(rng));
    };
    switch (kind(rng)) {
      case 0: return coef * trig(Axis::X);
      case 1: return coef * trig(Axis::Y);
      default: return coef * (trig(Axis::X) * trig(Axis::Y));
    }
  };

  std::vector<TrigPair> pairs;
  pairs.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto u = term(ucoef(rng)) + term(ucoef(rng)) + term(ucoef(rng));
    auto h = term(hcoef(rng)) + term(hcoef(rng));
    pairs.push_back({u, h});
  }
  return pairs;
}

}  // namespace lapden::verify
