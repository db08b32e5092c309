#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "lapden/mesh.hpp"

namespace lapden {

/// Parameters of the explicit density family h_j. The scalar formulas keep
/// the dimension n symbolic even though discretized manifolds are surfaces.
struct FamilyParams {
  double alpha = 2.0;
  int n = 2;
  double z = 2.0;
  int j = 10;
  double kappa = 1.0;

  double b() const { return n * (z + 1.0); }

  void validate() const {
    if (!(alpha > 1.0)) throw std::invalid_argument("family requires alpha > 1");
    if (n < 1) throw std::invalid_argument("family requires n >= 1");
    if (!(z > 0.0)) throw std::invalid_argument("family requires z > 0");
    if (j < 2) throw std::invalid_argument("family requires j >= 2");
    if (!(kappa > 0.0)) throw std::invalid_argument("family requires kappa > 0");
    if (!(std::exp(alpha - 1.0) - 1.0 / j > 0.0))
      throw std::invalid_argument("family requires e^(alpha-1) > 1/j");
  }

  // Specialization used in the lower-bound construction: z = alpha^2/n,
  // A = kappa/2, j0 = ceil(4 alpha / kappa).
  static FamilyParams lower_bound_family(double alpha, int j,
                                         double kappa = 1.0, int n = 2) {
    FamilyParams p;
    p.alpha = alpha;
    p.n = n;
    p.z = alpha * alpha / n;
    p.j = j;
    p.kappa = kappa;
    p.validate();
    return p;
  }
};

inline int family_j0(double alpha, double kappa) {
  return static_cast<int>(std::ceil(4.0 * alpha / kappa));
}

/// c_0 = sqrt( n(z+1) e^(alpha-1) (e^(alpha-1) - 1/j) )
inline double compute_c0(const FamilyParams& p) {
  p.validate();
  double e = std::exp(p.alpha - 1.0);
  return std::sqrt(p.b() * e * (e - 1.0 / p.j));
}

/// C_j = -log(c0) / (alpha - 1)
inline double compute_Cj_from_c0(double c0, double alpha) {
  if (!(c0 > 0.0)) throw std::invalid_argument("compute_Cj requires c0 > 0");
  return -std::log(c0) / (alpha - 1.0);
}

inline double compute_Cj(const FamilyParams& p) {
  return compute_Cj_from_c0(compute_c0(p), p.alpha);
}

/// Radial profile f(r) = e^(-r^2/j) + C with exact first and second
/// derivatives.
struct RadialProfile {
  int j;
  double offset;  // C_j

  double f(double r) const { return std::exp(-r * r / j) + offset; }
  double fp(double r) const { return -(2.0 * r / j) * std::exp(-r * r / j); }
  double fpp(double r) const {
    return (-2.0 / j) * std::exp(-r * r / j) * (1.0 - 2.0 * r * r / j);
  }
};

/// Per-vertex density data: h, rho = e^-h and rho^alpha. When the density
/// comes from the radial family the analytic profile rides along so that
/// curvature checks can use exact derivatives.
struct DensityField {
  double alpha = 2.0;
  Eigen::VectorXd h;
  Eigen::VectorXd rho;
  Eigen::VectorXd rho_alpha;
  std::optional<RadialProfile> profile;
  Eigen::Vector3d basepoint = Eigen::Vector3d(0, 0, 1);
};

inline DensityField build_density(
    const Mesh& mesh, double alpha,
    const std::function<double(const Eigen::Vector3d&)>& h_of_x) {
  DensityField field;
  field.alpha = alpha;
  const int n = mesh.vertex_count();
  field.h.resize(n);
  field.rho.resize(n);
  field.rho_alpha.resize(n);
  for (int v = 0; v < n; ++v) {
    double h = h_of_x(mesh.vertices.row(v));
    field.h[v] = h;
    field.rho[v] = std::exp(-h);
    field.rho_alpha[v] = std::exp(-alpha * h);
  }
  return field;
}

inline DensityField build_constant_density(const Mesh& mesh, double alpha,
                                           double rho0 = 1.0) {
  if (!(rho0 > 0.0)) throw std::invalid_argument("density must be positive");
  double h0 = -std::log(rho0);
  return build_density(mesh, alpha, [h0](const Eigen::Vector3d&) { return h0; });
}

/// h_j(x) = e^(-d(x0,x)^2/j) + C_j on the sphere.
inline DensityField build_family_density(const Mesh& mesh,
                                         const Eigen::Vector3d& basepoint,
                                         const FamilyParams& params) {
  if (mesh.kind == ManifoldKind::Torus)
    throw std::invalid_argument(
        "the radial density family is defined on sphere meshes only");
  params.validate();
  RadialProfile profile{params.j, compute_Cj(params)};
  auto field = build_density(mesh, params.alpha,
                             [&](const Eigen::Vector3d& x) {
                               return profile.f(geodesic_distance(basepoint, x));
                             });
  field.profile = profile;
  field.basepoint = basepoint;
  return field;
}

/// Replace rho by a*rho (h shifts by -log a). Scales the stored weight
/// vectors directly so assembled operators scale exactly.
inline DensityField scaled(const DensityField& field, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("density scale must be positive");
  DensityField out = field;
  out.h.array() -= std::log(a);
  out.rho *= a;
  out.rho_alpha *= std::pow(a, field.alpha);
  out.profile.reset();  // profile describes h up to the shift only
  return out;
}

/// Lumped-quadrature mass: sum_v rho(v) * vertex_area(v).
inline double mass(const Mesh& mesh, const DensityField& field) {
  return field.rho.dot(mesh.vertex_areas);
}

/// (|M| / int rho)^(alpha-1), the factor making lambda_1 scale-invariant.
inline double normalization(const Mesh& mesh, const DensityField& field,
                            double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("normalization: alpha > 1");
  return std::pow(mesh.total_area() / mass(mesh, field), alpha - 1.0);
}

struct Lemma3Roots {
  double u1;  // negative root
  double u2;  // positive root
};

/// Roots of b u^2 - b u/(j c0) - 1 = 0 with b = n(z+1).
inline Lemma3Roots lemma3_roots(const FamilyParams& p) {
  double b = p.b();
  double c0 = compute_c0(p);
  double disc = std::sqrt(b * b + 4.0 * b * p.j * p.j * c0 * c0);
  return {(b - disc) / (2.0 * b * p.j * c0), (b + disc) / (2.0 * b * p.j * c0)};
}

inline void write_density_csv(const DensityField& field, std::ostream& os) {
  os << "vertex,h,rho\n";
  for (int v = 0; v < field.h.size(); ++v)
    os << v << ',' << field.h[v] << ',' << field.rho[v] << '\n';
}

}  // namespace lapden
