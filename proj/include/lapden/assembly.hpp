#pragma once

#include <Eigen/SparseCore>

#include <ostream>
#include <stdexcept>
#include <vector>

#include "lapden/density.hpp"
#include "lapden/mesh.hpp"

namespace lapden {

/// Discrete generalized eigenproblem A u = lambda B u for the weighted
/// Rayleigh quotient: A is the rho^alpha-weighted cotangent stiffness, B the
/// rho-weighted lumped mass (diagonal, stored as a vector).
struct SpectralProblem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass_diag;
  int dimension = 0;
  // record of the weights used
  Eigen::VectorXd rho_used;
  double alpha_used = 0.0;
};

/// P1 cotangent stiffness with a per-triangle multiplier equal to the linear
/// interpolant of `weight` at the barycenter.
inline Eigen::SparseMatrix<double> assemble_stiffness(
    const Mesh& mesh, const Eigen::VectorXd& weight) {
  if (weight.size() != mesh.vertex_count())
    throw std::invalid_argument("weight size mismatch");
  if (weight.minCoeff() <= 0.0)
    throw std::invalid_argument("stiffness weight must be positive");

  const double area_floor = 1e-14 * mesh.total_area() / mesh.triangle_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(12 * mesh.triangle_count());

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    auto p = mesh.corners(t);
    int i0 = mesh.triangles(t, 0), i1 = mesh.triangles(t, 1),
        i2 = mesh.triangles(t, 2);
    double area = mesh.triangle_areas[t];
    if (area < area_floor)
      throw std::runtime_error("degenerate triangle " + std::to_string(t) +
                               " (area " + std::to_string(area) + ")");
    double mult = (weight[i0] + weight[i1] + weight[i2]) / 3.0;

    int idx[3] = {i0, i1, i2};
    for (int k = 0; k < 3; ++k) {
      // cotangent at corner k weights the opposite edge
      Eigen::Vector3d e1 = p[(k + 1) % 3] - p[k];
      Eigen::Vector3d e2 = p[(k + 2) % 3] - p[k];
      double cot = e1.dot(e2) / e1.cross(e2).norm();
      double w = 0.5 * cot * mult;
      int a = idx[(k + 1) % 3], b = idx[(k + 2) % 3];
      trips.emplace_back(a, b, -w);
      trips.emplace_back(b, a, -w);
      trips.emplace_back(a, a, w);
      trips.emplace_back(b, b, w);
    }
  }

  Eigen::SparseMatrix<double> A(mesh.vertex_count(), mesh.vertex_count());
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

/// Lumped mass diagonal: entry v = rho(v) * vertex_area(v).
inline Eigen::VectorXd assemble_mass(const Mesh& mesh,
                                     const Eigen::VectorXd& rho) {
  if (rho.size() != mesh.vertex_count())
    throw std::invalid_argument("rho size mismatch");
  if (rho.minCoeff() <= 0.0)
    throw std::invalid_argument("mass weight must be positive");
  return rho.cwiseProduct(mesh.vertex_areas);
}

inline SpectralProblem assemble_problem(const Mesh& mesh,
                                        const DensityField& field) {
  SpectralProblem problem;
  problem.stiffness = assemble_stiffness(mesh, field.rho_alpha);
  problem.mass_diag = assemble_mass(mesh, field.rho);
  problem.dimension = mesh.vertex_count();
  problem.rho_used = field.rho;
  problem.alpha_used = field.alpha;
  return problem;
}

inline double rayleigh_quotient(const SpectralProblem& problem,
                                const Eigen::VectorXd& u) {
  if (u.norm() == 0.0)
    throw std::invalid_argument("rayleigh_quotient: zero vector");
  double den = u.dot(problem.mass_diag.cwiseProduct(u));
  return u.dot(problem.stiffness * u) / den;
}

/// MatrixMarket coordinate output, lower triangle of a symmetric matrix.
inline void write_matrix_market(const Eigen::SparseMatrix<double>& A,
                                std::ostream& os) {
  int nnz = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.row() >= it.col()) ++nnz;
  os << "%%MatrixMarket matrix coordinate real symmetric\n"
     << A.rows() << ' ' << A.cols() << ' ' << nnz << '\n';
  os.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.row() >= it.col())
        os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

inline void write_matrix_market_diagonal(const Eigen::VectorXd& d,
                                         std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real symmetric\n"
     << d.size() << ' ' << d.size() << ' ' << d.size() << '\n';
  os.precision(17);
  for (int i = 0; i < d.size(); ++i)
    os << i + 1 << ' ' << i + 1 << ' ' << d[i] << '\n';
}

}  // namespace lapden
