#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <random>
#include <stdexcept>
#include <string>

#include "lapden/assembly.hpp"

namespace lapden {

/// B-orthonormal eigenpairs of A u = lambda B u with residual certificates
/// ||Au - lambda Bu|| / ((1+lambda) ||Bu||).
struct EigenResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors; // columns, B-orthonormal
  Eigen::VectorXd residuals;
  int iterations = 0;
  std::string method;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, EigenResult best)
      : std::runtime_error(what), best_result(std::move(best)) {}
  EigenResult best_result;
};

enum class SolveStrategy { Auto, Dense, Iterative };

namespace detail {

inline Eigen::VectorXd pair_residuals(const SpectralProblem& p,
                                      const Eigen::VectorXd& vals,
                                      const Eigen::MatrixXd& vecs) {
  Eigen::VectorXd res(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    Eigen::VectorXd bu = p.mass_diag.cwiseProduct(vecs.col(i));
    res[i] = (p.stiffness * vecs.col(i) - vals[i] * bu).norm() /
             ((1.0 + vals[i]) * bu.norm());
  }
  return res;
}

inline EigenResult solve_dense(const SpectralProblem& p, int count) {
  // B diagonal: reduce to the standard problem D^-1/2 A D^-1/2.
  Eigen::VectorXd dinv = p.mass_diag.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd C = dinv.asDiagonal() * Eigen::MatrixXd(p.stiffness) *
                      dinv.asDiagonal();
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success)
    throw SolverError("dense eigensolver failed", {});

  EigenResult r;
  r.eigenvalues = es.eigenvalues().head(count);
  r.eigenvectors = dinv.asDiagonal() * es.eigenvectors().leftCols(count);
  r.residuals = pair_residuals(p, r.eigenvalues, r.eigenvectors);
  r.iterations = 1;
  r.method = "dense";
  return r;
}

// B-orthonormalize the columns of X against `fixed` and each other
// (modified Gram-Schmidt, run twice).
inline void b_orthonormalize(Eigen::MatrixXd& X, const Eigen::VectorXd& bdiag,
                             const Eigen::VectorXd& fixed) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < X.cols(); ++i) {
      X.col(i) -= fixed * fixed.dot(bdiag.cwiseProduct(X.col(i)));
      for (int j = 0; j < i; ++j)
        X.col(i) -= X.col(j) * X.col(j).dot(bdiag.cwiseProduct(X.col(i)));
      double nrm = std::sqrt(X.col(i).dot(bdiag.cwiseProduct(X.col(i))));
      if (nrm < 1e-300) throw SolverError("block became rank deficient", {});
      X.col(i) /= nrm;
    }
  }
}

inline EigenResult solve_iterative(const SpectralProblem& p, int count,
                                   double tol, unsigned seed, int max_iters) {
  const int n = p.dimension;
  const int wanted = count - 1;  // nonconstant modes; constant handled exactly
  const int block = std::min(n - 1, std::max(2 * wanted, 8));

  // Shifted SPD factorization for inverse iteration.
  double sigma = 1e-3 * p.stiffness.diagonal().sum() / p.mass_diag.sum();
  Eigen::SparseMatrix<double> shifted = p.stiffness;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += sigma * p.mass_diag[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("factorization of shifted operator failed", {});

  // B-normalized constant mode, deflated from the block by projection.
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  ones /= std::sqrt(p.mass_diag.sum());

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd X(n, block);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < block; ++j) X(i, j) = gauss(rng);
  b_orthonormalize(X, p.mass_diag, ones);

  Eigen::VectorXd theta;
  Eigen::VectorXd res;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    Eigen::MatrixXd Y = ldlt.solve(p.mass_diag.asDiagonal() * X);
    b_orthonormalize(Y, p.mass_diag, ones);
    Eigen::MatrixXd H = Y.transpose() * (p.stiffness * Y);
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    X = Y * es.eigenvectors();
    theta = es.eigenvalues();
    res = pair_residuals(p, theta.head(wanted), X.leftCols(wanted));
    if (res.maxCoeff() <= tol) break;
  }

  EigenResult r;
  r.eigenvalues.resize(count);
  r.eigenvectors.resize(n, count);
  r.residuals.resize(count);
  double theta0 = ones.dot(p.stiffness * ones);
  r.eigenvalues[0] = theta0;
  r.eigenvectors.col(0) = ones;
  r.residuals[0] = (p.stiffness * ones - theta0 * p.mass_diag.cwiseProduct(ones))
                       .norm() /
                   ((1.0 + theta0) * p.mass_diag.cwiseProduct(ones).norm());
  r.eigenvalues.tail(wanted) = theta.head(wanted);
  r.eigenvectors.rightCols(wanted) = X.leftCols(wanted);
  r.residuals.tail(wanted) = res;
  r.iterations = iter + 1;
  r.method = "shift-invert-subspace";
  if (iter >= max_iters)
    throw SolverError("eigensolver did not converge (best residual " +
                          std::to_string(res.maxCoeff()) + ")",
                      r);
  return r;
}

}  // namespace detail

/// Smallest `count` eigenpairs. Dense symmetric-definite solve for dimension
/// <= 3000, otherwise blocked shift-invert subspace iteration with
/// B-orthogonalization and deflation of the constant mode.
inline EigenResult solve_smallest(const SpectralProblem& problem, int count,
                                  double tol = 1e-8,
                                  SolveStrategy strategy = SolveStrategy::Auto,
                                  unsigned seed = 12345, int max_iters = 500) {
  if (count < 1 || count > problem.dimension)
    throw std::invalid_argument("solve_smallest: bad count");
  if (!(tol > 0.0 && tol <= 1e-4))
    throw std::invalid_argument("solve_smallest: tol must lie in (0, 1e-4]");
  if (problem.mass_diag.minCoeff() <= 0.0)
    throw SolverError("indefinite mass operator", {});

  if (count == 1) {
    // only the kernel requested: the constant mode is structural
    EigenResult r;
    Eigen::VectorXd ones =
        Eigen::VectorXd::Ones(problem.dimension) /
        std::sqrt(problem.mass_diag.sum());
    r.eigenvalues = Eigen::VectorXd::Constant(1, ones.dot(problem.stiffness * ones));
    r.eigenvectors = ones;
    r.residuals = detail::pair_residuals(problem, r.eigenvalues, r.eigenvectors);
    r.iterations = 0;
    r.method = "constant-mode";
    return r;
  }

  if (strategy == SolveStrategy::Auto)
    strategy = problem.dimension <= 3000 ? SolveStrategy::Dense
                                         : SolveStrategy::Iterative;
  if (strategy == SolveStrategy::Dense)
    return detail::solve_dense(problem, count);
  return detail::solve_iterative(problem, count, tol, seed, max_iters);
}

/// First nonzero eigenvalue times the scale-invariant normalization
/// (|M| / int rho)^(alpha-1).
inline double lambda_tilde(const Mesh& mesh, const DensityField& field,
                           const EigenResult& eig) {
  return eig.eigenvalues[1] * normalization(mesh, field, field.alpha);
}

inline double lambda_tilde(const Mesh& mesh, const DensityField& field,
                           double tol = 1e-8,
                           SolveStrategy strategy = SolveStrategy::Auto) {
  auto problem = assemble_problem(mesh, field);
  return lambda_tilde(mesh, field, solve_smallest(problem, 2, tol, strategy));
}

}  // namespace lapden
