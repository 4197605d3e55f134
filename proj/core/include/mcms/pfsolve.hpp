#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace mcms {

/// Dominant eigenpair of a nonnegative weight matrix.
struct PfResult {
  double lambda_max = 0.0;
  Eigen::VectorXd w;   // nonnegative, sums to 1
  bool simple = false;  // gap > tol
  double gap = 0.0;     // |lambda_1| - |lambda_2|
  double lambda2_abs = 0.0;
  int iterations = 0;
};

class PfConvergenceError : public std::runtime_error {
 public:
  PfConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Power iteration from the uniform vector with L1 renormalisation. The
/// second eigenvalue modulus comes from power iteration on the orthogonal
/// complement of w, where nu acts with exactly the remaining spectrum.
///
/// Throws std::invalid_argument for negative, non-finite, non-square or zero
/// input and PfConvergenceError when the residual ||nu w - lambda w||_inf has
/// not dropped below tol after maxit steps (e.g. lambda_1 = -lambda_2).
PfResult pf_eigen(const Eigen::MatrixXd& nu, double tol = 1e-12, int maxit = 100000);

/// |lambda_max - 1| <= tol.
bool check_pf1(const PfResult& result, double tol);

}  // namespace mcms
