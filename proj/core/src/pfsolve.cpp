#include "mcms/pfsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mcms {

PfResult pf_eigen(const Eigen::MatrixXd& nu, double tol, int maxit) {
  const Eigen::Index r = nu.rows();
  if (r == 0 || nu.cols() != r) throw std::invalid_argument("pf_eigen: matrix must be square");
  if (!nu.allFinite()) throw std::invalid_argument("pf_eigen: non-finite entry");
  if ((nu.array() < 0.0).any()) throw std::invalid_argument("pf_eigen: negative entry");
  if (!(nu.cwiseAbs().maxCoeff() > 0.0)) throw std::invalid_argument("pf_eigen: zero matrix");

  PfResult result;
  Eigen::VectorXd v = Eigen::VectorXd::Constant(r, 1.0 / static_cast<double>(r));
  double residual = std::numeric_limits<double>::infinity();
  double lambda = 0.0;
  int it = 0;
  for (; it < maxit; ++it) {
    const Eigen::VectorXd nv = nu * v;
    lambda = nv.sum() / v.sum();
    residual = (nv - lambda * v).cwiseAbs().maxCoeff();
    if (residual <= tol * std::max(1.0, lambda)) break;
    const double norm = nv.sum();
    if (!(norm > 0.0)) {
      // Nilpotent on the positive cone: spectral radius 0.
      throw PfConvergenceError("pf_eigen: iterate vanished (spectral radius 0)", residual);
    }
    v = nv / norm;
  }
  if (it == maxit) {
    throw PfConvergenceError("pf_eigen: power iteration did not converge after " +
                                 std::to_string(maxit) + " iterations (residual " +
                                 std::to_string(residual) + ")",
                             residual);
  }
  // polish down to rounding level while the residual keeps shrinking
  for (int extra = 0; extra < 200 && residual > 0.0; ++extra) {
    const Eigen::VectorXd nv = nu * v;
    const Eigen::VectorXd cand = nv / nv.sum();
    const Eigen::VectorXd nc = nu * cand;
    const double lc = nc.sum() / cand.sum();
    const double rc = (nc - lc * cand).cwiseAbs().maxCoeff();
    if (!(rc < residual)) break;
    v = cand;
    lambda = lc;
    residual = rc;
    ++it;
  }
  result.lambda_max = lambda;
  result.w = v / v.sum();
  result.iterations = it;

  // Second eigenvalue modulus on the complement of w.
  double lambda2 = 0.0;
  if (r > 1) {
    const Eigen::VectorXd u = result.w.normalized();
    Eigen::VectorXd x(r);
    for (Eigen::Index k = 0; k < r; ++k) x(k) = std::cos(1.0 + 2.3 * static_cast<double>(k));
    x -= u * u.dot(x);
    x.normalize();
    const int steps = std::min(maxit, 4000);
    constexpr int window = 64;
    double log_sum = 0.0;
    int counted = 0;
    bool vanished = false;
    for (int k = 0; k < steps; ++k) {
      Eigen::VectorXd y = nu * x;
      y -= u * u.dot(y);
      const double n = y.norm();
      if (!(n > 1e-280)) {
        vanished = true;
        break;
      }
      if (k >= steps - window) {
        log_sum += std::log(n);
        ++counted;
      }
      x = y / n;
    }
    lambda2 = vanished ? 0.0 : std::exp(log_sum / counted);
  }
  result.lambda2_abs = lambda2;
  result.gap = std::abs(result.lambda_max) - lambda2;
  result.simple = result.gap > tol;
  return result;
}

bool check_pf1(const PfResult& result, double tol) {
  return std::abs(result.lambda_max - 1.0) <= tol;
}

}  // namespace mcms
