#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "mcms/polygeom.hpp"
#include "mcms/scheme.hpp"

namespace mcms {

namespace detail {
class FftConvolver;
}

/// Window-side data of the invariant-density problem: the windows, the
/// transition windows, the contraction A and |det Q|.
struct RefinementProblem {
  std::vector<Region> windows;
  TransitionWindows transition;
  Mat2 contraction = Mat2::Identity();
  double det_q_abs = 1.0;

  int rank() const { return static_cast<int>(windows.size()); }
};

/// Windows displaced by gamma together with their transition windows.
RefinementProblem refinement_problem(const SchemeSpec& spec);

/// A grid centred on the origin with cell size h covering [-1.7, 1.7]^2, or
/// a larger symmetric box when the windows reach further.
GridSpec common_grid(const RefinementProblem& problem, double h);

/// r nonnegative channels sampled at the cell centres of one shared grid.
class DensityGrid {
 public:
  DensityGrid() = default;
  DensityGrid(const GridSpec& grid, int channels);

  const GridSpec& grid() const { return grid_; }
  int channels() const { return static_cast<int>(values_.size()); }

  std::span<double> channel(int j) { return values_.at(static_cast<std::size_t>(j)); }
  std::span<const double> channel(int j) const {
    return values_.at(static_cast<std::size_t>(j));
  }

  /// Cached sum of value * h^2; call refresh_masses() after mutating channels.
  double mass(int j) const { return masses_.at(static_cast<std::size_t>(j)); }
  Eigen::VectorXd masses() const;
  void refresh_masses();

  /// Bilinear interpolation between cell centres, zero outside the grid.
  double value_at(int j, const Vec2& x) const;
  double max_value(int j) const;

 private:
  GridSpec grid_;
  std::vector<std::vector<double>> values_;
  std::vector<double> masses_;
};

/// Normalised indicator rasters X_{Omega^{ji}} on offset grids whose cell
/// centres sit at integer multiples of h, kept in transform space.
class RefinementKernel {
 public:
  /// Rasters are built only where nu(j, i) > 0. Throws std::runtime_error
  /// "grid underflow at (j,i)" when the convolution support
  /// Omega^{ji} + A Omega^{(i)} does not fit in the grid, and
  /// std::invalid_argument for positive weight on a measure-zero window.
  static RefinementKernel build(const RefinementProblem& problem,
                                const Eigen::MatrixXd& nu, const GridSpec& grid,
                                int supersample = 8);

  const GridSpec& grid() const { return grid_; }
  int rank() const { return rank_; }
  const Mat2& contraction() const { return contraction_; }
  double det_q_abs() const { return det_q_abs_; }
  bool active(int j, int i) const { return active_.at(index(j, i)); }
  /// Integral of the raw raster before renormalisation (ideally 1).
  double raw_integral(int j, int i) const { return raw_integral_.at(index(j, i)); }

 private:
  friend DensityGrid apply_refinement(const DensityGrid&, const RefinementKernel&,
                                      const Eigen::MatrixXd&);
  std::size_t index(int j, int i) const { return static_cast<std::size_t>(j) * rank_ + i; }

  GridSpec grid_;
  int rank_ = 0;
  Mat2 contraction_ = Mat2::Identity();
  double det_q_abs_ = 1.0;
  std::vector<bool> active_;
  std::vector<double> raw_integral_;
  std::shared_ptr<const detail::FftConvolver> fft_;
  std::vector<std::vector<std::complex<double>>> spectra_;
};

/// One application of the matrix refinement operator
///   f'^j = |det Q| sum_i nu^{ji} X_{Omega^{ji}} * g^i,  g^i(y) = f^i(A^{-1} y).
/// g^i is formed by depositing each source cell's mass at A x_c with
/// bilinear (cloud-in-cell) weights, so sum g^i h^2 = |det A| mass(f^i)
/// holds exactly; the convolution is a discrete Riemann sum via FFT.
DensityGrid apply_refinement(const DensityGrid& f, const RefinementKernel& kernel,
                             const Eigen::MatrixXd& nu);

/// f_0^j = w^j X_{Omega^{(j)}}, normalised so that the discrete masses equal w.
DensityGrid initial_density(const RefinementProblem& problem, const GridSpec& grid,
                            const Eigen::VectorXd& w, int supersample = 8);

struct FixedPointOptions {
  double tol = 1e-8;
  int maxit = 200;
  int supersample = 8;
};

struct FixedPointResult {
  DensityGrid density;
  /// Sum over channels of the L1 distance between consecutive iterates.
  std::vector<double> residuals;
  /// Per iteration: ||m(R f) - |det Q| |det A| nu m(f)||_inf.
  std::vector<double> mass_transport_errors;
  int iterations = 0;
};

class RefineConvergenceError : public std::runtime_error {
 public:
  RefineConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Iterates f_{k+1} = R f_k from initial_density() until the summed L1
/// residual drops below tol. Throws std::invalid_argument if nu w != w
/// (within 1e-9) and RefineConvergenceError after maxit iterations.
FixedPointResult solve_fixed_point(const RefinementProblem& problem,
                                   const RefinementKernel& kernel,
                                   const Eigen::MatrixXd& nu, const Eigen::VectorXd& w,
                                   const FixedPointOptions& options = {});

/// Fourier transform of the normalised indicator 1_P / area(P) at k, with the
/// e^{-i k.x} convention. Uses the divergence-theorem edge sum, switching to
/// a moment series when |k| diam(P) <= 1 where the edge sum cancels.
std::complex<double> polygon_ft(const Region& region, const Vec2& k);

/// Truncated infinite product Y(k) Y(A^t k) ... Y((A^t)^L k) w with
/// Y^{ji}(kappa) = nu^{ji} polygon_ft(Omega^{ji}, kappa). Without an explicit
/// depth, L is the first index with ||(A^t)^{L+1} k|| < 1e-8.
Eigen::VectorXcd fourier_product(const RefinementProblem& problem, const Eigen::MatrixXd& nu,
                                 const Eigen::VectorXd& w, const Vec2& k, int depth = -1);

/// sum_c f^j_c h^2 exp(-i k.x_c).
std::complex<double> grid_transform(const DensityGrid& f, int channel, const Vec2& k);

struct SolverComparison {
  double max_deviation = 0.0;            // relative to ||w||_inf
  std::vector<double> per_wavevector;    // same normalisation
};

SolverComparison compare_solvers(const DensityGrid& f, const RefinementProblem& problem,
                                 const Eigen::MatrixXd& nu, const Eigen::VectorXd& w,
                                 std::span<const Vec2> wavevectors);

/// Deterministic wavevectors uniform in the disc of radius kmax.
std::vector<Vec2> sample_wavevectors(int count, double kmax, std::uint64_t seed);

}  // namespace mcms
