#include "mcms/refine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft_convolver.hpp"

namespace mcms {
namespace {

std::string entry_name(int j, int i) {
  return "(" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")";
}

bool same_grid(const GridSpec& a, const GridSpec& b) {
  return a.nx == b.nx && a.ny == b.ny && a.h == b.h && a.origin == b.origin;
}

int half_extent_cells(double lo, double hi, double h) {
  return static_cast<int>(std::ceil(std::max(std::abs(lo), std::abs(hi)) / h)) + 1;
}

}  // namespace

RefinementProblem refinement_problem(const SchemeSpec& spec) {
  spec.validate();
  RefinementProblem problem;
  for (int i = 0; i < spec.rank(); ++i) problem.windows.push_back(spec.window(i));
  problem.transition = transition_windows(spec);
  problem.contraction = spec.contraction();
  problem.det_q_abs = spec.det_q_abs();
  return problem;
}

GridSpec common_grid(const RefinementProblem& problem, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  double half = 1.7;
  for (const Region& w : problem.windows) {
    const BoundingBox box = bounding_box(w);
    half = std::max({half, box.hi.cwiseAbs().maxCoeff() + 4.0 * h,
                     box.lo.cwiseAbs().maxCoeff() + 4.0 * h});
  }
  const int n = static_cast<int>(std::ceil(2.0 * half / h - 1e-9));
  GridSpec grid;
  grid.h = h;
  grid.nx = n;
  grid.ny = n;
  grid.origin = Vec2(-0.5 * n * h, -0.5 * n * h);
  return grid;
}

DensityGrid::DensityGrid(const GridSpec& grid, int channels)
    : grid_(grid),
      values_(static_cast<std::size_t>(channels), std::vector<double>(grid.size(), 0.0)),
      masses_(static_cast<std::size_t>(channels), 0.0) {}

Eigen::VectorXd DensityGrid::masses() const {
  Eigen::VectorXd m(channels());
  for (int j = 0; j < channels(); ++j) m(j) = masses_[static_cast<std::size_t>(j)];
  return m;
}

void DensityGrid::refresh_masses() {
  const double cell = grid_.h * grid_.h;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    double s = 0.0;
    for (double v : values_[j]) s += v;
    masses_[j] = s * cell;
  }
}

double DensityGrid::value_at(int j, const Vec2& x) const {
  const auto& v = values_.at(static_cast<std::size_t>(j));
  const double u = (x.x() - grid_.origin.x()) / grid_.h - 0.5;
  const double t = (x.y() - grid_.origin.y()) / grid_.h - 0.5;
  const int i0 = static_cast<int>(std::floor(u));
  const int k0 = static_cast<int>(std::floor(t));
  const double fx = u - i0;
  const double fy = t - k0;
  auto at = [&](int ix, int iy) {
    if (ix < 0 || iy < 0 || ix >= grid_.nx || iy >= grid_.ny) return 0.0;
    return v[grid_.index(ix, iy)];
  };
  return (1 - fx) * (1 - fy) * at(i0, k0) + fx * (1 - fy) * at(i0 + 1, k0) +
         (1 - fx) * fy * at(i0, k0 + 1) + fx * fy * at(i0 + 1, k0 + 1);
}

double DensityGrid::max_value(int j) const {
  const auto& v = values_.at(static_cast<std::size_t>(j));
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

RefinementKernel RefinementKernel::build(const RefinementProblem& problem,
                                         const Eigen::MatrixXd& nu, const GridSpec& grid,
                                         int supersample) {
  const int r = problem.rank();
  if (nu.rows() != r || nu.cols() != r) throw std::invalid_argument("kernel: nu shape mismatch");
  if (problem.transition.rank() != r) throw std::invalid_argument("kernel: transition rank mismatch");

  RefinementKernel k;
  k.grid_ = grid;
  k.rank_ = r;
  k.contraction_ = problem.contraction;
  k.det_q_abs_ = problem.det_q_abs;
  k.active_.assign(static_cast<std::size_t>(r) * r, false);
  k.raw_integral_.assign(static_cast<std::size_t>(r) * r, 0.0);
  k.spectra_.resize(static_cast<std::size_t>(r) * r);

  const double h = grid.h;
  std::vector<std::pair<int, int>> half(static_cast<std::size_t>(r) * r, {0, 0});
  int kx_max = 1;
  int ky_max = 1;
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      if (!(nu(j, i) > 0.0)) continue;
      const Region& w = problem.transition(j, i);
      if (!w.is_polygon()) {
        throw std::invalid_argument("ghost transition at " + entry_name(j, i));
      }
      const BoundingBox wk = bounding_box(w);
      const BoundingBox ws =
          bounding_box(linear_image(problem.windows[static_cast<std::size_t>(i)],
                                    problem.contraction));
      const Vec2 margin(2.0 * h, 2.0 * h);
      if (!grid.covers({wk.lo + ws.lo - margin, wk.hi + ws.hi + margin})) {
        throw std::runtime_error("grid underflow at " + entry_name(j, i));
      }
      const int kx = half_extent_cells(wk.lo.x(), wk.hi.x(), h);
      const int ky = half_extent_cells(wk.lo.y(), wk.hi.y(), h);
      half[k.index(j, i)] = {kx, ky};
      kx_max = std::max(kx_max, kx);
      ky_max = std::max(ky_max, ky);
      k.active_[k.index(j, i)] = true;
    }
  }

  const int px = detail::FftConvolver::good_size(grid.nx + kx_max + 2);
  const int py = detail::FftConvolver::good_size(grid.ny + ky_max + 2);
  auto fft = std::make_shared<detail::FftConvolver>(px, py);

  std::vector<double> padded(fft->real_size());
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      if (!k.active(j, i)) continue;
      const Region& w = problem.transition(j, i);
      const auto [kx, ky] = half[k.index(j, i)];
      GridSpec kg;
      kg.h = h;
      kg.nx = 2 * kx + 1;
      kg.ny = 2 * ky + 1;
      kg.origin = Vec2(-(kx + 0.5) * h, -(ky + 0.5) * h);
      const std::vector<double> cover = rasterize(w, kg, supersample);
      double total = 0.0;
      for (double c : cover) total += c;
      k.raw_integral_[k.index(j, i)] = total * h * h / area(w);

      std::fill(padded.begin(), padded.end(), 0.0);
      for (int iy = 0; iy < kg.ny; ++iy) {
        const int dy = ((iy - ky) % py + py) % py;
        for (int ix = 0; ix < kg.nx; ++ix) {
          const double c = cover[kg.index(ix, iy)];
          if (c == 0.0) continue;
          const int dx = ((ix - kx) % px + px) % px;
          padded[static_cast<std::size_t>(dy) * px + dx] = c / total;
        }
      }
      auto& spec = k.spectra_[k.index(j, i)];
      spec.resize(fft->spectrum_size());
      fft->forward(padded, spec);
    }
  }
  k.fft_ = std::move(fft);
  return k;
}

DensityGrid apply_refinement(const DensityGrid& f, const RefinementKernel& kernel,
                             const Eigen::MatrixXd& nu) {
  const int r = kernel.rank();
  if (f.channels() != r) throw std::invalid_argument("apply_refinement: channel count mismatch");
  if (nu.rows() != r || nu.cols() != r) throw std::invalid_argument("apply_refinement: nu shape mismatch");
  if (!same_grid(f.grid(), kernel.grid())) {
    throw std::invalid_argument("apply_refinement: density and kernel grids differ");
  }
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      if (nu(j, i) < 0.0) throw std::invalid_argument("apply_refinement: negative weight");
      if (nu(j, i) > 0.0 && !kernel.active(j, i)) {
        throw std::invalid_argument("apply_refinement: weight on inactive kernel " +
                                    entry_name(j, i));
      }
    }
  }

  const GridSpec& grid = kernel.grid();
  const auto& fft = *kernel.fft_;
  const int px = fft.nx();
  const Mat2& a = kernel.contraction();
  const double det_a = std::abs(a.determinant());

  // Spectra of g^i for every source channel that feeds some target.
  std::vector<std::vector<std::complex<double>>> source(static_cast<std::size_t>(r));
  std::vector<double> padded(fft.real_size());
  for (int i = 0; i < r; ++i) {
    if (!(nu.col(i).maxCoeff() > 0.0)) continue;
    std::fill(padded.begin(), padded.end(), 0.0);
    const auto values = f.channel(i);
    bool any = false;
    for (int iy = 0; iy < grid.ny; ++iy) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        const double v = values[grid.index(ix, iy)];
        if (v == 0.0) continue;
        any = true;
        const Vec2 p = a * grid.cell_center(ix, iy);
        const double u = (p.x() - grid.origin.x()) / grid.h - 0.5;
        const double t = (p.y() - grid.origin.y()) / grid.h - 0.5;
        const int i0 = static_cast<int>(std::floor(u));
        const int k0 = static_cast<int>(std::floor(t));
        if (i0 < 0 || k0 < 0 || i0 + 1 >= grid.nx || k0 + 1 >= grid.ny) {
          throw std::runtime_error("grid underflow: contracted support leaves the grid");
        }
        const double fx = u - i0;
        const double fy = t - k0;
        const double m = v * det_a;
        const std::size_t base = static_cast<std::size_t>(k0) * px + i0;
        padded[base] += m * (1 - fx) * (1 - fy);
        padded[base + 1] += m * fx * (1 - fy);
        padded[base + px] += m * (1 - fx) * fy;
        padded[base + px + 1] += m * fx * fy;
      }
    }
    if (!any) continue;
    source[static_cast<std::size_t>(i)].resize(fft.spectrum_size());
    fft.forward(padded, source[static_cast<std::size_t>(i)]);
  }

  DensityGrid out(grid, r);
  const double scale = kernel.det_q_abs() / static_cast<double>(fft.real_size());
  std::vector<std::complex<double>> acc(fft.spectrum_size());
  for (int j = 0; j < r; ++j) {
    std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
    bool any = false;
    for (int i = 0; i < r; ++i) {
      const auto& g = source[static_cast<std::size_t>(i)];
      if (!(nu(j, i) > 0.0) || g.empty()) continue;
      any = true;
      const auto& ker = kernel.spectra_[kernel.index(j, i)];
      const double weight = nu(j, i);
      for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += weight * ker[n] * g[n];
    }
    if (!any) continue;
    fft.inverse(acc, padded);
    auto dst = out.channel(j);
    for (int iy = 0; iy < grid.ny; ++iy) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        const double v = padded[static_cast<std::size_t>(iy) * px + ix] * scale;
        dst[grid.index(ix, iy)] = v > 0.0 ? v : 0.0;
      }
    }
  }
  out.refresh_masses();
  return out;
}

DensityGrid initial_density(const RefinementProblem& problem, const GridSpec& grid,
                            const Eigen::VectorXd& w, int supersample) {
  const int r = problem.rank();
  if (w.size() != r) throw std::invalid_argument("initial_density: w size mismatch");
  DensityGrid f(grid, r);
  const double cell = grid.h * grid.h;
  for (int j = 0; j < r; ++j) {
    if (!(w(j) > 0.0)) continue;
    const std::vector<double> cover =
        rasterize(problem.windows[static_cast<std::size_t>(j)], grid, supersample);
    double total = 0.0;
    for (double c : cover) total += c;
    const double scale = w(j) / (total * cell);
    auto dst = f.channel(j);
    for (std::size_t n = 0; n < cover.size(); ++n) dst[n] = cover[n] * scale;
  }
  f.refresh_masses();
  return f;
}

FixedPointResult solve_fixed_point(const RefinementProblem& problem,
                                   const RefinementKernel& kernel,
                                   const Eigen::MatrixXd& nu, const Eigen::VectorXd& w,
                                   const FixedPointOptions& options) {
  const int r = problem.rank();
  if (w.size() != r || nu.rows() != r || nu.cols() != r) {
    throw std::invalid_argument("solve_fixed_point: shape mismatch");
  }
  if ((nu * w - w).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("PF1 violated: nu w != w");
  }

  const double transport = kernel.det_q_abs() * std::abs(kernel.contraction().determinant());
  const double cell = kernel.grid().h * kernel.grid().h;
  FixedPointResult result;
  result.density = initial_density(problem, kernel.grid(), w, options.supersample);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.maxit; ++it) {
    DensityGrid next = apply_refinement(result.density, kernel, nu);
    const Eigen::VectorXd expected = transport * (nu * result.density.masses());
    result.mass_transport_errors.push_back((next.masses() - expected).cwiseAbs().maxCoeff());
    residual = 0.0;
    for (int j = 0; j < r; ++j) {
      const auto a = next.channel(j);
      const auto b = result.density.channel(j);
      double s = 0.0;
      for (std::size_t n = 0; n < a.size(); ++n) s += std::abs(a[n] - b[n]);
      residual += s * cell;
    }
    result.residuals.push_back(residual);
    result.density = std::move(next);
    result.iterations = it;
    if (residual < options.tol) return result;
  }
  throw RefineConvergenceError("solve_fixed_point: no convergence after " +
                                   std::to_string(options.maxit) +
                                   " iterations (residual " + std::to_string(residual) + ")",
                               residual);
}

}  // namespace mcms
