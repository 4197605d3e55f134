#include <cmath>
#include <numbers>
#include <random>

#include "mcms/refine.hpp"

namespace mcms {
namespace {

using cd = std::complex<double>;

double sinc(double t) {
  if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

// Moment series over a fan of triangles (v0, v_a, v_b). For a triangle with
// one vertex at the origin, int_T (k.y)^n dy = 2|T| n!/(n+2)! h_n(alpha, beta)
// with h_n the complete homogeneous polynomial in alpha = k.a, beta = k.b.
cd series_transform(std::span<const Vec2> v, const Vec2& k) {
  constexpr int kTerms = 40;
  const Vec2 o = v[0];
  cd total{0.0, 0.0};
  for (std::size_t t = 1; t + 1 < v.size(); ++t) {
    const Vec2 a = v[t] - o;
    const Vec2 b = v[t + 1] - o;
    const double tri = 0.5 * (a.x() * b.y() - a.y() * b.x());
    const double alpha = k.dot(a);
    const double beta = k.dot(b);
    double hn = 1.0;        // h_0
    double beta_pow = 1.0;  // beta^0
    double inv_fact = 0.5;  // 1/(0+2)!
    cd phase{1.0, 0.0};     // (-i)^0
    cd sum{0.0, 0.0};
    for (int n = 0; n < kTerms; ++n) {
      sum += phase * (hn * inv_fact);
      beta_pow *= beta;
      hn = alpha * hn + beta_pow;
      inv_fact /= (n + 3);
      phase *= cd(0.0, -1.0);
    }
    total += 2.0 * tri * sum;
  }
  return total * std::exp(cd(0.0, -k.dot(o)));
}

cd edge_transform(std::span<const Vec2> v, const Vec2& k) {
  const std::size_t n = v.size();
  cd sum{0.0, 0.0};
  for (std::size_t e = 0; e < n; ++e) {
    const Vec2& a = v[e];
    const Vec2& b = v[(e + 1) % n];
    const Vec2 d = b - a;
    const Vec2 mid = 0.5 * (a + b);
    const double flux = k.x() * d.y() - k.y() * d.x();
    sum += flux * sinc(0.5 * k.dot(d)) * std::exp(cd(0.0, -k.dot(mid)));
  }
  return cd(0.0, 1.0) * sum / k.squaredNorm();
}

}  // namespace

std::complex<double> polygon_ft(const Region& region, const Vec2& k) {
  if (!region.is_polygon()) {
    throw std::invalid_argument("polygon_ft: measure-zero region");
  }
  const auto v = region.vertices();
  double diam = 0.0;
  for (const Vec2& p : v) diam = std::max(diam, (p - v[0]).norm());
  const double a = area(region);
  if (k.norm() * diam <= 1.0) return series_transform(v, k) / a;
  return edge_transform(v, k) / a;
}

Eigen::VectorXcd fourier_product(const RefinementProblem& problem, const Eigen::MatrixXd& nu,
                                 const Eigen::VectorXd& w, const Vec2& k, int depth) {
  const int r = problem.rank();
  if (nu.rows() != r || nu.cols() != r || w.size() != r) {
    throw std::invalid_argument("fourier_product: shape mismatch");
  }
  const Mat2 at = problem.contraction.transpose();
  std::vector<Vec2> kappas{k};
  if (depth >= 0) {
    for (int l = 0; l < depth; ++l) kappas.push_back(at * kappas.back());
  } else {
    constexpr int kMaxDepth = 10000;
    while ((at * kappas.back()).norm() >= 1e-8) {
      kappas.push_back(at * kappas.back());
      if (static_cast<int>(kappas.size()) > kMaxDepth) {
        throw std::invalid_argument("fourier_product: A^t is not contractive");
      }
    }
  }

  Eigen::VectorXcd v = w.cast<cd>();
  Eigen::MatrixXcd y(r, r);
  for (auto it = kappas.rbegin(); it != kappas.rend(); ++it) {
    for (int j = 0; j < r; ++j) {
      for (int i = 0; i < r; ++i) {
        if (nu(j, i) > 0.0) {
          y(j, i) = nu(j, i) * polygon_ft(problem.transition(j, i), *it);
        } else {
          y(j, i) = 0.0;
        }
      }
    }
    v = y * v;
  }
  return v;
}

std::complex<double> grid_transform(const DensityGrid& f, int channel, const Vec2& k) {
  const GridSpec& g = f.grid();
  std::vector<cd> ex(static_cast<std::size_t>(g.nx));
  for (int ix = 0; ix < g.nx; ++ix) {
    ex[static_cast<std::size_t>(ix)] = std::exp(cd(0.0, -k.x() * g.cell_center(ix, 0).x()));
  }
  const auto values = f.channel(channel);
  cd total{0.0, 0.0};
  for (int iy = 0; iy < g.ny; ++iy) {
    cd row{0.0, 0.0};
    const double* line = values.data() + g.index(0, iy);
    for (int ix = 0; ix < g.nx; ++ix) {
      if (line[ix] != 0.0) row += line[ix] * ex[static_cast<std::size_t>(ix)];
    }
    total += row * std::exp(cd(0.0, -k.y() * g.cell_center(0, iy).y()));
  }
  return total * (g.h * g.h);
}

SolverComparison compare_solvers(const DensityGrid& f, const RefinementProblem& problem,
                                 const Eigen::MatrixXd& nu, const Eigen::VectorXd& w,
                                 std::span<const Vec2> wavevectors) {
  const int r = problem.rank();
  if (f.channels() != r) throw std::invalid_argument("compare_solvers: channel mismatch");
  const double scale = w.cwiseAbs().maxCoeff();
  SolverComparison out;
  for (const Vec2& k : wavevectors) {
    const Eigen::VectorXcd expected = fourier_product(problem, nu, w, k);
    double dev = 0.0;
    for (int j = 0; j < r; ++j) {
      dev = std::max(dev, std::abs(grid_transform(f, j, k) - expected(j)));
    }
    dev /= scale;
    out.per_wavevector.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  return out;
}

std::vector<Vec2> sample_wavevectors(int count, double kmax, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<Vec2> out;
  for (int n = 0; n < count; ++n) {
    const double rad = kmax * std::sqrt(unit());
    const double theta = 2.0 * std::numbers::pi * unit();
    out.emplace_back(rad * std::cos(theta), rad * std::sin(theta));
  }
  return out;
}

}  // namespace mcms
