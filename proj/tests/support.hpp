#pragma once
// Shared generators and independent oracles for the test binaries.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "mcms/cyclotomic.hpp"
#include "mcms/pfsolve.hpp"
#include "mcms/polygeom.hpp"
#include "mcms/refine.hpp"
#include "mcms/scheme.hpp"

namespace testing_support {

using mcms::CycInt;
using mcms::Region;
using mcms::Vec2;

inline const double kTau = (1.0 + std::sqrt(5.0)) / 2.0;

// Small hand-rolled generator for property tests.
struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  std::mt19937_64 rng;

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  CycInt cyc(std::int64_t bound) {
    return {integer(-bound, bound), integer(-bound, bound), integer(-bound, bound),
            integer(-bound, bound)};
  }
  Vec2 vec(double bound) { return {real(-bound, bound), real(-bound, bound)}; }
  // Random convex polygon: sorted angles on a randomly stretched ellipse.
  Region convex(const Vec2& centre, double radius) {
    const int n = static_cast<int>(integer(3, 9));
    std::vector<double> angles;
    for (int k = 0; k < n; ++k) angles.push_back(real(0.0, 2.0 * std::numbers::pi));
    std::sort(angles.begin(), angles.end());
    const double ax = radius * real(0.5, 1.0), ay = radius * real(0.5, 1.0);
    std::vector<Vec2> v;
    for (double a : angles) v.push_back(centre + Vec2(ax * std::cos(a), ay * std::sin(a)));
    return Region::polygon(v);
  }
};

// Coefficient sums against e^{2 pi i k / 5}, and against its square for the star image.
inline std::complex<double> oracle_phys(const CycInt& a) {
  std::complex<double> z = 0.0;
  for (int k = 0; k < 4; ++k) z += static_cast<double>(a[k]) * std::polar(1.0, 2.0 * std::numbers::pi * k / 5.0);
  return z;
}
inline std::complex<double> oracle_int(const CycInt& a) {
  std::complex<double> z = 0.0;
  for (int k = 0; k < 4; ++k) z += static_cast<double>(a[k]) * std::polar(1.0, 4.0 * std::numbers::pi * k / 5.0);
  return z;
}

// c * conv{fifth roots of unity}
inline std::vector<Vec2> pentagon_vertices(double c) {
  std::vector<Vec2> v;
  for (int k = 0; k < 5; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 5.0;
    v.emplace_back(c * std::cos(a), c * std::sin(a));
  }
  return v;
}

// Every vertex of `r` matches some vertex of `expect` and vice versa.
inline double vertex_set_distance(const Region& r, const std::vector<Vec2>& expect) {
  double worst = 0.0;
  auto verts = r.vertices();
  if (verts.size() != expect.size()) return 1e300;
  for (const Vec2& e : expect) {
    double best = 1e300;
    for (const Vec2& v : verts) best = std::min(best, (v - e).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

inline Eigen::MatrixXd example2_nu() {
  Eigen::MatrixXd nu(4, 4);
  nu << 2, 0, 0, 2, 1, 1, 1, 1, 1, 1, 1, 1, 2, 0, 0, 2;
  return nu / 4.0;
}

// Example 1 matrix as printed, in closed form.
inline Eigen::MatrixXd example1_printed_nu() {
  const double t = kTau;
  Eigen::MatrixXd nu(4, 4);
  nu << (2 - t) / 4, 0, 0, (t - 1) / 4,
        t / 4, 2 - t, t - 1, (3 - t) / 4,
        (3 - t) / 4, t - 1, 2 - t, t / 4,
        (t - 1) / 4, 0, 0, (2 - t) / 4;
  return nu;
}

// r = 1 square toy: [-1,1]^2, A = Id/2, nu = (1), |det Q| = 4.
inline mcms::RefinementProblem toy_problem() {
  mcms::RefinementProblem p;
  const Region sq = Region::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  p.windows = {sq};
  p.contraction = 0.5 * mcms::Mat2::Identity();
  p.transition = mcms::TransitionWindows(1);
  p.transition(0, 0) = mcms::erode(sq, mcms::linear_image(sq, p.contraction));
  p.det_q_abs = 4.0;
  return p;
}

inline double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

// prod_l sinc(kx / 2^{l+1}) sinc(ky / 2^{l+1})
inline double toy_closed_form(const Vec2& k) {
  double prod = 1.0;
  for (int l = 0; l < 80; ++l) {
    const double s = std::ldexp(1.0, -(l + 1));
    prod *= sinc(k.x() * s) * sinc(k.y() * s);
  }
  return prod;
}

struct Solved {
  mcms::SchemeSpec spec;
  Eigen::MatrixXd nu;
  mcms::PfResult pf;
  mcms::RefinementProblem problem;
  mcms::FixedPointResult fixed;
};

inline Solved solve_penrose(const mcms::NuPolicy& policy, double h) {
  Solved s;
  s.spec = mcms::penrose_scheme();
  const auto tw = mcms::transition_windows(s.spec);
  s.nu = mcms::build_nu(s.spec, tw, policy);
  s.pf = mcms::pf_eigen(s.nu);
  s.problem = mcms::refinement_problem(s.spec);
  const auto kernel = mcms::RefinementKernel::build(s.problem, s.nu, mcms::common_grid(s.problem, h));
  s.fixed = mcms::solve_fixed_point(s.problem, kernel, s.nu, s.pf.w);
  return s;
}

// Process-wide caches; every test binary solves each preset at most once.
inline const Solved& example1_128() {
  static const Solved s = solve_penrose(mcms::ScaleMarkov{}, 1.0 / 128);
  return s;
}
inline const Solved& example2_128() {
  static const Solved s = solve_penrose(mcms::ExplicitNu{example2_nu()}, 1.0 / 128);
  return s;
}

}  // namespace testing_support
