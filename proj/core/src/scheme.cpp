#include "mcms/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/LU>

namespace mcms {
namespace {

constexpr double kRadiusSlack = 1e-9;
constexpr double kBoundaryEps = 1e-6;

Vec2 to_vec(std::complex<double> z) { return {z.real(), z.imag()}; }

std::string entry_name(int j, int i) {
  return "(" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")";
}

std::function<bool(const Vec2&)> window_member(const Region& w, BoundaryMode mode) {
  if (mode == BoundaryMode::Open) {
    return [w](const Vec2& u) { return contains_interior(w, u, kMembershipEps); };
  }
  return [w](const Vec2& u) { return contains(w, u, kMembershipEps); };
}

}  // namespace

Mat2 complex_matrix(std::complex<double> z) {
  Mat2 m;
  m << z.real(), -z.imag(), z.imag(), z.real();
  return m;
}

Region SchemeSpec::window(int i) const {
  return translated(windows.at(static_cast<std::size_t>(i)), gamma);
}

Mat2 SchemeSpec::similarity() const { return complex_matrix(inflation()); }
Mat2 SchemeSpec::contraction() const { return complex_matrix(internal_factor()); }

void SchemeSpec::validate() const {
  const int r = rank();
  if (r < 1) throw std::invalid_argument("scheme: at least one component required");
  if (static_cast<int>(coset_reps.size()) != r) {
    throw std::invalid_argument("scheme: need one coset representative per window");
  }
  std::set<int> residues;
  for (int i = 0; i < r; ++i) {
    if (!windows[static_cast<std::size_t>(i)].is_polygon()) {
      throw std::invalid_argument("scheme: window " + std::to_string(i + 1) +
                                  " must be a polygon with positive area");
    }
    if (!residues.insert(residue(i)).second) {
      throw std::invalid_argument("scheme: coset representatives must have distinct rho");
    }
  }
  const double a = std::abs(internal_factor());
  if (!(a > 0.0) || !(a < 1.0)) {
    throw std::invalid_argument("scheme: internal image of Q must be a contraction");
  }
}

SchemeSpec penrose_scheme(const Vec2& gamma) {
  const double tau = std::numbers::phi;
  const Region p = regular_pentagon();
  SchemeSpec spec;
  spec.windows = {p, scaled(p, -tau), scaled(p, tau), scaled(p, -1.0)};
  spec.coset_reps = {CycInt::integer(1), CycInt::integer(2), CycInt::integer(3),
                     CycInt::integer(4)};
  spec.q_mult = CycInt::tau();
  spec.gamma = gamma;
  return spec;
}

TransitionWindows transition_windows(const SchemeSpec& spec) {
  spec.validate();
  const int r = spec.rank();
  const Mat2 a = spec.contraction();
  std::vector<Region> images;
  for (int i = 0; i < r; ++i) images.push_back(linear_image(spec.window(i), a));
  TransitionWindows out(r);
  for (int j = 0; j < r; ++j) {
    const Region target = spec.window(j);
    for (int i = 0; i < r; ++i) out(j, i) = erode(target, images[static_cast<std::size_t>(i)]);
  }
  return out;
}

Eigen::MatrixXd build_nu(const SchemeSpec& spec, const TransitionWindows& windows_ji,
                         const NuPolicy& policy) {
  const int r = spec.rank();
  if (windows_ji.rank() != r) throw std::invalid_argument("build_nu: rank mismatch");

  if (const auto* given = std::get_if<ExplicitNu>(&policy)) {
    const Eigen::MatrixXd& m = given->matrix;
    if (m.rows() != r || m.cols() != r) {
      throw std::invalid_argument("build_nu: explicit matrix must be " +
                                  std::to_string(r) + "x" + std::to_string(r));
    }
    for (int j = 0; j < r; ++j) {
      for (int i = 0; i < r; ++i) {
        const double v = m(j, i);
        if (!std::isfinite(v) || v < 0.0) {
          throw std::invalid_argument("build_nu: entry " + entry_name(j, i) +
                                      " must be finite and nonnegative");
        }
        if (v > 0.0 && area(windows_ji(j, i)) == 0.0) {
          throw std::invalid_argument("ghost transition at " + entry_name(j, i));
        }
      }
    }
    return m;
  }

  const bool by_scale = std::holds_alternative<ScaleMarkov>(policy);
  Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      const double a = area(windows_ji(j, i));
      nu(j, i) = by_scale ? std::sqrt(a) : a;
    }
  }
  for (int i = 0; i < r; ++i) {
    const double col = nu.col(i).sum();
    if (!(col > 0.0)) {
      throw std::invalid_argument("build_nu: column " + std::to_string(i + 1) +
                                  " has no positive-area transition window");
    }
    nu.col(i) /= col;
  }
  return nu;
}

double embedding_inverse_norm() {
  static const double value = [] {
    Eigen::Matrix4d b;
    for (int k = 0; k < 4; ++k) {
      const auto p = xi_power(k);
      const auto q = xi_power(2 * k);
      b.col(k) << p.real(), p.imag(), q.real(), q.imag();
    }
    return b.inverse().cwiseAbs().rowwise().sum().maxCoeff();
  }();
  return value;
}

std::vector<CycInt> enumerate_coset(int residue, double s,
                                    const Region& region,
                                    const std::function<bool(const Vec2&)>& member) {
  std::vector<CycInt> out;
  if (region.is_empty() || !(s > 0.0)) return out;

  const double reach = circumradius(region);
  const auto bound = static_cast<std::int64_t>(
      std::floor(embedding_inverse_norm() * std::sqrt(s * s + reach * reach)) + 1);

  // Internal images lie in a disc around the region's box centre; for fixed
  // (m0, m1, m2) that bounds m3 to a short interval, since xi^3* = xi.
  const BoundingBox box = bounding_box(region);
  const std::complex<double> centre{0.5 * (box.lo.x() + box.hi.x()),
                                    0.5 * (box.lo.y() + box.hi.y())};
  double rad = 0.0;
  for (const Vec2& v : region.vertices()) {
    rad = std::max(rad, std::abs(std::complex<double>(v.x(), v.y()) - centre));
  }
  rad += 1e-6;

  const std::complex<double> xi1 = xi_power(1);
  const std::complex<double> xi2 = xi_power(2);
  const std::complex<double> xi3 = xi_power(3);
  const std::complex<double> xi4 = xi_power(4);
  const double s_max = s + kRadiusSlack;

  for (std::int64_t m0 = -bound; m0 <= bound; ++m0) {
    for (std::int64_t m1 = -bound; m1 <= bound; ++m1) {
      for (std::int64_t m2 = -bound; m2 <= bound; ++m2) {
        const auto fm0 = static_cast<double>(m0);
        const auto fm1 = static_cast<double>(m1);
        const auto fm2 = static_cast<double>(m2);
        const std::complex<double> ib = fm0 + fm1 * xi2 + fm2 * xi4;
        const std::complex<double> d = ib - centre;
        const double beta = (d * std::conj(xi1)).real();
        const double disc = beta * beta - std::norm(d) + rad * rad;
        if (disc < 0.0) continue;
        const double root = std::sqrt(disc);
        auto lo = static_cast<std::int64_t>(std::ceil(-beta - root - 1e-9));
        auto hi = static_cast<std::int64_t>(std::floor(-beta + root + 1e-9));
        lo = std::max(lo, -bound);
        hi = std::min(hi, bound);
        if (lo > hi) continue;
        const std::int64_t want = ((residue - (m0 + m1 + m2)) % 5 + 5) % 5;
        const std::int64_t start = lo + (((want - lo) % 5) + 5) % 5;
        const std::complex<double> pb = fm0 + fm1 * xi1 + fm2 * xi2;
        for (std::int64_t m3 = start; m3 <= hi; m3 += 5) {
          const auto fm3 = static_cast<double>(m3);
          if (std::abs(pb + fm3 * xi3) > s_max) continue;
          const std::complex<double> u = ib + fm3 * xi1;
          if (member(Vec2(u.real(), u.imag()))) out.emplace_back(m0, m1, m2, m3);
        }
      }
    }
  }
  return out;
}

LabeledPoint label(const CycInt& x, int component) {
  return {component, x, embed_physical(x), embed_internal(x)};
}

std::vector<LabeledPoint> generate_points(const SchemeSpec& spec, int component,
                                          double s) {
  spec.validate();
  const Region w = spec.window(component);
  const auto coeffs =
      enumerate_coset(spec.residue(component), s, w, window_member(w, spec.boundary));
  std::vector<LabeledPoint> out;
  out.reserve(coeffs.size());
  for (const CycInt& x : coeffs) out.push_back(label(x, component));
  return out;
}

std::vector<std::vector<LabeledPoint>> generate_all_points(const SchemeSpec& spec,
                                                           double s) {
  std::vector<std::vector<LabeledPoint>> out;
  for (int i = 0; i < spec.rank(); ++i) out.push_back(generate_points(spec, i, s));
  return out;
}

TranslationSets translation_sets(const SchemeSpec& spec,
                                 const TransitionWindows& windows_ji, double s) {
  spec.validate();
  const int r = spec.rank();
  TranslationSets out(r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      const Region& w = windows_ji(j, i);
      if (w.is_empty()) continue;
      const CycInt offset = spec.coset_reps[static_cast<std::size_t>(j)] -
                            spec.q_mult * spec.coset_reps[static_cast<std::size_t>(i)];
      out(j, i) = enumerate_coset(rho(offset), s, w,
                                  window_member(w, BoundaryMode::Closed));
    }
  }
  return out;
}

ClosureReport check_selfsim_closure(const SchemeSpec& spec,
                                    const std::vector<std::vector<LabeledPoint>>& points,
                                    const TranslationSets& tsets) {
  const int r = spec.rank();
  ClosureReport report;
  for (int j = 0; j < r; ++j) {
    const Region w = spec.window(j);
    const auto member = window_member(w, spec.boundary);
    for (int i = 0; i < r; ++i) {
      for (const LabeledPoint& x : points.at(static_cast<std::size_t>(i))) {
        for (const CycInt& v : tsets(j, i)) {
          ++report.checked;
          const CycInt y = spec.q_mult * x.coeffs + v;
          ClosureViolation record{j, i, x.coeffs, v};
          if (rho(y) != spec.residue(j)) {
            report.violations.push_back(record);
            continue;
          }
          const Vec2 u = to_vec(embed_internal(y));
          if (member(u)) continue;
          if (contains(w, u, kBoundaryEps)) {
            report.boundary_cases.push_back(record);
          } else {
            report.violations.push_back(record);
          }
        }
      }
    }
  }
  return report;
}

}  // namespace mcms
