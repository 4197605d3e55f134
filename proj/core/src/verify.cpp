#include "mcms/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

namespace mcms {
namespace {

Vec2 to_vec(std::complex<double> z) { return {z.real(), z.imag()}; }

const char* relation_text(VerificationReport::Relation rel) {
  switch (rel) {
    case VerificationReport::Relation::AtMost:
      return "<=";
    case VerificationReport::Relation::AtLeast:
      return ">=";
    case VerificationReport::Relation::Equal:
      return "==";
  }
  return "?";
}

}  // namespace

std::string format_number(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double WeylResult::bound() const {
  return count == 0 ? 0.0 : 5.0 / std::sqrt(static_cast<double>(count));
}

WeylResult weyl_test(std::span<const LabeledPoint> points, const Region& window,
                     const Region& sub) {
  if (points.empty()) throw std::invalid_argument("weyl_test: empty point list");
  WeylResult r;
  r.count = points.size();
  std::size_t hits = 0;
  for (const LabeledPoint& p : points) {
    if (contains(sub, to_vec(p.internal))) ++hits;
  }
  r.empirical = static_cast<double>(hits) / static_cast<double>(points.size());
  r.expected = area(sub) / area(window);
  r.deviation = std::abs(r.empirical - r.expected);
  return r;
}

Id2Report check_id2(const SchemeSpec& spec, const Eigen::MatrixXd& nu, const DensityGrid& f,
                    const std::vector<std::vector<LabeledPoint>>& points,
                    const TranslationSets& tsets, double s, const Id2Options& options) {
  const int r = spec.rank();
  if (f.channels() != r || nu.rows() != r || nu.cols() != r) {
    throw std::invalid_argument("check_id2: shape mismatch");
  }
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      if (nu(j, i) > 0.0 && tsets(j, i).empty()) {
        throw InsufficientRadius("insufficient radius: T(" + std::to_string(j + 1) + "," +
                                 std::to_string(i + 1) + ") is empty at s = " +
                                 format_number(s));
      }
    }
  }

  std::vector<Region> windows;
  for (int i = 0; i < r; ++i) windows.push_back(spec.window(i));
  SquareTable<std::vector<Vec2>> shifts(r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      for (const CycInt& v : tsets(j, i)) shifts(j, i).push_back(to_vec(embed_internal(v)));
    }
  }
  const Mat2 a_inv = spec.contraction().inverse();
  const double det_q = spec.det_q_abs();
  auto density = [&](int i, const Vec2& u) {
    if (!contains(windows[static_cast<std::size_t>(i)], u)) return 0.0;
    return f.value_at(i, u);
  };

  // Points far enough inside the patch that every preimage was enumerated.
  const double inner = s / std::abs(spec.inflation());
  std::vector<const LabeledPoint*> pool;
  for (const auto& comp : points) {
    for (const LabeledPoint& p : comp) {
      if (std::abs(p.phys) <= inner) pool.push_back(&p);
    }
  }
  if (pool.empty()) throw InsufficientRadius("insufficient radius: no interior sample points");

  std::mt19937_64 gen(options.seed);
  for (std::size_t n = pool.size(); n > 1; --n) {
    std::swap(pool[n - 1], pool[static_cast<std::size_t>(gen() % n)]);
  }
  const std::size_t count =
      std::min(pool.size(), static_cast<std::size_t>(std::max(options.samples, 0)));

  // Channels that vanish numerically are scaled against the largest channel,
  // otherwise round-off noise of order 1e-25 would read as an O(1) residual.
  double global_max = 0.0;
  for (int i = 0; i < r; ++i) global_max = std::max(global_max, f.max_value(i));

  Id2Report report;
  report.samples = count;
  double total = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const LabeledPoint& x = *pool[n];
    const int j = x.component;
    const Vec2 xs = to_vec(x.internal);
    const double lhs = density(j, xs);
    double rhs = 0.0;
    for (int i = 0; i < r; ++i) {
      if (!(nu(j, i) > 0.0)) continue;
      const auto& vs = shifts(j, i);
      double acc = 0.0;
      for (const Vec2& v : vs) acc += density(i, a_inv * (xs - v));
      rhs += nu(j, i) * acc / static_cast<double>(vs.size());
    }
    rhs *= det_q;
    const double scale = std::max(f.max_value(j), 1e-9 * global_max);
    const double res = scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
    report.max_residual = std::max(report.max_residual, res);
    total += res;
  }
  report.mean_residual = count == 0 ? 0.0 : total / static_cast<double>(count);
  return report;
}

Eigen::VectorXd id3_estimate(const SchemeSpec& spec, const DensityGrid& f,
                             const std::vector<std::vector<LabeledPoint>>& points) {
  const int r = spec.rank();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(r);
  for (int j = 0; j < r; ++j) {
    const auto& comp = points.at(static_cast<std::size_t>(j));
    if (comp.empty()) continue;
    const Region w = spec.window(j);
    double sum = 0.0;
    for (const LabeledPoint& p : comp) {
      const Vec2 u = to_vec(p.internal);
      if (contains(w, u)) sum += f.value_at(j, u);
    }
    out(j) = area(w) * sum / static_cast<double>(comp.size());
  }
  return out;
}

DensityEstimate density_estimate(const std::vector<std::vector<LabeledPoint>>& points,
                                 std::span<const double> radii) {
  DensityEstimate est;
  est.radii.assign(radii.begin(), radii.end());
  const auto r = static_cast<Eigen::Index>(points.size());
  est.density = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(radii.size()), r);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double s = radii[k];
    if (k > 0 && !(s > radii[k - 1])) {
      throw std::invalid_argument("density_estimate: radii must increase");
    }
    for (Eigen::Index i = 0; i < r; ++i) {
      const auto& comp = points[static_cast<std::size_t>(i)];
      const auto n = std::count_if(comp.begin(), comp.end(), [s](const LabeledPoint& p) {
        return std::abs(p.phys) <= s + 1e-9;
      });
      est.density(static_cast<Eigen::Index>(k), i) =
          static_cast<double>(n) / (std::numbers::pi * s * s);
    }
  }
  for (Eigen::Index i = 0; i < r; ++i) {
    if (radii.size() < 2) {
      est.cauchy.push_back(0.0);
      continue;
    }
    const auto last = static_cast<Eigen::Index>(radii.size()) - 1;
    const double a = est.density(last, i);
    const double b = est.density(last - 1, i);
    est.cauchy.push_back(a > 0.0 ? std::abs(a - b) / a : 0.0);
  }
  return est;
}

double min_distance(const std::vector<std::vector<LabeledPoint>>& points) {
  std::vector<std::complex<double>> all;
  for (const auto& comp : points) {
    for (const LabeledPoint& p : comp) all.push_back(p.phys);
  }
  if (all.size() < 2) return 0.0;
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.real() < b.real(); });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (all[b].real() - all[a].real() >= best) break;
      best = std::min(best, std::abs(all[b] - all[a]));
    }
  }
  return best;
}

void VerificationReport::add(const std::string& name, double value, Relation rel,
                             double threshold) {
  bool pass = false;
  switch (rel) {
    case Relation::AtMost:
      pass = value <= threshold;
      break;
    case Relation::AtLeast:
      pass = value >= threshold;
      break;
    case Relation::Equal:
      pass = value == threshold;
      break;
  }
  ok_ = ok_ && pass;
  lines_.push_back(name + " " + format_number(value) + " " + relation_text(rel) + " " +
                   format_number(threshold) + (pass ? " PASS" : " FAIL"));
}

void VerificationReport::add_failure(const std::string& name, const std::string& reason,
                                     Relation rel, double threshold) {
  ok_ = false;
  lines_.push_back(name + " " + reason + " " + relation_text(rel) + " " +
                   format_number(threshold) + " FAIL");
}

bool VerificationReport::all_pass() const { return ok_; }

std::string VerificationReport::str() const {
  std::string out;
  for (const std::string& l : lines_) out += l + "\n";
  return out;
}

}  // namespace mcms
