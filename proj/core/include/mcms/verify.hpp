#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mcms/refine.hpp"
#include "mcms/scheme.hpp"

namespace mcms {

class InsufficientRadius : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WeylResult {
  double empirical = 0.0;
  double expected = 0.0;
  double deviation = 0.0;
  std::size_t count = 0;

  /// Empirical 5/sqrt(N) tolerance.
  double bound() const;
  bool pass() const { return deviation <= bound(); }
};

/// Fraction of internal images landing in `sub` against area(sub)/area(window).
/// Throws std::invalid_argument for an empty point list.
WeylResult weyl_test(std::span<const LabeledPoint> points, const Region& window,
                     const Region& sub);

struct Id2Options {
  int samples = 100;
  std::uint64_t seed = 1;
};

struct Id2Report {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::size_t samples = 0;
};

/// Point-side invariance equations at finite radius s. For sampled
/// x in Lambda^{(j)} with |x| <= s/q compares p^j(x) against
///   |det Q| sum_i nu^{ji} / #T_s^{ji} sum_{v in T_s^{ji}} p^i(Q^{-1}(x - v)),
/// where p^i(y) = f^i(y*) when y* lies in window i and 0 otherwise.
/// Residuals are relative to the channel maximum of f^j.
/// Throws InsufficientRadius when a weighted T_s^{ji} is empty or no point
/// satisfies |x| <= s/q.
Id2Report check_id2(const SchemeSpec& spec, const Eigen::MatrixXd& nu, const DensityGrid& f,
                    const std::vector<std::vector<LabeledPoint>>& points,
                    const TranslationSets& tsets, double s, const Id2Options& options = {});

/// (area(Omega^{(j)}) / #Lambda_s^{(j)}) sum_x p^j(x) per component.
Eigen::VectorXd id3_estimate(const SchemeSpec& spec, const DensityGrid& f,
                             const std::vector<std::vector<LabeledPoint>>& points);

struct DensityEstimate {
  std::vector<double> radii;
  Eigen::MatrixXd density;  // rows: radii, columns: components
  /// Relative change between the last two radii, per component.
  std::vector<double> cauchy;
};

/// #Lambda_s^{(i)} / (pi s^2) for every s in the increasing list; points
/// must be enumerated to at least the largest radius.
DensityEstimate density_estimate(const std::vector<std::vector<LabeledPoint>>& points,
                                 std::span<const double> radii);

/// Minimal physical distance over all components (0 for fewer than 2 points).
double min_distance(const std::vector<std::vector<LabeledPoint>>& points);

/// One line per check: `name value relation threshold PASS|FAIL`.
class VerificationReport {
 public:
  enum class Relation { AtMost, AtLeast, Equal };

  void add(const std::string& name, double value, Relation rel, double threshold);
  void add_failure(const std::string& name, const std::string& reason, Relation rel,
                   double threshold);

  bool all_pass() const;
  const std::vector<std::string>& lines() const { return lines_; }
  std::string str() const;

 private:
  std::vector<std::string> lines_;
  bool ok_ = true;
};

/// 12 significant digits; magnitudes below 1e-12 print as 0.
std::string format_number(double v);

}  // namespace mcms
