#pragma once

#include <complex>
#include <functional>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mcms/cyclotomic.hpp"
#include "mcms/polygeom.hpp"

namespace mcms {

enum class BoundaryMode { Closed, Open };

/// r x r table indexed (j, i), both 0-based; row j is the target component.
template <class T>
class SquareTable {
 public:
  SquareTable() = default;
  explicit SquareTable(int r) : r_(r), cells_(static_cast<std::size_t>(r) * r) {}

  int rank() const { return r_; }
  T& operator()(int j, int i) { return cells_.at(static_cast<std::size_t>(j) * r_ + i); }
  const T& operator()(int j, int i) const {
    return cells_.at(static_cast<std::size_t>(j) * r_ + i);
  }

 private:
  int r_ = 0;
  std::vector<T> cells_;
};

using TransitionWindows = SquareTable<Region>;
using TranslationSets = SquareTable<std::vector<CycInt>>;

/// A multi-component model set over Z[xi] with m = n = 2.
///
/// Component i (0-based) is {x in z_i + L : x* in window(i)}, where L is the
/// kernel of rho. The linear part Q is multiplication by q_mult; its internal
/// shadow A is multiplication by star(q_mult) and must be contractive.
struct SchemeSpec {
  std::vector<Region> windows;     // undisplaced
  std::vector<CycInt> coset_reps;  // distinct rho values
  CycInt q_mult = CycInt::integer(1);
  Vec2 gamma = Vec2::Zero();
  BoundaryMode boundary = BoundaryMode::Closed;

  int rank() const { return static_cast<int>(windows.size()); }
  /// Window of component i translated by gamma.
  Region window(int i) const;
  int residue(int i) const { return rho(coset_reps.at(static_cast<std::size_t>(i))); }

  std::complex<double> inflation() const { return embed_physical(q_mult); }
  std::complex<double> internal_factor() const { return embed_internal(q_mult); }
  Mat2 similarity() const;
  Mat2 contraction() const;
  double det_q_abs() const { return std::norm(inflation()); }

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

/// Multiplication by a complex number as a real 2x2 matrix.
Mat2 complex_matrix(std::complex<double> z);

/// Rhombic Penrose vertex classes: windows P, -tau P, tau P, -P for cosets
/// rho = 1..4 (representatives the integers 1..4), Q = tau.
SchemeSpec penrose_scheme(const Vec2& gamma = Vec2::Zero());

struct LabeledPoint {
  int component = 0;  // 0-based
  CycInt coeffs;
  std::complex<double> phys;
  std::complex<double> internal;
};

/// Entry (j, i) = erode(window(j), A * window(i)).
TransitionWindows transition_windows(const SchemeSpec& spec);

struct AreaMarkov {};
/// Weights proportional to sqrt(area): the linear scale of each transition
/// window. For the Penrose scheme this reproduces the reference Example 1
/// matrix.
struct ScaleMarkov {};
struct ExplicitNu {
  Eigen::MatrixXd matrix;
};
using NuPolicy = std::variant<AreaMarkov, ScaleMarkov, ExplicitNu>;

/// Weight matrix nu with nu(j, i) = 0 on every measure-zero transition window.
/// Throws std::invalid_argument for ghost transitions (explicit positive
/// weight on a measure-zero window), all-zero Markov columns, negative or
/// non-finite entries, or a shape mismatch.
Eigen::MatrixXd build_nu(const SchemeSpec& spec, const TransitionWindows& windows_ji,
                         const NuPolicy& policy);

/// ||B^{-1}||_inf for the real 4x4 matrix sending coefficients to
/// (Re x, Im x, Re x*, Im x*).
double embedding_inverse_norm();

/// Every y with rho(y) == residue, |phys(y)| <= s and internal(y) accepted by
/// `member`, which must only accept points of `region`. Sorted by coefficients.
std::vector<CycInt> enumerate_coset(
    int residue, double s, const Region& region,
    const std::function<bool(const Vec2&)>& member);

/// Lambda^{(i)} intersected with the closed physical disc of radius s.
std::vector<LabeledPoint> generate_points(const SchemeSpec& spec, int component,
                                          double s);
/// All components, indexed by component.
std::vector<std::vector<LabeledPoint>> generate_all_points(const SchemeSpec& spec,
                                                           double s);

LabeledPoint label(const CycInt& x, int component);

/// Entry (j, i): all y in L + (z_j - Q z_i) with |phys(y)| <= s and
/// internal(y) in windows_ji(j, i) (closed).
TranslationSets translation_sets(const SchemeSpec& spec,
                                 const TransitionWindows& windows_ji, double s);

struct ClosureViolation {
  int target = 0;  // j
  int source = 0;  // i
  CycInt x;
  CycInt v;
};

struct ClosureReport {
  std::size_t checked = 0;
  std::vector<ClosureViolation> violations;
  /// Misses at 1e-9 that are accepted at 1e-6.
  std::vector<ClosureViolation> boundary_cases;
};

/// Checks Q x + v in Lambda^{(j)} for all x in points[i], v in tsets(j, i).
ClosureReport check_selfsim_closure(const SchemeSpec& spec,
                                    const std::vector<std::vector<LabeledPoint>>& points,
                                    const TranslationSets& tsets);

}  // namespace mcms
