#include <gtest/gtest.h>

#include <set>

#include "mcms/verify.hpp"
#include "support.hpp"

using namespace mcms;
using testing_support::Gen;
using testing_support::kTau;
using testing_support::pentagon_vertices;
using testing_support::vertex_set_distance;

namespace {

// Exhaustive count over a full coefficient box, nothing pruned.
// Windows are c P with c = 1, -tau, tau, -1 for residues 1..4.
std::array<int, 4> brute_force_counts(double s) {
  Eigen::Matrix4d b;
  for (int k = 0; k < 4; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 5.0;
    b(0, k) = std::cos(a);
    b(1, k) = std::sin(a);
    b(2, k) = std::cos(2.0 * a);
    b(3, k) = std::sin(2.0 * a);
  }
  const double inv_norm = b.inverse().cwiseAbs().rowwise().sum().maxCoeff();
  const int m = static_cast<int>(std::floor(inv_norm * std::sqrt(s * s + kTau * kTau))) + 1;
  const double scale[4] = {1.0, -kTau, kTau, -1.0};
  const double inradius = std::cos(std::numbers::pi / 5.0);
  std::array<int, 4> counts{};
  for (int m0 = -m; m0 <= m; ++m0)
    for (int m1 = -m; m1 <= m; ++m1)
      for (int m2 = -m; m2 <= m; ++m2)
        for (int m3 = -m; m3 <= m; ++m3) {
          const int res = (((m0 + m1 + m2 + m3) % 5) + 5) % 5;
          if (res == 0) continue;
          const Eigen::Vector4d y = b * Eigen::Vector4d(m0, m1, m2, m3);
          if (std::hypot(y(0), y(1)) > s + 1e-12) continue;
          const double c = scale[res - 1];
          bool inside = true;
          for (int k = 0; k < 5 && inside; ++k) {
            const double a = std::numbers::pi * (2 * k + 1) / 5.0;
            const double proj = (c > 0 ? 1.0 : -1.0) * (y(2) * std::cos(a) + y(3) * std::sin(a));
            inside = proj <= std::abs(c) * inradius + 1e-9;
          }
          if (inside) ++counts[res - 1];
        }
  return counts;
}

std::vector<Vec2> scaled_pentagon(double c) { return pentagon_vertices(c); }

}  // namespace

TEST(PenroseScheme, ContractionFactor) {
  const SchemeSpec spec = penrose_scheme();
  EXPECT_NEAR(spec.internal_factor().real(), -0.618034, 1e-6);
  EXPECT_NEAR(spec.internal_factor().real(), -1.0 / kTau, 1e-14);
  EXPECT_NEAR(spec.internal_factor().imag(), 0.0, 1e-15);
}

TEST(PenroseScheme, WindowAreaRatio) {
  const SchemeSpec spec = penrose_scheme();
  EXPECT_NEAR(area(spec.window(2)) / area(spec.window(0)), kTau * kTau, 1e-12);
}

TEST(PenroseScheme, CosetResidues) {
  const SchemeSpec spec = penrose_scheme();
  EXPECT_EQ(rho(spec.coset_reps[2]), 3);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(spec.residue(i), i + 1);
}

TEST(PenroseScheme, DeterminantsReciprocal) {
  const SchemeSpec spec = penrose_scheme();
  EXPECT_NEAR(std::abs(spec.contraction().determinant()) * spec.det_q_abs(), 1.0, 1e-12);
  EXPECT_NEAR(spec.det_q_abs(), kTau * kTau, 1e-12);
}

TEST(SchemeValidate, RejectsExpandingShadow) {
  SchemeSpec spec = penrose_scheme();
  spec.q_mult = CycInt::integer(2);
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(SchemeValidate, RejectsDegeneratePrimaryWindow) {
  SchemeSpec spec = penrose_scheme();
  spec.windows[1] = Region::point(Vec2::Zero());
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(SchemeValidate, RejectsRepeatedCoset) {
  SchemeSpec spec = penrose_scheme();
  spec.coset_reps[1] = CycInt::integer(6);
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(TransitionWindows, FullPenroseTable) {
  const auto tw = transition_windows(penrose_scheme());
  const double t = kTau;
  // signed scale of P, NaN for empty, 0 for the singleton
  const double E = std::nan("");
  const double table[4][4] = {
      {1 / (t * t * t), 0.0, E, 1 / (t * t)},
      {-1.0, -1 / (t * t), -1 / t, -(1 / (t * t * t) + 1 / t)},
      {1 / (t * t * t) + 1 / t, 1 / t, 1 / (t * t), 1.0},
      {-1 / (t * t), E, 0.0, -1 / (t * t * t)},
  };
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      SCOPED_TRACE("entry (" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
      const double c = table[j][i];
      if (std::isnan(c)) {
        EXPECT_TRUE(tw(j, i).is_empty());
      } else if (c == 0.0) {
        ASSERT_TRUE(tw(j, i).is_point());
        EXPECT_LT(tw(j, i).point().norm(), 1e-9);
      } else {
        ASSERT_TRUE(tw(j, i).is_polygon());
        EXPECT_LT(vertex_set_distance(tw(j, i), scaled_pentagon(c)), 1e-9);
      }
    }
  }
}

TEST(TransitionWindows, NamedEntries) {
  const auto tw = transition_windows(penrose_scheme());
  EXPECT_LT(vertex_set_distance(tw(1, 0), scaled_pentagon(-1.0)), 1e-9);
  EXPECT_TRUE(tw(0, 1).is_point());
  EXPECT_LT(vertex_set_distance(tw(2, 3), scaled_pentagon(1.0)), 1e-9);
  EXPECT_LT(vertex_set_distance(tw(1, 3), scaled_pentagon(-(std::pow(kTau, -3) + 1 / kTau))), 1e-9);
}

TEST(TransitionWindows, GammaTranslatesConsistently) {
  // A has |a| != 1, so Omega^{ji} moves by (1 - a) gamma
  const Vec2 gamma(0.01, -0.02);
  const auto t0 = transition_windows(penrose_scheme());
  const auto t1 = transition_windows(penrose_scheme(gamma));
  const Vec2 shift = (1.0 + 1.0 / kTau) * gamma;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) {
      if (!t0(j, i).is_polygon()) continue;
      std::vector<Vec2> expect;
      for (const Vec2& v : t0(j, i).vertices()) expect.push_back(v + shift);
      EXPECT_LT(vertex_set_distance(t1(j, i), expect), 1e-9);
    }
}

TEST(BuildNu, AreaMarkovIsAreaWeighted) {
  const SchemeSpec spec = penrose_scheme();
  const auto tw = transition_windows(spec);
  const Eigen::MatrixXd nu = build_nu(spec, tw, AreaMarkov{});
  for (int i = 0; i < 4; ++i) {
    double col = 0.0;
    for (int k = 0; k < 4; ++k) col += area(tw(k, i));
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(nu(j, i), area(tw(j, i)) / col, 1e-12);
  }
}

TEST(BuildNu, AreaMarkovColumnSums) {
  const SchemeSpec spec = penrose_scheme();
  const Eigen::MatrixXd nu = build_nu(spec, transition_windows(spec), AreaMarkov{});
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(nu.col(i).sum(), 1.0, 1e-12);
  EXPECT_EQ(nu(0, 1), 0.0);
  EXPECT_EQ(nu(3, 2), 0.0);
}

TEST(BuildNu, ScaleMarkovMatchesPrintedExampleOne) {
  const SchemeSpec spec = penrose_scheme();
  const Eigen::MatrixXd nu = build_nu(spec, transition_windows(spec), ScaleMarkov{});
  EXPECT_LT((nu - testing_support::example1_printed_nu()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(nu(0, 0), (2 - kTau) / 4, 1e-12);
}

TEST(BuildNu, ExplicitExampleTwo) {
  const SchemeSpec spec = penrose_scheme();
  const Eigen::MatrixXd nu =
      build_nu(spec, transition_windows(spec), ExplicitNu{testing_support::example2_nu()});
  EXPECT_DOUBLE_EQ(nu(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(nu(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(nu(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(nu(0, 3), 0.5);
}

TEST(BuildNu, GhostTransitionRejected) {
  const SchemeSpec spec = penrose_scheme();
  Eigen::MatrixXd m = testing_support::example2_nu();
  m(0, 1) = 0.1;  // Omega^{12} is a single point
  try {
    build_nu(spec, transition_windows(spec), ExplicitNu{m});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("ghost transition"), std::string::npos);
  }
}

TEST(BuildNu, NegativeAndShapeRejected) {
  const SchemeSpec spec = penrose_scheme();
  const auto tw = transition_windows(spec);
  Eigen::MatrixXd m = testing_support::example2_nu();
  m(1, 1) = -0.1;
  EXPECT_THROW(build_nu(spec, tw, ExplicitNu{m}), std::invalid_argument);
  EXPECT_THROW(build_nu(spec, tw, ExplicitNu{Eigen::MatrixXd::Identity(3, 3)}), std::invalid_argument);
}

TEST(BuildNu, AllZeroColumnRejected) {
  // one component whose transition window is a point: nothing survives
  SchemeSpec spec;
  spec.windows = {regular_pentagon()};
  spec.coset_reps = {CycInt::integer(1)};
  spec.q_mult = CycInt::tau();
  TransitionWindows tw(1);
  tw(0, 0) = Region::point(Vec2::Zero());
  EXPECT_THROW(build_nu(spec, tw, AreaMarkov{}), std::invalid_argument);
}

TEST(GeneratePoints, ZeroNeverAppears) {
  for (const auto& comp : generate_all_points(penrose_scheme(), 5.0))
    for (const LabeledPoint& p : comp) EXPECT_NE(p.coeffs, CycInt{});
}

TEST(GeneratePoints, OneInFirstComponentWhenClosed) {
  const auto pts = generate_points(penrose_scheme(), 0, 1.0);
  EXPECT_TRUE(std::any_of(pts.begin(), pts.end(),
                          [](const LabeledPoint& p) { return p.coeffs == CycInt::integer(1); }));
  SchemeSpec open = penrose_scheme();
  open.boundary = BoundaryMode::Open;
  const auto opts = generate_points(open, 0, 1.0);
  EXPECT_FALSE(std::any_of(opts.begin(), opts.end(),
                           [](const LabeledPoint& p) { return p.coeffs == CycInt::integer(1); }));
}

TEST(GeneratePoints, FrozenCountAtRadiusTen) {
  const auto pts = generate_all_points(penrose_scheme(), 10.0);
  const std::array<std::size_t, 4> expect = {70, 155, 155, 70};
  std::size_t total = 0;
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(pts[i].size(), expect[i]);
    total += pts[i].size();
  }
  EXPECT_EQ(total, 450u);
}

TEST(GeneratePoints, MatchesBruteForceOracle) {
  for (double s : {0.5, 1.0, 5.0, 10.0}) {
    const auto oracle = brute_force_counts(s);
    const auto pts = generate_all_points(penrose_scheme(), s);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(static_cast<int>(pts[i].size()), oracle[i]) << "s=" << s;
  }
}

TEST(GeneratePoints, LabelsAreConsistent) {
  const SchemeSpec spec = penrose_scheme();
  const auto pts = generate_all_points(spec, 8.0);
  for (int i = 0; i < 4; ++i)
    for (const LabeledPoint& p : pts[i]) {
      EXPECT_EQ(p.component, i);
      EXPECT_EQ(rho(p.coeffs), spec.residue(i));
      EXPECT_TRUE(contains(spec.window(i), Vec2(p.internal.real(), p.internal.imag())));
      EXPECT_LE(std::abs(p.phys), 8.0 + 1e-9);
    }
}

TEST(TranslationSets, ZeroInT12) {
  const SchemeSpec spec = penrose_scheme();
  const auto ts = translation_sets(spec, transition_windows(spec), 5.0);
  EXPECT_EQ(rho(spec.coset_reps[0] - spec.q_mult * spec.coset_reps[1]), 0);
  EXPECT_TRUE(std::find(ts(0, 1).begin(), ts(0, 1).end(), CycInt{}) != ts(0, 1).end());
}

TEST(TranslationSets, EmptyWindowGivesEmptySet) {
  const SchemeSpec spec = penrose_scheme();
  const auto ts = translation_sets(spec, transition_windows(spec), 10.0);
  EXPECT_TRUE(ts(0, 2).empty());
  EXPECT_TRUE(ts(3, 1).empty());
}

TEST(TranslationSets, MembersLieInTransitionWindow) {
  const SchemeSpec spec = penrose_scheme();
  const auto tw = transition_windows(spec);
  const auto ts = translation_sets(spec, tw, 10.0);
  ASSERT_FALSE(ts(2, 0).empty());
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      for (const CycInt& v : ts(j, i)) {
        const auto u = embed_internal(v);
        EXPECT_TRUE(contains(tw(j, i), Vec2(u.real(), u.imag())));
        EXPECT_EQ(rho(v), ((spec.residue(j) - 3 * spec.residue(i)) % 5 + 5) % 5);
      }
}

TEST(SelfSimilarity, ClosureAtRadiusFive) {
  const SchemeSpec spec = penrose_scheme();
  const auto tw = transition_windows(spec);
  const auto rep = check_selfsim_closure(spec, generate_all_points(spec, 5.0), translation_sets(spec, tw, 5.0));
  EXPECT_GT(rep.checked, 0u);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(SelfSimilarity, TauLandsInThirdComponent) {
  const SchemeSpec spec = penrose_scheme();
  const auto ts = translation_sets(spec, transition_windows(spec), 3.0);
  // 0 is in T^{31}, so tau * 1 + 0 belongs to Lambda^{(3)}
  ASSERT_TRUE(std::find(ts(2, 0).begin(), ts(2, 0).end(), CycInt{}) != ts(2, 0).end());
  const auto pts = generate_points(spec, 2, 3.0);
  EXPECT_TRUE(std::any_of(pts.begin(), pts.end(),
                          [](const LabeledPoint& p) { return p.coeffs == CycInt::tau(); }));
  EXPECT_EQ(rho(CycInt::tau()), 3);
}

TEST(SelfSimilarity, EmptyTranslationsVacuous) {
  const SchemeSpec spec = penrose_scheme();
  std::vector<std::vector<LabeledPoint>> pts = generate_all_points(spec, 3.0);
  TranslationSets none(4);
  const auto rep = check_selfsim_closure(spec, pts, none);
  EXPECT_EQ(rep.checked, 0u);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(SchemeProperty, ComponentsDisjoint) {
  const auto pts = generate_all_points(penrose_scheme(), 15.0);
  std::set<CycInt> seen;
  std::size_t total = 0;
  for (const auto& comp : pts)
    for (const LabeledPoint& p : comp) {
      seen.insert(p.coeffs);
      ++total;
    }
  EXPECT_EQ(seen.size(), total);
}

TEST(SchemeProperty, UniformlyDiscrete) {
  std::vector<double> d;
  for (double s : {10.0, 20.0, 40.0}) d.push_back(min_distance(generate_all_points(penrose_scheme(), s)));
  EXPECT_GT(d[0], 0.3);
  EXPECT_NEAR(d[1], d[0], 1e-12);
  EXPECT_NEAR(d[2], d[0], 1e-12);
}

TEST(SchemeProperty, MonotoneInRadius) {
  Gen g(41);
  const SchemeSpec spec = penrose_scheme();
  for (int n = 0; n < 5; ++n) {
    const double s1 = g.real(1.0, 8.0), s2 = s1 + g.real(0.0, 6.0);
    const auto a = generate_all_points(spec, s1), b = generate_all_points(spec, s2);
    for (int i = 0; i < 4; ++i) {
      std::set<CycInt> big;
      for (const auto& p : b[i]) big.insert(p.coeffs);
      for (const auto& p : a[i]) EXPECT_TRUE(big.contains(p.coeffs));
    }
  }
}

TEST(SchemeProperty, WeylEquidistribution) {
  const SchemeSpec spec = penrose_scheme();
  const auto pts = generate_all_points(spec, 40.0);
  Gen g(42);
  for (int i = 0; i < 4; ++i) {
    const Region sub = scaled(spec.window(i), 1.0 / kTau);
    const WeylResult r = weyl_test(pts[i], spec.window(i), sub);
    EXPECT_NEAR(r.expected, 1.0 / (kTau * kTau), 1e-12);
    EXPECT_LE(r.deviation, r.bound());
    // random convex sub-polygons inside the window
    for (int n = 0; n < 5; ++n) {
      // shrunken copy shifted by less than the inradius slack stays inside
      const double f = g.real(0.2, 0.6);
      const double slack = (1.0 - f) * support(spec.window(i), Vec2(-1, 0)) * std::cos(std::numbers::pi / 5.0);
      const double a = g.real(0.0, 2.0 * std::numbers::pi), rad = g.real(0.0, 0.9 * slack);
      const Region s2 = translated(scaled(spec.window(i), f), Vec2(rad * std::cos(a), rad * std::sin(a)));
      const WeylResult q = weyl_test(pts[i], spec.window(i), s2);
      EXPECT_LE(q.deviation, q.bound());
    }
  }
}
