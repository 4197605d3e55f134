#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mcms/pfsolve.hpp"
#include "mcms/verify.hpp"

namespace mcms::cli {

namespace {

using Rel = VerificationReport::Relation;

std::string num(double v) { return format_number(v); }

std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += num(v(k));
  }
  return out;
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

struct Prepared {
  SchemeSpec spec;
  TransitionWindows tw;
};

Prepared prepare(const RunConfig& config) {
  config.validate();
  Prepared p;
  p.spec = config.build_scheme();
  p.tw = stage("transition_windows", [&] { return transition_windows(p.spec); });
  return p;
}

struct Solved {
  Eigen::MatrixXd nu;
  PfResult pf;
  RefinementProblem problem;
  FixedPointResult fixed;
  SolverComparison comparison;
};

Solved solve(const RunConfig& config, const Prepared& p) {
  Solved out;
  out.nu = stage("build_nu", [&] { return build_nu(p.spec, p.tw, config.policy()); });
  out.pf = stage("pf_eigen", [&] { return pf_eigen(out.nu); });
  out.problem = stage("refinement_problem", [&] { return refinement_problem(p.spec); });
  const GridSpec grid = common_grid(out.problem, config.h);
  const auto kernel = stage("refinement_kernel", [&] {
    return RefinementKernel::build(out.problem, out.nu, grid, config.supersample);
  });
  FixedPointOptions opts;
  opts.tol = config.tol;
  opts.maxit = config.maxit;
  opts.supersample = config.supersample;
  out.fixed = stage("solve_fixed_point", [&] {
    return solve_fixed_point(out.problem, kernel, out.nu, out.pf.w, opts);
  });
  out.comparison = stage("compare_solvers", [&] {
    const auto ks = sample_wavevectors(config.compare_count, config.compare_kmax,
                                       config.compare_seed);
    return compare_solvers(out.fixed.density, out.problem, out.nu, out.pf.w, ks);
  });
  return out;
}

std::string nu_block(const Eigen::MatrixXd& nu) {
  std::string out;
  for (Eigen::Index j = 0; j < nu.rows(); ++j)
    out += "nu." + std::to_string(j + 1) + " = " + join(nu.row(j).transpose()) + "\n";
  return out;
}

std::string pf_block(const PfResult& pf) {
  std::string out;
  out += "lambda = " + num(pf.lambda_max) + "\n";
  out += "lambda2_abs = " + num(pf.lambda2_abs) + "\n";
  out += "gap = " + num(pf.gap) + "\n";
  out += std::string("simple = ") + (pf.simple ? "true" : "false") + "\n";
  out += "w = " + join(pf.w) + "\n";
  return out;
}

}  // namespace

std::string format_region(const Region& region) {
  switch (region.kind()) {
    case Region::Kind::Empty:
      return "EMPTY";
    case Region::Kind::Point:
      return "POINT " + num(region.point().x()) + " " + num(region.point().y());
    case Region::Kind::Polygon:
      break;
  }
  std::string out = "POLYGON";
  for (const Vec2& v : region.vertices()) out += " " + num(v.x()) + " " + num(v.y());
  return out;
}

std::string points_csv(const std::vector<std::vector<LabeledPoint>>& points) {
  std::string out = "component,m0,m1,m2,m3,phys_re,phys_im,int_re,int_im\n";
  for (const auto& comp : points) {
    for (const LabeledPoint& p : comp) {
      out += std::to_string(p.component + 1);
      for (std::size_t k = 0; k < 4; ++k) out += "," + std::to_string(p.coeffs[k]);
      out += "," + num(p.phys.real()) + "," + num(p.phys.imag()) + "," +
             num(p.internal.real()) + "," + num(p.internal.imag()) + "\n";
    }
  }
  return out;
}

std::string grid_file(const DensityGrid& f, int channel) {
  const GridSpec& g = f.grid();
  std::string out = "# origin " + num(g.origin.x()) + " " + num(g.origin.y()) + "\n";
  out += "# h " + num(g.h) + "\n";
  out += "# nx " + std::to_string(g.nx) + " ny " + std::to_string(g.ny) + "\n";
  const auto values = f.channel(channel);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (ix) out += ' ';
      out += num(values[g.index(ix, iy)]);
    }
    out += '\n';
  }
  return out;
}

CommandResult cmd_windows(const RunConfig& config) {
  const Prepared p = prepare(config);
  const int r = p.spec.rank();
  std::string out = "# j i window\n";
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i)
      out += std::to_string(j + 1) + " " + std::to_string(i + 1) + " " +
             format_region(p.tw(j, i)) + "\n";
  out += "# area matrix\n";
  for (int j = 0; j < r; ++j) {
    out += "area " + std::to_string(j + 1);
    for (int i = 0; i < r; ++i) out += " " + num(area(p.tw(j, i)));
    out += "\n";
  }
  CommandResult res;
  res.artifacts.push_back({"windows", "windows.txt", out});
  res.console = out;
  return res;
}

CommandResult cmd_points(const RunConfig& config) {
  const Prepared p = prepare(config);
  const auto pts = stage("generate_points", [&] { return generate_all_points(p.spec, config.s); });
  CommandResult res;
  res.artifacts.push_back({"points", "points.csv", points_csv(pts)});
  for (std::size_t i = 0; i < pts.size(); ++i)
    res.console += "component " + std::to_string(i + 1) + ": " +
                   std::to_string(pts[i].size()) + " points\n";
  return res;
}

CommandResult cmd_nu(const RunConfig& config) {
  const Prepared p = prepare(config);
  const auto nu = stage("build_nu", [&] { return build_nu(p.spec, p.tw, config.policy()); });
  const auto pf = stage("pf_eigen", [&] { return pf_eigen(nu); });
  const std::string out = nu_block(nu) + pf_block(pf);
  CommandResult res;
  res.artifacts.push_back({"nu", "nu.txt", out});
  res.console = out;
  return res;
}

CommandResult cmd_solve(const RunConfig& config) {
  const Prepared p = prepare(config);
  const Solved sv = solve(config, p);
  const DensityGrid& f = sv.fixed.density;
  const GridSpec& g = f.grid();
  const int r = f.channels();

  std::string summary = nu_block(sv.nu) + pf_block(sv.pf);
  summary += "grid = " + num(g.origin.x()) + " " + num(g.origin.y()) + " " + num(g.h) + " " +
             std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n";
  summary += "masses = " + join(f.masses()) + "\n";
  Eigen::VectorXd peaks(r);
  for (int j = 0; j < r; ++j) peaks(j) = f.max_value(j);
  summary += "peaks = " + join(peaks) + "\n";
  summary += "iterations = " + std::to_string(sv.fixed.iterations) + "\n";
  summary += "residuals =";
  for (double v : sv.fixed.residuals) summary += " " + num(v);
  summary += "\nmass_transport_errors =";
  for (double v : sv.fixed.mass_transport_errors) summary += " " + num(v);
  summary += "\ncompare.max_deviation = " + num(sv.comparison.max_deviation) + "\n";

  CommandResult res;
  for (int j = 0; j < r; ++j)
    res.artifacts.push_back(
        {"grids", "density_" + std::to_string(j + 1) + ".grid", grid_file(f, j)});

  std::string csv = "x,y";
  for (int j = 0; j < r; ++j) csv += ",f" + std::to_string(j + 1);
  csv += '\n';
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const Vec2 c = g.cell_center(ix, iy);
      csv += num(c.x()) + "," + num(c.y());
      for (int j = 0; j < r; ++j) csv += "," + num(f.channel(j)[g.index(ix, iy)]);
      csv += '\n';
    }
  }
  res.artifacts.push_back({"density_csv", "density.csv", std::move(csv)});
  res.artifacts.push_back({"summary", "summary.txt", summary});
  res.console = summary;
  return res;
}

CommandResult cmd_verify(const RunConfig& config) {
  const Prepared p = prepare(config);
  const Solved sv = solve(config, p);
  const SchemeSpec& spec = p.spec;
  const int r = spec.rank();
  const double s = config.s;

  const auto pts = stage("generate_points", [&] { return generate_all_points(spec, s); });
  const auto tsets = stage("translation_sets", [&] { return translation_sets(spec, p.tw, s); });

  VerificationReport rep;
  rep.add("PF1.abs_lambda_minus_1", std::abs(sv.pf.lambda_max - 1.0), Rel::AtMost, 1e-10);
  rep.add("solver.fourier_max_deviation", sv.comparison.max_deviation, Rel::AtMost, 5e-2);

  // Weyl: sub-window shrunk by 1/|q| about the centroid
  const double shrink = 1.0 / std::abs(spec.inflation());
  for (int j = 0; j < r; ++j) {
    const std::string name = "Weyl.component" + std::to_string(j + 1) + ".deviation";
    const Region w = spec.window(j);
    const Vec2 c = centroid(w);
    const Region sub = translated(scaled(translated(w, -c), shrink), c);
    const auto& comp = pts[static_cast<std::size_t>(j)];
    if (comp.empty()) {
      rep.add_failure(name, "insufficient-radius", Rel::AtMost, 0.0);
      continue;
    }
    const WeylResult wr = weyl_test(comp, w, sub);
    rep.add(name, wr.deviation, Rel::AtMost, wr.bound());
  }

  // M3: density ratios against window-area ratios
  const double radii[] = {s};
  const DensityEstimate de = density_estimate(pts, radii);
  for (int i = 1; i < r; ++i) {
    const std::string name = "M3.density_ratio_" + std::to_string(i + 1) + "_1.rel_error";
    const double d1 = de.density(0, 0);
    if (!(d1 > 0.0)) {
      rep.add_failure(name, "insufficient-radius", Rel::AtMost, 0.05);
      continue;
    }
    const double ratio = de.density(0, i) / d1;
    const double expect = area(spec.window(i)) / area(spec.window(0));
    rep.add(name, std::abs(ratio / expect - 1.0), Rel::AtMost, 0.05);
  }

  try {
    Id2Options o;
    o.samples = config.id2_samples;
    o.seed = config.id2_seed;
    const Id2Report id2 = check_id2(spec, sv.nu, sv.fixed.density, pts, tsets, s, o);
    rep.add("ID2.mean_residual", id2.mean_residual, Rel::AtMost, 0.05);
  } catch (const InsufficientRadius&) {
    rep.add_failure("ID2.mean_residual", "insufficient-radius", Rel::AtMost, 0.05);
  }

  bool any_points = false;
  for (const auto& comp : pts) any_points = any_points || !comp.empty();
  if (any_points) {
    const Eigen::VectorXd id3 = id3_estimate(spec, sv.fixed.density, pts);
    for (int j = 0; j < r; ++j)
      rep.add("ID3.component" + std::to_string(j + 1) + ".abs_error",
              std::abs(id3(j) - sv.pf.w(j)), Rel::AtMost, 0.05);
  } else {
    rep.add_failure("ID3", "insufficient-radius", Rel::AtMost, 0.05);
  }

  const auto closure = stage("check_selfsim_closure", [&] {
    const auto cpts = generate_all_points(spec, config.closure_s);
    const auto cts = translation_sets(spec, p.tw, config.closure_s);
    return check_selfsim_closure(spec, cpts, cts);
  });
  rep.add("closure.violations", static_cast<double>(closure.violations.size()), Rel::Equal, 0.0);

  rep.add("uniform_discreteness.min_distance", min_distance(pts), Rel::AtLeast, 1e-6);

  CommandResult res;
  res.artifacts.push_back({"report", "report.txt", rep.str()});
  res.console = rep.str();
  res.exit_code = rep.all_pass() ? 0 : 1;
  return res;
}

void write_artifacts(const CommandResult& result, const RunConfig& config,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const Artifact& a : result.artifacts) {
    if (!config.wants(a.kind)) continue;
    std::ofstream os(dir / a.filename, std::ios::binary);
    os << a.content;
    if (!os) throw std::runtime_error("cannot write " + (dir / a.filename).string());
  }
}

}  // namespace mcms::cli
