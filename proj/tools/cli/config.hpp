#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mcms/scheme.hpp"

namespace mcms::cli {

/// Parse or validation failure; line() is 0 when not tied to a config line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  // "penrose" or "custom"
  std::string scheme = "penrose";
  // custom scheme pieces, keyed by 1-based component
  int custom_rank = 0;
  std::map<int, std::vector<Vec2>> custom_windows;
  std::map<int, CycInt> custom_cosets;
  CycInt custom_q = CycInt::tau();

  std::string nu_policy = "area-markov";  // area-markov | scale-markov | explicit
  std::optional<Eigen::MatrixXd> nu;

  Vec2 gamma = Vec2::Zero();
  BoundaryMode boundary = BoundaryMode::Closed;
  double s = 40.0;
  double h = 1.0 / 128.0;
  double tol = 1e-8;
  int maxit = 200;
  int supersample = 8;
  std::vector<std::string> outputs;  // empty: everything

  int id2_samples = 100;
  std::uint64_t id2_seed = 1;
  double closure_s = 5.0;

  int compare_count = 25;
  double compare_kmax = 10.0;
  std::uint64_t compare_seed = 7;

  SchemeSpec build_scheme() const;
  NuPolicy policy() const;
  bool wants(std::string_view artifact) const;

  /// Full check of every invariant; throws ConfigError.
  void validate() const;
};

/// Applies a single `key = value` setting. Throws std::invalid_argument.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` lines, `#` comments. Settings are applied on top of
/// `base`; errors carry the offending line number.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Bundled config text for `penrose-example1` / `penrose-example2`.
std::string preset_text(std::string_view name);
RunConfig preset(std::string_view name);

/// Accepts plain reals and fractions `a/b`.
double parse_real(std::string_view text);

}  // namespace mcms::cli
