#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "mcms/refine.hpp"

namespace mcms::cli {

struct Artifact {
  std::string kind;  // output selector
  std::string filename;
  std::string content;
};

struct CommandResult {
  std::vector<Artifact> artifacts;
  std::string console;
  int exit_code = 0;
};

/// A failure inside one pipeline stage; what() is "<stage>: <message>".
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Each command validates the config first and computes everything in memory.
CommandResult cmd_windows(const RunConfig& config);
CommandResult cmd_points(const RunConfig& config);
CommandResult cmd_nu(const RunConfig& config);
CommandResult cmd_solve(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);

/// Writes the artifacts selected by config.outputs into `dir` (created if
/// needed).
void write_artifacts(const CommandResult& result, const RunConfig& config,
                     const std::filesystem::path& dir);

// Serialisers shared with tests.
std::string format_region(const Region& region);
std::string points_csv(const std::vector<std::vector<LabeledPoint>>& points);
std::string grid_file(const DensityGrid& f, int channel);

}  // namespace mcms::cli
