#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sqlfill {

enum class CellSetting { no_cell_values, with_cell_values };

struct RunConfig {
  std::optional<std::filesystem::path> tables;
  std::optional<std::filesystem::path> examples;
  std::optional<std::filesystem::path> db_root;
  std::optional<std::filesystem::path> predictions;
  std::optional<std::filesystem::path> output;
  CellSetting setting = CellSetting::no_cell_values;
  double threshold = 85.0;
  bool skip_stopwords = true;
  double timeout_seconds = 30.0;
  int jobs = 1;

  /// Raises ErrorKind::usage when an invariant is broken.
  void validate() const;
};

/// Entry point behind the `sqlfill` binary. `args` excludes the program name.
/// Returns the process exit status: 0 success, 1 usage, 2 input/format,
/// 3 database availability, 4 internal.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqlfill
