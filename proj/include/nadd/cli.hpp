#pragma once

#include "nadd/json_io.hpp"

namespace nadd::cli {

// Exit codes: 0 success, 1 error, 2 a verdict of "fails".
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFails = 2;

struct Diagnostic {
  std::string path;  // config path of the offending entry
  std::string message;
};

struct RunOptions {
  std::string out_dir;  // empty: no files written
  std::optional<double> tol;
  std::optional<std::uint64_t> cap;
};

struct ReportDocument {
  Json doc;       // {command, config, results, warnings, provenance}
  int exit_code = kExitOk;
  std::vector<std::string> files_written;
};

const std::vector<std::string>& command_names();

// Schema and invariant diagnostics without executing anything; an empty
// result means the config is runnable for the given command.
std::vector<Diagnostic> validate_config(const Json& config, const std::string& command);

// Runs one analysis command against a declarative config and, when an
// output directory is given, writes <command>.report.json plus one CSV per
// table. Result payloads are byte-identical across runs of the same config
// and version; wall time lives in the provenance block only.
ReportDocument run(const Json& config, const std::string& command, const RunOptions& options);

}  // namespace nadd::cli
