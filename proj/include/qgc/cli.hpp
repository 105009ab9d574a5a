#pragma once

#include <string>
#include <vector>

#include "qgc/config.hpp"
#include "qgc/emit.hpp"
#include "qgc/error.hpp"

namespace qgc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

// Hypothesis and steering failures map to 1, everything else to 2.
int exit_code_for(ErrorCode code);

const std::vector<std::string>& subcommands();

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> artifacts;  // paths written, in order
};

// Runs one subcommand and writes its artifacts under cfg.out. Library
// errors propagate as qgc::Error.
RunResult run(const std::string& subcommand, const RunConfig& cfg, Format format);

// QGC_LOG: 0/quiet, 1/info (default), 2/debug
int log_level();
void log_line(int level, const std::string& msg);

}  // namespace qgc
