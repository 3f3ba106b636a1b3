// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polmoments {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitSpec = 2,          ///< usage, schema or malformed input
  kExitRankDeficient = 3,
  kExitInvalidState = 4,  ///< Hermiticity, trace or positivity violation
  kExitIo = 5,
  kExitClassification = 6,
};

/// Runs the tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polmoments
