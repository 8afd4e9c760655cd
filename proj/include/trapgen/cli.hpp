// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>

namespace trapgen {

/// Exit codes of the trapgen command.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1, // bad arguments, unreadable or malformed input, spawn failure
    kExitUnsat = 2,
    kExitViolation = 3,
};

/// Entry point of the trapgen command; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace trapgen
