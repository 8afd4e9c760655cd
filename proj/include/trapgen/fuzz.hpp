// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Feeds newline-terminated vectors to a target process on its standard input,
// respawning it when it dies.
#pragma once

#include "trapgen/error.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace trapgen {

/// The target could not be started (not found, not executable, ...).
struct SpawnError : Error {
    using Error::Error;
};

struct FuzzOptions {
    std::vector<std::string> argv;
    std::optional<std::uint64_t> count;
    std::optional<std::chrono::duration<double>> duration;
    /// Lines buffered between the generator thread and the writer.
    std::size_t queue_capacity = 4096;
    /// Start a fresh target for every vector, so each crash is pinned to one vector.
    bool per_vector = false;
    /// Give up after this many consecutive targets that accepted no input.
    unsigned max_idle_respawns = 64;
};

struct FuzzReport {
    std::uint64_t delivered = 0; // lines fully written to a live target
    std::uint64_t crashes = 0;   // target exits with nonzero status or by signal
    std::uint64_t spawns = 0;
    double seconds = 0;
    /// Last vector written to the first target that crashed. Exact in per-vector mode.
    std::optional<std::string> first_crash;

    double vectors_per_second() const { return seconds > 0 ? delivered / seconds : 0; }
};

/// Splits a command line into words with shell quoting rules; no expansion of
/// commands or variables. Throws SpawnError on an empty or malformed command.
std::vector<std::string> split_command(const std::string& cmd);

/// `next` produces one vector line (without the newline); it runs on a
/// separate thread and must not be shared. Exceptions from `next` stop the
/// run and are rethrown. Exactly one of count and duration must be set.
FuzzReport run_fuzz(const std::function<std::string()>& next, const FuzzOptions& opts);

} // namespace trapgen
