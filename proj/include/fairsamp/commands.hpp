// Copyright 2026 The fairsamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Command implementations behind the fairsamp tool. Each returns the JSON
 * report and the process exit code.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "fairsamp/json_io.hpp"

namespace fairsamp {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNotFair = 2;
} // namespace exit_code

struct CommandResult {
    int code = exit_code::kOk;
    Json report;
};

[[nodiscard]] CommandResult
cmd_check(const std::filesystem::path &device,
          const std::optional<std::filesystem::path> &mq, double tol);

/// Writes filter.json, lossless.json and report.json into `out_dir`.
[[nodiscard]] CommandResult cmd_decompose(const std::filesystem::path &device,
                                          const std::filesystem::path &out_dir,
                                          std::size_t trials,
                                          std::uint64_t seed);

[[nodiscard]] CommandResult cmd_simulate(const std::filesystem::path &scenario,
                                         bool postselect, double tol,
                                         std::uint64_t seed);

[[nodiscard]] CommandResult cmd_bound(const std::filesystem::path &scenario,
                                      double tol);

struct DemoOptions {
    std::uint64_t seed = 1;
    double tol = 1e-8;
    std::size_t n_max = 4;
    std::optional<double> eta1;
    std::optional<double> eta2;
    std::optional<double> delta;
    double noise = 0.0;
    std::size_t count = 100;
};

/// Names: makarov, analyser, chsh-singlet, prop2-random.
[[nodiscard]] CommandResult cmd_demo(const std::string &name,
                                     const DemoOptions &opt);

/// Error report for exceptions escaping a command.
[[nodiscard]] Json error_report(const std::exception &e);

} // namespace fairsamp
