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
 * JSON interchange. Matrices are arrays of rows whose entries are
 * [re, im] pairs; probabilities are written with 15 significant digits.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fairsamp/device.hpp"
#include "fairsamp/fair_sampling.hpp"
#include "fairsamp/filter.hpp"
#include "fairsamp/multipartite.hpp"

namespace fairsamp {

using Json = nlohmann::json;

/// Rounds to 15 significant digits.
[[nodiscard]] double round15(double v);

[[nodiscard]] Json matrix_to_json(const Matrix &m);
[[nodiscard]] Matrix matrix_from_json(const Json &j);
[[nodiscard]] HermitianOperator operator_from_json(const Json &j);

/// A ket is an array of [re, im] pairs.
[[nodiscard]] Vector vector_from_json(const Json &j);

[[nodiscard]] Json device_to_json(const LossyDevice &dev);
[[nodiscard]] LossyDevice device_from_json(const Json &j);

/// Accepts a density matrix or a ket.
[[nodiscard]] DensityState state_from_json(const Json &j);

[[nodiscard]] Json distribution_to_json(const OutcomeDistribution &d);
[[nodiscard]] Json joint_to_json(const JointDistribution &d);
[[nodiscard]] Json verdict_to_json(const FairSamplingVerdict &v);
[[nodiscard]] Json filter_to_json(const Decomposition &d);

struct ScenarioFile {
    BellScenario scenario;
    std::vector<std::optional<HermitianOperator>> mqs;
    std::vector<std::optional<std::size_t>> good_dims;
};

/// Device references that are strings are resolved relative to `base`.
[[nodiscard]] ScenarioFile scenario_from_json(const Json &j,
                                              const std::filesystem::path &base);
[[nodiscard]] ScenarioFile load_scenario(const std::filesystem::path &path);

[[nodiscard]] Json read_json_file(const std::filesystem::path &path);
[[nodiscard]] LossyDevice load_device(const std::filesystem::path &path);

/// Pretty-printed with sorted keys and a trailing newline.
[[nodiscard]] std::string dump(const Json &j);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path &path,
                       const std::string &content);

} // namespace fairsamp
