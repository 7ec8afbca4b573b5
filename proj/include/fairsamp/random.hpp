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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fairsamp/operator.hpp"

namespace fairsamp {

using Rng = std::mt19937_64;

/// Independent per-task seed derived from a base seed (splitmix64 mixing),
/// so that partitioned work is reproducible regardless of thread count.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

[[nodiscard]] Matrix ginibre(std::size_t rows, std::size_t cols, Rng &rng);
/// Haar-distributed unit vector.
[[nodiscard]] Vector random_pure_vector(std::size_t dim, Rng &rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
[[nodiscard]] Matrix random_unitary(std::size_t dim, Rng &rng);
/// Induced-measure random density operator of the given rank.
[[nodiscard]] DensityState random_density(std::size_t dim, std::size_t rank,
                                          Rng &rng);
/// Random positive semi-definite operator with operator norm `top`.
[[nodiscard]] HermitianOperator random_psd(std::size_t dim, std::size_t rank,
                                           double top, Rng &rng);
/// Random complete POVM with `count` elements on a `dim`-dimensional space.
[[nodiscard]] std::vector<HermitianOperator>
random_povm(std::size_t dim, std::size_t count, Rng &rng);

/**
 * Verification states: Haar-random pure states mixed with the maximally
 * mixed state at weights 0, 1/2 and 1 (cycled by trial index).
 */
[[nodiscard]] DensityState verification_state(std::size_t dim,
                                              std::size_t trial, Rng &rng);

} // namespace fairsamp
