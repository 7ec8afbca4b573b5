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
 * Polarization analysers (rotator, polarizing beam splitter and two
 * non-photon-number-resolving detectors) on a truncated two-mode Fock space.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fairsamp/device.hpp"

namespace fairsamp {

/**
 * Two polarization modes H and V with at most n_max photons in total. Basis
 * states |n_H, n_V> are ordered by total photon number, then by n_H
 * ascending.
 */
class TwoModeFock {
  public:
    explicit TwoModeFock(std::size_t n_max);

    [[nodiscard]] std::size_t n_max() const { return n_max_; }
    [[nodiscard]] std::size_t dim() const { return basis_.size(); }
    [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>> &
    basis() const {
        return basis_;
    }
    [[nodiscard]] std::size_t index(std::size_t n_h, std::size_t n_v) const;
    [[nodiscard]] std::size_t total(std::size_t i) const {
        return basis_[i].first + basis_[i].second;
    }
    /// Projector onto the n-photon sector.
    [[nodiscard]] HermitianOperator sector(std::size_t n) const;

  private:
    std::size_t n_max_;
    std::vector<std::pair<std::size_t, std::size_t>> basis_;
};

/**
 * Unitary whose column j is the Fock state with basis_[j] photons in the
 * rotated modes b_theta = cos(theta) a_H + sin(theta) a_V and
 * b_perp = -sin(theta) a_H + cos(theta) a_V.
 */
[[nodiscard]] Matrix mode_rotation(const TwoModeFock &fock, double theta);

[[nodiscard]] HermitianOperator number_theta(const TwoModeFock &fock,
                                             double theta);
[[nodiscard]] HermitianOperator total_number(const TwoModeFock &fock);

struct AnalyserSpec {
    double eta1 = 1.0; ///< detector D1, on the theta mode
    double eta2 = 1.0; ///< detector D2, on the orthogonal mode
    std::vector<double> angles;
    std::size_t n_max = 1;
    /// Report simultaneous clicks as D1 instead of a separate "both".
    bool fold_both = false;
};

/// Spec with D2 at efficiency eta and D1 at 1 - (1 - eta)(1 + delta).
[[nodiscard]] AnalyserSpec analyser_spec(double eta, double delta,
                                         std::vector<double> angles,
                                         std::size_t n_max);

/// Setting label used for an angle.
[[nodiscard]] std::string angle_label(double theta);

/// Outcomes D1, D2, both (unless folded); no-click is R1^{N_theta}
/// R2^{N_perp}.
[[nodiscard]] LossyDevice analyser_device(const AnalyserSpec &spec);

/**
 * Qubit analyser on the single-photon sector in the basis (|H>, |V>), with
 * |theta> = cos(theta)|H> + sin(theta)|V>. D1 has efficiency
 * eta - (1 - eta) delta on |theta>, D2 has eta on |theta_perp>.
 */
[[nodiscard]] LossyDevice
single_photon_analyser(double eta, double delta,
                       const std::vector<double> &angles);

/// (1 - eta) delta / eta.
[[nodiscard]] double analyser_epsilon_closed_form(double eta, double delta);

/// Diagonal 1 - (1 - eta2)^n on the n-photon sector.
[[nodiscard]] HermitianOperator analyser_mq(double eta2, std::size_t n_max);

/// Per-sector deviation max_x || P_n (Pi - Mt^x / ||Mt^x||) P_n || for
/// n = 0..n_max.
[[nodiscard]] std::vector<double>
sector_deviation_profile(const LossyDevice &dev, const HermitianOperator &mq,
                         const TwoModeFock &fock);

} // namespace fairsamp
