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

#include "fairsamp/random.hpp"

#include <cmath>

namespace fairsamp {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

Vector random_pure_vector(std::size_t dim, Rng &rng) {
    Vector v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

Matrix random_unitary(std::size_t dim, Rng &rng) {
    const Matrix g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const Complex d = r(i, i);
        const double a = std::abs(d);
        if (a > 0.0) {
            q.col(i) *= d / a;
        }
    }
    return q;
}

DensityState random_density(std::size_t dim, std::size_t rank, Rng &rng) {
    const Matrix g = ginibre(dim, rank, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityState(HermitianOperator::hermitize(rho));
}

HermitianOperator random_psd(std::size_t dim, std::size_t rank, double top,
                             Rng &rng) {
    const Matrix g = ginibre(dim, rank, rng);
    HermitianOperator p = HermitianOperator::hermitize(g * g.adjoint());
    const double n = norm(p, NormKind::Operator);
    return p * (top / n);
}

std::vector<HermitianOperator> random_povm(std::size_t dim, std::size_t count,
                                           Rng &rng) {
    std::vector<HermitianOperator> raw;
    HermitianOperator total = HermitianOperator::zero(dim);
    for (std::size_t k = 0; k < count; ++k) {
        raw.push_back(random_psd(dim, dim, 1.0, rng));
        total += raw.back();
    }
    const HermitianOperator s = sqrt_pinv_sqrt(total).pinv_sqrt;
    std::vector<HermitianOperator> out;
    out.reserve(count);
    for (const auto &r : raw) {
        out.push_back(sandwich(s, r));
    }
    return out;
}

DensityState verification_state(std::size_t dim, std::size_t trial, Rng &rng) {
    static constexpr double kWeights[] = {0.0, 0.5, 1.0};
    const double w = kWeights[trial % 3];
    const Vector psi = random_pure_vector(dim, rng);
    HermitianOperator rho = (1.0 - w) * HermitianOperator::projector(psi) +
                            (w / static_cast<double>(dim)) *
                                HermitianOperator::identity(dim);
    return DensityState(std::move(rho));
}

} // namespace fairsamp
