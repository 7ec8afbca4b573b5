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
 * Dense complex Hermitian linear algebra: the carrier type for POVM elements,
 * density operators and projectors, plus the spectral functions (support
 * projector, square root and pseudo-inverse square root, norms) and the
 * tensor-product plumbing used by every other module.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fairsamp/error.hpp"

namespace fairsamp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
/// Eigenvalues at or below this fraction of the largest one are treated as
/// zero when forming supports and pseudo-inverses.
inline constexpr double kRelativeCutoff = 1e-9;

/// Upper bound on operator dimensions (default 4096).
[[nodiscard]] std::size_t max_dimension();
void set_max_dimension(std::size_t cap);

class HermitianOperator {
  public:
    /// Validates Hermiticity to `tol` (max entrywise |H - H^dag|) and stores
    /// the Hermitian part.
    explicit HermitianOperator(const Matrix &m, double tol = kHermiticityTol);

    /// Wraps a matrix that is Hermitian by construction (products such as
    /// A H A with Hermitian A). Rounding asymmetry is averaged away.
    [[nodiscard]] static HermitianOperator hermitize(const Matrix &m);

    [[nodiscard]] static HermitianOperator identity(std::size_t dim);
    [[nodiscard]] static HermitianOperator zero(std::size_t dim);
    [[nodiscard]] static HermitianOperator diagonal(const std::vector<double> &d);
    [[nodiscard]] static HermitianOperator diagonal(std::initializer_list<double> d);
    /// |v><v| / <v|v>.
    [[nodiscard]] static HermitianOperator projector(const Vector &v);

    [[nodiscard]] std::size_t dim() const {
        return static_cast<std::size_t>(m_.rows());
    }
    [[nodiscard]] const Matrix &matrix() const { return m_; }
    [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    [[nodiscard]] double trace() const { return m_.trace().real(); }
    /// Tr(H X) for Hermitian X; real up to rounding.
    [[nodiscard]] double expectation(const HermitianOperator &x) const;

    HermitianOperator &operator+=(const HermitianOperator &o);
    HermitianOperator &operator-=(const HermitianOperator &o);
    HermitianOperator &operator*=(double s);

    friend HermitianOperator operator+(HermitianOperator a,
                                       const HermitianOperator &b) {
        return a += b;
    }
    friend HermitianOperator operator-(HermitianOperator a,
                                       const HermitianOperator &b) {
        return a -= b;
    }
    friend HermitianOperator operator*(double s, HermitianOperator a) {
        return a *= s;
    }
    friend HermitianOperator operator*(HermitianOperator a, double s) {
        return a *= s;
    }

  private:
    struct Trusted {};
    HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}

    Matrix m_;
};

/// A X A for Hermitian A and X.
[[nodiscard]] HermitianOperator sandwich(const HermitianOperator &a,
                                         const HermitianOperator &x);

/// max |A_ij - B_ij|; operands must share a dimension.
[[nodiscard]] double max_abs_diff(const HermitianOperator &a,
                                  const HermitianOperator &b);

/// Unit-trace positive semi-definite operator.
class DensityState {
  public:
    explicit DensityState(HermitianOperator op, double psd_tol = kPsdTol,
                          double trace_tol = kTraceTol);

    [[nodiscard]] static DensityState pure(const Vector &psi);
    [[nodiscard]] static DensityState maximally_mixed(std::size_t dim);

    [[nodiscard]] const HermitianOperator &op() const { return op_; }
    [[nodiscard]] std::size_t dim() const { return op_.dim(); }

  private:
    HermitianOperator op_;
};

struct Eigensystem {
    Eigen::VectorXd values; ///< ascending
    Matrix vectors;         ///< columns are eigenvectors
};

[[nodiscard]] Eigensystem eigensystem(const HermitianOperator &h);
[[nodiscard]] double min_eigenvalue(const HermitianOperator &h);
[[nodiscard]] bool is_psd(const HermitianOperator &h, double tol = kPsdTol);

/// Projector onto the span of eigenvectors with eigenvalue above `cutoff`
/// (default: kRelativeCutoff times the largest eigenvalue).
[[nodiscard]] HermitianOperator
support_projector(const HermitianOperator &h,
                  std::optional<double> cutoff = std::nullopt);

struct SqrtPair {
    HermitianOperator sqrt;
    HermitianOperator pinv_sqrt;
};

/**
 * Square root and pseudo-inverse square root by spectral mapping. Above the
 * cutoff p maps to sqrt(p) and 1/sqrt(p); at or below it both maps give 0.
 * Eigenvalues in [-kPsdTol, 0) are clamped to zero; anything more negative
 * raises NotPositiveError.
 */
[[nodiscard]] SqrtPair sqrt_pinv_sqrt(const HermitianOperator &h,
                                      std::optional<double> cutoff = std::nullopt);

enum class NormKind { Operator, Trace };

[[nodiscard]] double norm(const HermitianOperator &h, NormKind kind);
/// Largest singular value of a general (possibly rectangular) block.
[[nodiscard]] double operator_norm(const Matrix &m);
/// Sum of singular values of a general (possibly rectangular) block.
[[nodiscard]] double trace_norm(const Matrix &m);

/// Kronecker product.
[[nodiscard]] Matrix kron(const Matrix &a, const Matrix &b);
/// Kronecker product in list order.
[[nodiscard]] HermitianOperator tensor(std::span<const HermitianOperator> ops);
[[nodiscard]] HermitianOperator tensor(std::initializer_list<HermitianOperator> ops);

/// Partial trace over every factor not listed in `keep`; the kept factors
/// remain in their original order.
[[nodiscard]] HermitianOperator partial_trace(const HermitianOperator &h,
                                              std::span<const std::size_t> dims,
                                              std::span<const std::size_t> keep);

/// Throws DimensionError when `dim` is zero or exceeds the configured cap.
void check_dimension(std::size_t dim);

} // namespace fairsamp
