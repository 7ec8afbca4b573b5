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

#include "fairsamp/operator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fairsamp {

namespace {

std::atomic<std::size_t> g_max_dimension{4096};

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double default_cutoff(const Eigen::VectorXd &values) {
    const double top = values.size() > 0 ? values.maxCoeff() : 0.0;
    return top > 0.0 ? kRelativeCutoff * top : 0.0;
}

} // namespace

std::size_t max_dimension() { return g_max_dimension.load(); }

void set_max_dimension(std::size_t cap) { g_max_dimension.store(cap); }

void check_dimension(std::size_t dim) {
    if (dim == 0) {
        throw DimensionError("operator dimension must be positive");
    }
    if (dim > max_dimension()) {
        std::ostringstream os;
        os << "dimension " << dim << " exceeds the configured cap "
           << max_dimension();
        throw DimensionError(os.str());
    }
}

// HermitianOperator

HermitianOperator::HermitianOperator(const Matrix &m, double tol) {
    if (m.rows() != m.cols()) {
        throw DimensionError("Hermitian operator must be square");
    }
    check_dimension(static_cast<std::size_t>(m.rows()));
    const double residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (residual > tol) {
        std::ostringstream os;
        os << "matrix is not Hermitian (residual " << residual << ")";
        throw NotHermitianError(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::hermitize(const Matrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("Hermitian operator must be square");
    }
    return HermitianOperator(Matrix(0.5 * (m + m.adjoint())), Trusted{});
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    check_dimension(dim);
    return HermitianOperator(Matrix::Identity(idx(dim), idx(dim)), Trusted{});
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    check_dimension(dim);
    return HermitianOperator(Matrix::Zero(idx(dim), idx(dim)), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double> &d) {
    check_dimension(d.size());
    Matrix m = Matrix::Zero(idx(d.size()), idx(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(idx(i), idx(i)) = d[i];
    }
    return HermitianOperator(std::move(m), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(std::initializer_list<double> d) {
    return diagonal(std::vector<double>(d));
}

HermitianOperator HermitianOperator::projector(const Vector &v) {
    check_dimension(static_cast<std::size_t>(v.size()));
    const double n2 = v.squaredNorm();
    if (n2 == 0.0) {
        throw Error("cannot project onto the zero vector");
    }
    return hermitize(v * v.adjoint() / n2);
}

double HermitianOperator::expectation(const HermitianOperator &x) const {
    if (x.dim() != dim()) {
        throw DimensionError("expectation: dimension mismatch");
    }
    // Tr(A B) = sum_ij A_ij B_ji; for Hermitian B this is sum_ij A_ij conj(B_ij).
    return m_.cwiseProduct(x.m_.conjugate()).sum().real();
}

HermitianOperator &HermitianOperator::operator+=(const HermitianOperator &o) {
    if (o.dim() != dim()) {
        throw DimensionError("operator sum: dimension mismatch");
    }
    m_ += o.m_;
    return *this;
}

HermitianOperator &HermitianOperator::operator-=(const HermitianOperator &o) {
    if (o.dim() != dim()) {
        throw DimensionError("operator difference: dimension mismatch");
    }
    m_ -= o.m_;
    return *this;
}

HermitianOperator &HermitianOperator::operator*=(double s) {
    m_ *= s;
    return *this;
}

HermitianOperator sandwich(const HermitianOperator &a,
                           const HermitianOperator &x) {
    if (a.dim() != x.dim()) {
        throw DimensionError("sandwich: dimension mismatch");
    }
    return HermitianOperator::hermitize(a.matrix() * x.matrix() * a.matrix());
}

double max_abs_diff(const HermitianOperator &a, const HermitianOperator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("max_abs_diff: dimension mismatch");
    }
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// DensityState

DensityState::DensityState(HermitianOperator op, double psd_tol,
                           double trace_tol)
    : op_(std::move(op)) {
    const double tr = op_.trace();
    if (std::abs(tr - 1.0) > trace_tol) {
        std::ostringstream os;
        os << "density operator has trace " << tr;
        throw Error(os.str());
    }
    const double lo = min_eigenvalue(op_);
    if (lo < -psd_tol) {
        std::ostringstream os;
        os << "density operator has negative eigenvalue " << lo;
        throw NotPositiveError(os.str());
    }
}

DensityState DensityState::pure(const Vector &psi) {
    return DensityState(HermitianOperator::projector(psi));
}

DensityState DensityState::maximally_mixed(std::size_t dim) {
    return DensityState(HermitianOperator::identity(dim) *
                        (1.0 / static_cast<double>(dim)));
}

// Spectral functions

Eigensystem eigensystem(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error("eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

bool is_psd(const HermitianOperator &h, double tol) {
    return min_eigenvalue(h) >= -tol;
}

namespace {

Eigensystem psd_eigensystem(const HermitianOperator &h) {
    Eigensystem es = eigensystem(h);
    if (es.values(0) < -kPsdTol) {
        std::ostringstream os;
        os << "operator is not positive semi-definite (eigenvalue "
           << es.values(0) << ")";
        throw NotPositiveError(os.str());
    }
    es.values = es.values.cwiseMax(0.0);
    return es;
}

HermitianOperator spectral_map(const Eigensystem &es,
                               const Eigen::VectorXd &mapped) {
    const Matrix &v = es.vectors;
    return HermitianOperator::hermitize(v * mapped.asDiagonal() * v.adjoint());
}

} // namespace

HermitianOperator support_projector(const HermitianOperator &h,
                                    std::optional<double> cutoff) {
    const Eigensystem es = psd_eigensystem(h);
    const double c = cutoff.value_or(default_cutoff(es.values));
    Eigen::VectorXd mapped(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        mapped(i) = es.values(i) > c ? 1.0 : 0.0;
    }
    return spectral_map(es, mapped);
}

SqrtPair sqrt_pinv_sqrt(const HermitianOperator &h,
                        std::optional<double> cutoff) {
    const Eigensystem es = psd_eigensystem(h);
    const double c = cutoff.value_or(default_cutoff(es.values));
    Eigen::VectorXd root(es.values.size());
    Eigen::VectorXd inv_root(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        const double p = es.values(i);
        // Both maps share the cutoff so that sqrt * pinv_sqrt is exactly
        // the support projector.
        root(i) = p > c ? std::sqrt(p) : 0.0;
        inv_root(i) = p > c ? 1.0 / std::sqrt(p) : 0.0;
    }
    return {spectral_map(es, root), spectral_map(es, inv_root)};
}

double norm(const HermitianOperator &h, NormKind kind) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(),
                                                 Eigen::EigenvaluesOnly);
    const Eigen::VectorXd abs_values = solver.eigenvalues().cwiseAbs();
    return kind == NormKind::Operator ? abs_values.maxCoeff()
                                      : abs_values.sum();
}

double operator_norm(const Matrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double trace_norm(const Matrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

Matrix kron(const Matrix &a, const Matrix &b) {
    const Eigen::Index ra = a.rows(), ca = a.cols();
    const Eigen::Index rb = b.rows(), cb = b.cols();
    Matrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i) {
        for (Eigen::Index j = 0; j < ca; ++j) {
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
        }
    }
    return out;
}

HermitianOperator tensor(std::span<const HermitianOperator> ops) {
    if (ops.empty()) {
        throw DimensionError("tensor: empty operand list");
    }
    std::size_t total = 1;
    for (const auto &op : ops) {
        total *= op.dim();
    }
    check_dimension(total);
    Matrix acc = ops.front().matrix();
    for (std::size_t k = 1; k < ops.size(); ++k) {
        acc = kron(acc, ops[k].matrix());
    }
    return HermitianOperator::hermitize(acc);
}

HermitianOperator tensor(std::initializer_list<HermitianOperator> ops) {
    return tensor(std::span<const HermitianOperator>(ops.begin(), ops.size()));
}

HermitianOperator partial_trace(const HermitianOperator &h,
                                std::span<const std::size_t> dims,
                                std::span<const std::size_t> keep) {
    if (dims.empty()) {
        throw DimensionError("partial_trace: empty factor list");
    }
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) {
            throw DimensionError("partial_trace: zero factor dimension");
        }
        total *= d;
    }
    if (total != h.dim()) {
        throw DimensionError("partial_trace: factor dimensions do not match "
                             "the operator dimension");
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) {
            throw DimensionError("partial_trace: kept factor out of range");
        }
        kept[k] = true;
    }

    // Split every full index into (kept index, traced index).
    std::size_t kept_dim = 1, traced_dim = 1;
    for (std::size_t f = 0; f < dims.size(); ++f) {
        (kept[f] ? kept_dim : traced_dim) *= dims[f];
    }
    std::vector<std::vector<std::size_t>> by_traced(
        traced_dim, std::vector<std::size_t>(kept_dim));
    std::vector<std::size_t> digits(dims.size(), 0);
    for (std::size_t full = 0; full < total; ++full) {
        std::size_t ki = 0, ti = 0;
        for (std::size_t f = 0; f < dims.size(); ++f) {
            if (kept[f]) {
                ki = ki * dims[f] + digits[f];
            } else {
                ti = ti * dims[f] + digits[f];
            }
        }
        by_traced[ti][ki] = full;
        for (std::size_t f = dims.size(); f-- > 0;) {
            if (++digits[f] < dims[f]) {
                break;
            }
            digits[f] = 0;
        }
    }

    Matrix out = Matrix::Zero(idx(kept_dim), idx(kept_dim));
    const Matrix &m = h.matrix();
    for (const auto &block : by_traced) {
        for (std::size_t i = 0; i < kept_dim; ++i) {
            for (std::size_t j = 0; j < kept_dim; ++j) {
                out(idx(i), idx(j)) += m(idx(block[i]), idx(block[j]));
            }
        }
    }
    return HermitianOperator::hermitize(out);
}

} // namespace fairsamp
