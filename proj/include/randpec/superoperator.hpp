// Copyright 2026 The randpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string_view>

#include "randpec/errors.hpp"
#include "randpec/types.hpp"

namespace randpec {

// Vectorization is row-stacking: |rho>>[a*N + b] = rho(a, b). Under this
// convention X rho Y maps to (X (x) Y^T)|rho>>.

enum class SuperoperatorKind { lindbladian, noise_channel, folded_unitary, noisy_circuit, denoiser, generic };

inline std::string_view to_string(SuperoperatorKind k) {
    switch (k) {
        case SuperoperatorKind::lindbladian:
            return "lindbladian";
        case SuperoperatorKind::noise_channel:
            return "noise-channel";
        case SuperoperatorKind::folded_unitary:
            return "folded-unitary";
        case SuperoperatorKind::noisy_circuit:
            return "noisy-circuit";
        case SuperoperatorKind::denoiser:
            return "denoiser";
        case SuperoperatorKind::generic:
            return "generic";
    }
    return "generic";
}

/// Dense N^2 x N^2 matrix acting on vectorized N x N operators.
class Superoperator {
   public:
    Superoperator(std::size_t hilbert_dimension, CMatrix matrix, SuperoperatorKind kind)
        : n_(hilbert_dimension), matrix_(std::move(matrix)), kind_(kind) {
        const auto n2 = static_cast<Eigen::Index>(n_ * n_);
        if (matrix_.rows() != n2 || matrix_.cols() != n2) {
            throw ShapeError("superoperator matrix must be N^2 x N^2");
        }
    }

    std::size_t hilbert_dimension() const noexcept { return n_; }
    const CMatrix &matrix() const noexcept { return matrix_; }
    SuperoperatorKind kind() const noexcept { return kind_; }
    Complex trace() const { return matrix_.trace(); }

    Superoperator relabeled(SuperoperatorKind kind) const & { return Superoperator(n_, matrix_, kind); }
    Superoperator relabeled(SuperoperatorKind kind) && { return Superoperator(n_, std::move(matrix_), kind); }

   private:
    std::size_t n_;
    CMatrix matrix_;
    SuperoperatorKind kind_;
};

inline Superoperator identity_superoperator(std::size_t n, SuperoperatorKind kind = SuperoperatorKind::generic) {
    const auto n2 = static_cast<Eigen::Index>(n * n);
    return Superoperator(n, CMatrix::Identity(n2, n2), kind);
}

inline CVector vectorize(const CMatrix &rho) {
    const Eigen::Index n = rho.rows();
    CVector v(n * rho.cols());
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < rho.cols(); ++b) {
            v(a * rho.cols() + b) = rho(a, b);
        }
    }
    return v;
}

inline CMatrix unvectorize(const CVector &v, std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(n);
    if (v.size() != dim * dim) {
        throw ShapeError("unvectorize: length is not N^2");
    }
    CMatrix rho(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) {
            rho(a, b) = v(a * dim + b);
        }
    }
    return rho;
}

/// |1>>, the vectorized identity. Tr(rho) = <<1|rho>>.
inline CVector flat_left_vector(std::size_t n) { return vectorize(CMatrix::Identity(static_cast<Eigen::Index>(n),
                                                                                    static_cast<Eigen::Index>(n))); }

/// max |(<<1| S - lambda <<1|)_j|. Zero when <<1| is a left eigenvector with eigenvalue lambda.
inline double left_flat_residual(const Superoperator &s, Complex lambda = 1.0) {
    const CVector f = flat_left_vector(s.hilbert_dimension());
    const CVector row = s.matrix().transpose() * f;
    return (row - lambda * f).cwiseAbs().maxCoeff();
}

/// Same check for a generator: <<1| L = 0.
inline double trace_preservation_error(const Superoperator &s) {
    return left_flat_residual(s, s.kind() == SuperoperatorKind::lindbladian ? Complex(0.0) : Complex(1.0));
}

}  // namespace randpec
