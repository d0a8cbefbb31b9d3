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

// Dense Lindbladian assembly
//
//   L = sum_{k,l} K_{k,l} [ F_l (x) F_k^* - 1/2 (F_k^dagger F_l (x) 1 + 1 (x) F_l^T F_k^*) ].
//
// With A the N^2 x d matrix of row-major flattened basis elements, the jump
// part is a permutation of A K^T A^dagger and the anticommutator part only
// needs G = sum_{k,l} K_{k,l} F_k^dagger F_l. Both routes below reduce to a
// handful of GEMMs; the diagonalized route rotates the basis into the eigenbasis
// of K first, so every term is a weighted rank-one outer product.

#include "randpec/errors.hpp"
#include "randpec/linalg.hpp"
#include "randpec/operator_basis.hpp"
#include "randpec/random_ensembles.hpp"
#include "randpec/superoperator.hpp"

namespace randpec {

namespace detail {

// jump_gram(a*N + c, b*N + d) = sum_l,k A(ac, l) M(l, k) conj(A(bd, k)), already
// contracted; this reshuffles it into superoperator order and subtracts the
// anticommutator G (x) 1 + 1 (x) G^T.
inline CMatrix assemble_lindbladian(std::size_t n, const CMatrix &jump_gram, const CMatrix &g) {
    const auto dim = static_cast<Eigen::Index>(n);
    const Eigen::Index n2 = dim * dim;
    CMatrix out(n2, n2);
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index d = 0; d < dim; ++d) {
            const Eigen::Index col = c * dim + d;
            for (Eigen::Index a = 0; a < dim; ++a) {
                for (Eigen::Index b = 0; b < dim; ++b) {
                    out(a * dim + b, col) = jump_gram(a * dim + c, b * dim + d);
                }
            }
        }
    }
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const Complex gac = 0.5 * g(a, c);
            const Complex gca = 0.5 * g(c, a);
            for (Eigen::Index b = 0; b < dim; ++b) {
                // G (x) 1: rows (a, b), cols (c, b).
                out(a * dim + b, c * dim + b) -= gac;
                // 1 (x) G^T: rows (b, a), cols (b, c), entry G(c, a).
                out(b * dim + a, b * dim + c) -= gca;
            }
        }
    }
    return out;
}

// G = sum_c conj(A_c) K A_c^T where A_c holds rows c*N .. c*N+N-1 of A.
inline CMatrix anticommutator_generator(std::size_t n, const CMatrix &stacked, const CMatrix &coupling) {
    const auto dim = static_cast<Eigen::Index>(n);
    CMatrix g = CMatrix::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto block = stacked.middleRows(c * dim, dim);
        g.noalias() += block.conjugate() * (coupling * block.transpose());
    }
    return g;
}

inline CMatrix anticommutator_generator_diagonal(std::size_t n, const CMatrix &stacked, const RVector &weights) {
    const auto dim = static_cast<Eigen::Index>(n);
    CMatrix g = CMatrix::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto block = stacked.middleRows(c * dim, dim);
        g.noalias() += block.conjugate() * (weights.cast<Complex>().asDiagonal() * block.transpose());
    }
    return g;
}

inline void check_shapes(const KossakowskiMatrix &k, const OperatorBasis &basis) {
    if (k.order() != basis.size()) {
        throw ShapeError("Kossakowski order " + std::to_string(k.order()) + " does not match basis size " +
                         std::to_string(basis.size()));
    }
}

}  // namespace detail

/// Direct evaluation of the double sum over (k, l).
inline Superoperator build_lindbladian(const KossakowskiMatrix &k, const OperatorBasis &basis) {
    detail::check_shapes(k, basis);
    const std::size_t n = basis.dimension();
    const CMatrix a = basis.stacked();
    const CMatrix ak = a * k.matrix().transpose();
    const CMatrix jump = ak * a.adjoint();
    const CMatrix g = detail::anticommutator_generator(n, a, k.matrix());
    return Superoperator(n, detail::assemble_lindbladian(n, jump, g), SuperoperatorKind::lindbladian);
}

/// Diagonalizes K = Q^dagger D Q, rotates the basis to F_mu = sum_n Q_{mu,n} F_n and
/// accumulates d weighted dissipators D_mu [F_mu (x) F_mu^* - ...].
inline Superoperator build_lindbladian_diagonalized(const KossakowskiMatrix &k, const OperatorBasis &basis) {
    detail::check_shapes(k, basis);
    const std::size_t n = basis.dimension();
    const auto eig = linalg::hermitian_eigensystem(k.matrix());
    if (eig.values.size() > 0 && eig.values.minCoeff() < -KossakowskiMatrix::kNegativityTolerance) {
        throw ValidationError("Kossakowski matrix has a negative eigenvalue " +
                              std::to_string(eig.values.minCoeff()));
    }
    // K = V diag(w) V^dagger, so Q = V^dagger and the rotated stack is A conj(V).
    const CMatrix rotated = basis.stacked() * eig.vectors.conjugate();
    const CMatrix weighted = rotated * eig.values.cast<Complex>().asDiagonal();
    const CMatrix jump = weighted * rotated.adjoint();
    const CMatrix g = detail::anticommutator_generator_diagonal(n, rotated, eig.values);
    return Superoperator(n, detail::assemble_lindbladian(n, jump, g), SuperoperatorKind::lindbladian);
}

/// k_max-local Lindbladian over a Pauli-string basis (diagonalized route).
inline Superoperator build_local_lindbladian(const KossakowskiMatrix &k, const OperatorBasis &basis) {
    if (basis.kind() != BasisKind::pauli_local) {
        throw ShapeError("build_local_lindbladian needs a Pauli-string basis");
    }
    return build_lindbladian_diagonalized(k, basis);
}

}  // namespace randpec
