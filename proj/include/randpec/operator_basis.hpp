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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "randpec/errors.hpp"
#include "randpec/types.hpp"

namespace randpec {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

using PauliString = std::vector<PauliLetter>;

/// Number of non-identity tensor factors.
inline int pauli_weight(std::span<const PauliLetter> letters) {
    int k = 0;
    for (PauliLetter p : letters) {
        k += p != PauliLetter::I;
    }
    return k;
}

inline char pauli_char(PauliLetter p) { return "IXYZ"[static_cast<int>(p)]; }

inline std::string pauli_to_string(std::span<const PauliLetter> letters) {
    std::string s;
    s.reserve(letters.size());
    for (PauliLetter p : letters) {
        s.push_back(pauli_char(p));
    }
    return s;
}

inline CMatrix pauli_matrix(PauliLetter p) {
    CMatrix m(2, 2);
    const Complex i(0.0, 1.0);
    switch (p) {
        case PauliLetter::I:
            m << 1, 0, 0, 1;
            break;
        case PauliLetter::X:
            m << 0, 1, 1, 0;
            break;
        case PauliLetter::Y:
            m << 0, -i, i, 0;
            break;
        case PauliLetter::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

/// sigma_{x_1} (x) ... (x) sigma_{x_L}; qubit 0 is the leftmost (most significant) factor.
inline CMatrix pauli_string_matrix(std::span<const PauliLetter> letters, bool normalized = true) {
    CMatrix acc = CMatrix::Identity(1, 1);
    for (PauliLetter p : letters) {
        const CMatrix f = pauli_matrix(p);
        CMatrix next(acc.rows() * 2, acc.cols() * 2);
        for (Eigen::Index r = 0; r < acc.rows(); ++r) {
            for (Eigen::Index c = 0; c < acc.cols(); ++c) {
                next.block<2, 2>(2 * r, 2 * c) = acc(r, c) * f;
            }
        }
        acc = std::move(next);
    }
    if (normalized) {
        acc /= std::sqrt(static_cast<double>(acc.rows()));
    }
    return acc;
}

inline std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    }
    return r;
}

/// N_L: number of Pauli strings on L qubits with weight 1..k_max.
inline std::size_t local_basis_size(int qubits, int k_max) {
    std::size_t total = 0;
    std::size_t three_pow = 1;
    for (int k = 1; k <= k_max; ++k) {
        three_pow *= 3;
        total += binomial(qubits, k) * three_pow;
    }
    return total;
}

enum class BasisKind { full, pauli_local };

/// Ordered traceless orthonormal operator basis, Tr(F_l F_k^dagger) = delta_{lk}.
/// Immutable after construction.
class OperatorBasis {
   public:
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return elements_.size(); }
    BasisKind kind() const noexcept { return kind_; }

    const std::vector<CMatrix> &elements() const noexcept { return elements_; }
    const CMatrix &element(std::size_t i) const { return elements_.at(i); }

    /// Pauli weight per element; empty for the full basis.
    const std::vector<int> &weights() const noexcept { return weights_; }
    /// Letter assignment per element; empty for the full basis.
    const std::vector<PauliString> &strings() const noexcept { return strings_; }

    /// N^2 x d matrix whose column l is the row-major flattening of F_l,
    /// i.e. entry (a*N + c, l) = F_l(a, c).
    CMatrix stacked() const {
        const auto n = static_cast<Eigen::Index>(dimension_);
        CMatrix a(n * n, static_cast<Eigen::Index>(size()));
        for (std::size_t l = 0; l < size(); ++l) {
            const CMatrix &f = elements_[l];
            for (Eigen::Index r = 0; r < n; ++r) {
                for (Eigen::Index c = 0; c < n; ++c) {
                    a(r * n + c, static_cast<Eigen::Index>(l)) = f(r, c);
                }
            }
        }
        return a;
    }

    /// Gram matrix G_{lk} = Tr(F_l F_k^dagger).
    CMatrix gram() const {
        const CMatrix a = stacked();
        // Tr(F_l F_k^dagger) = sum_{ac} F_l(a,c) conj(F_k(a,c)).
        return a.transpose() * a.conjugate();
    }

    friend OperatorBasis build_gell_mann_basis(std::size_t n);
    friend OperatorBasis build_pauli_basis(int qubits, int k_max);

   private:
    OperatorBasis(std::size_t dimension, BasisKind kind) : dimension_(dimension), kind_(kind) {}

    std::size_t dimension_;
    BasisKind kind_;
    std::vector<CMatrix> elements_;
    std::vector<int> weights_;
    std::vector<PauliString> strings_;
};

/// Generalized Gell-Mann basis for any N >= 2: symmetric, antisymmetric, then
/// diagonal families, each normalized to unit Hilbert-Schmidt norm.
inline OperatorBasis build_gell_mann_basis(std::size_t n) {
    if (n < 2) {
        throw InvalidDimension("operator basis needs N >= 2, got " + std::to_string(n));
    }
    OperatorBasis basis(n, BasisKind::full);
    basis.elements_.reserve(n * n - 1);
    const auto dim = static_cast<Eigen::Index>(n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = j + 1; k < dim; ++k) {
            CMatrix e = CMatrix::Zero(dim, dim);
            e(j, k) = inv_sqrt2;
            e(k, j) = inv_sqrt2;
            basis.elements_.push_back(std::move(e));
        }
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = j + 1; k < dim; ++k) {
            CMatrix e = CMatrix::Zero(dim, dim);
            e(j, k) = Complex(0.0, -inv_sqrt2);
            e(k, j) = Complex(0.0, inv_sqrt2);
            basis.elements_.push_back(std::move(e));
        }
    }
    for (Eigen::Index l = 1; l < dim; ++l) {
        CMatrix e = CMatrix::Zero(dim, dim);
        const double scale = 1.0 / std::sqrt(static_cast<double>(l) * static_cast<double>(l + 1));
        for (Eigen::Index j = 0; j < l; ++j) {
            e(j, j) = scale;
        }
        e(l, l) = -static_cast<double>(l) * scale;
        basis.elements_.push_back(std::move(e));
    }
    return basis;
}

/// Full traceless orthonormal basis of N^2 - 1 elements for a qubit register (N = 2^L).
inline OperatorBasis build_full_basis(std::size_t n) {
    if (n < 2 || !is_power_of_two(n)) {
        throw InvalidDimension("full basis needs N >= 2 and a power of two, got " + std::to_string(n));
    }
    return build_gell_mann_basis(n);
}

/// All normalized Pauli strings of weight 1..k_max on L qubits, weight-major, then
/// lexicographic in the support positions, then in the letters (X < Y < Z).
inline OperatorBasis build_pauli_basis(int qubits, int k_max) {
    if (qubits < 1 || qubits > 30) {
        throw InvalidDimension("pauli basis needs 1 <= L <= 30, got " + std::to_string(qubits));
    }
    if (k_max < 1 || k_max > qubits) {
        throw InvalidLocality("k_max must satisfy 1 <= k_max <= L, got k_max=" + std::to_string(k_max) +
                              " with L=" + std::to_string(qubits));
    }
    const std::size_t n = std::size_t{1} << qubits;
    OperatorBasis basis(n, BasisKind::pauli_local);
    const std::size_t total = local_basis_size(qubits, k_max);
    basis.elements_.reserve(total);
    basis.weights_.reserve(total);
    basis.strings_.reserve(total);

    for (int k = 1; k <= k_max; ++k) {
        std::vector<int> positions(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            positions[static_cast<std::size_t>(i)] = i;
        }
        while (true) {
            std::vector<int> letters(static_cast<std::size_t>(k), 1);
            while (true) {
                PauliString s(static_cast<std::size_t>(qubits), PauliLetter::I);
                for (int i = 0; i < k; ++i) {
                    s[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)])] =
                        static_cast<PauliLetter>(letters[static_cast<std::size_t>(i)]);
                }
                basis.elements_.push_back(pauli_string_matrix(s));
                basis.weights_.push_back(k);
                basis.strings_.push_back(std::move(s));

                int i = k - 1;
                while (i >= 0 && letters[static_cast<std::size_t>(i)] == 3) {
                    letters[static_cast<std::size_t>(i)] = 1;
                    --i;
                }
                if (i < 0) {
                    break;
                }
                ++letters[static_cast<std::size_t>(i)];
            }

            // Next k-combination of {0..L-1} in lexicographic order.
            int i = k - 1;
            while (i >= 0 && positions[static_cast<std::size_t>(i)] == qubits - k + i) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++positions[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) {
                positions[static_cast<std::size_t>(j)] = positions[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    return basis;
}

}  // namespace randpec
