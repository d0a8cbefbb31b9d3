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
#include <random>
#include <string>

#include "randpec/errors.hpp"
#include "randpec/linalg.hpp"
#include "randpec/types.hpp"

namespace randpec {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed plus stream id. Substreams are derived by hashing, so a tree of
/// independent reproducible streams can be handed to layers and ensemble members.
struct RngSeed {
    std::uint64_t value = 0;
    std::uint64_t stream = 0;

    RngSeed substream(std::uint64_t k) const {
        return RngSeed{value, splitmix64(splitmix64(stream) ^ (k + 0x632BE59BD9B4E019ULL))};
    }

    std::mt19937_64 engine() const {
        const std::uint64_t a = splitmix64(value);
        const std::uint64_t b = splitmix64(stream ^ 0xD1B54A32D192ED03ULL);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        return std::mt19937_64(seq);
    }

    friend bool operator==(const RngSeed &, const RngSeed &) = default;
};

/// d x d complex Ginibre matrix: i.i.d. entries with real and imaginary parts
/// each N(0, 1/2), so E|z|^2 = 1.
inline CMatrix sample_ginibre(std::size_t d, RngSeed seed) {
    if (d < 1) {
        throw InvalidDimension("ginibre order must be >= 1");
    }
    auto gen = seed.engine();
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const auto n = static_cast<Eigen::Index>(d);
    CMatrix g(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double re = normal(gen);
            const double im = normal(gen);
            g(r, c) = Complex(re, im);
        }
    }
    return g;
}

/// Haar-distributed unitary from QR of a Ginibre matrix, with the column phases
/// fixed so that R has a positive diagonal.
inline CMatrix sample_haar_unitary(std::size_t n, RngSeed seed) {
    if (n < 1) {
        throw InvalidDimension("unitary dimension must be >= 1");
    }
    const CMatrix h = sample_ginibre(n, seed);
    Eigen::HouseholderQR<CMatrix> qr(h);
    CMatrix q = qr.householderQ();
    const auto diag = qr.matrixQR().diagonal();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const double mag = std::abs(diag(j));
        if (mag > 0.0) {
            q.col(j) *= diag(j) / mag;
        }
    }
    return q;
}

/// Hermitian positive-semidefinite coupling matrix of a Lindbladian.
class KossakowskiMatrix {
   public:
    static constexpr double kHermiticityTolerance = 1e-12;
    static constexpr double kTraceTolerance = 1e-10;
    static constexpr double kNegativityTolerance = 1e-10;

    KossakowskiMatrix(CMatrix m, double normalization) : m_(std::move(m)), normalization_(normalization) {
        if (m_.rows() != m_.cols()) {
            throw ShapeError("Kossakowski matrix must be square");
        }
        if (hermiticity_error() > kHermiticityTolerance) {
            throw ValidationError("Kossakowski matrix is not Hermitian (error " +
                                  std::to_string(hermiticity_error()) + ")");
        }
    }

    std::size_t order() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const CMatrix &matrix() const noexcept { return m_; }
    double normalization() const noexcept { return normalization_; }
    double trace() const { return m_.trace().real(); }

    double hermiticity_error() const { return max_abs(m_ - m_.adjoint()); }
    double min_eigenvalue() const { return order() == 0 ? 0.0 : linalg::hermitian_eigenvalues(m_).minCoeff(); }

    /// Throws ValidationError unless Hermitian, Tr K = normalization and (optionally) PSD.
    void check_invariants(bool check_spectrum = true) const {
        if (std::abs(trace() - normalization_) > kTraceTolerance * std::max(1.0, std::abs(normalization_))) {
            throw ValidationError("Kossakowski trace " + std::to_string(trace()) + " differs from " +
                                  std::to_string(normalization_));
        }
        if (check_spectrum && min_eigenvalue() < -kNegativityTolerance) {
            throw ValidationError("Kossakowski matrix is not positive semidefinite");
        }
    }

   private:
    CMatrix m_;
    double normalization_;
};

namespace detail {
inline CMatrix hermitian_part(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }
}  // namespace detail

/// K = N G^dagger G / Tr(G^dagger G) with G Ginibre of order N^2 - 1.
inline KossakowskiMatrix sample_global_kossakowski(std::size_t n, RngSeed seed) {
    if (n < 2) {
        throw InvalidDimension("global Kossakowski sampling needs N >= 2");
    }
    const CMatrix g = sample_ginibre(n * n - 1, seed);
    CMatrix w = g.adjoint() * g;
    w = detail::hermitian_part(w);
    const double tr = w.trace().real();
    w *= static_cast<double>(n) / tr;
    KossakowskiMatrix k(std::move(w), static_cast<double>(n));
    k.check_invariants(false);
    return k;
}

/// K = Q^dagger diag(p) Q with p_i uniform on (0, 1] and Q Haar on U(N_L),
/// rescaled to Tr K = N.
inline KossakowskiMatrix sample_local_kossakowski(std::size_t order, double normalization, RngSeed seed) {
    if (order < 1) {
        throw InvalidDimension("local Kossakowski order must be >= 1");
    }
    const auto d = static_cast<Eigen::Index>(order);
    const CMatrix q = sample_haar_unitary(order, seed.substream(0));
    auto gen = seed.substream(1).engine();
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    RVector p(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        p(i) = 1.0 - uniform(gen);
    }
    p *= normalization / p.sum();
    CMatrix k = q.adjoint() * p.cast<Complex>().asDiagonal() * q;
    k = detail::hermitian_part(k);
    KossakowskiMatrix out(std::move(k), normalization);
    out.check_invariants(false);
    return out;
}

}  // namespace randpec
