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

// exp(A) by scaling and squaring with diagonal Pade approximants of degree
// 3, 5, 7, 9 or 13, degree and scaling chosen from the 1-norm (Higham 2005).

#include <array>
#include <cmath>
#include <string>

#include "randpec/errors.hpp"
#include "randpec/linalg.hpp"
#include "randpec/types.hpp"

namespace randpec {

namespace detail {

inline constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
inline constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
inline constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                                  30270240.0,    2162160.0,    110880.0,     3960.0,
                                                  90.0,          1.0};
inline constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
    10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
    960960.0,            16380.0,             182.0,              1.0};

inline constexpr std::array<double, 5> kPadeTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                                     9.504178996162932e-1, 2.097847961257068e0,
                                                     5.371920351148152e0};

template <std::size_t M>
void pade_low(const CMatrix &a, const std::array<double, M> &b, CMatrix &u, CMatrix &v) {
    const Eigen::Index n = a.rows();
    const CMatrix ident = CMatrix::Identity(n, n);
    const CMatrix a2 = a * a;
    CMatrix odd = b[1] * ident;
    CMatrix even = b[0] * ident;
    CMatrix power = ident;
    for (std::size_t j = 2; j < M; j += 2) {
        power = (j == 2) ? a2 : CMatrix(power * a2);
        even += b[j] * power;
        if (j + 1 < M) {
            odd += b[j + 1] * power;
        }
    }
    u = a * odd;
    v = std::move(even);
}

inline void pade13(const CMatrix &a, CMatrix &u, CMatrix &v) {
    const auto &b = kPade13;
    const Eigen::Index n = a.rows();
    const CMatrix ident = CMatrix::Identity(n, n);
    const CMatrix a2 = a * a;
    const CMatrix a4 = a2 * a2;
    const CMatrix a6 = a4 * a2;
    CMatrix inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    CMatrix tmp = a6 * inner;
    tmp += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
    u = a * tmp;
    inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    v = a6 * inner;
    v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace detail

struct ExpmStats {
    int pade_degree = 0;
    int squarings = 0;
};

/// exp(A) for a dense square complex matrix.
inline CMatrix expm(const CMatrix &a, ExpmStats *stats = nullptr) {
    if (a.rows() != a.cols()) {
        throw ShapeError("expm: matrix is not square");
    }
    if (!a.allFinite()) {
        throw ScalingFailure("expm: non-finite input");
    }
    const Eigen::Index n = a.rows();
    if (n == 0) {
        return a;
    }
    // exp(A) = e^mu exp(A - mu), mu = tr(A) / n, whenever the shift lowers the 1-norm.
    Complex mu = a.trace() / static_cast<double>(n);
    CMatrix shifted = a;
    shifted.diagonal().array() -= mu;
    double norm = linalg::one_norm(shifted);
    if (!(norm < linalg::one_norm(a))) {
        mu = 0.0;
        shifted = a;
        norm = linalg::one_norm(a);
    }
    const CMatrix &b = shifted;
    CMatrix u, v;
    int degree = 13;
    int squarings = 0;
    if (norm <= detail::kPadeTheta[0]) {
        degree = 3;
        detail::pade_low(b, detail::kPade3, u, v);
    } else if (norm <= detail::kPadeTheta[1]) {
        degree = 5;
        detail::pade_low(b, detail::kPade5, u, v);
    } else if (norm <= detail::kPadeTheta[2]) {
        degree = 7;
        detail::pade_low(b, detail::kPade7, u, v);
    } else if (norm <= detail::kPadeTheta[3]) {
        degree = 9;
        detail::pade_low(b, detail::kPade9, u, v);
    } else {
        const double ratio = norm / detail::kPadeTheta[4];
        squarings = ratio > 1.0 ? static_cast<int>(std::ceil(std::log2(ratio))) : 0;
        if (squarings > 1000) {
            throw ScalingFailure("expm: 1-norm " + std::to_string(norm) + " needs too many squarings");
        }
        detail::pade13(std::ldexp(1.0, -squarings) * b, u, v);
    }
    const linalg::LuFactorization lu(v - u);
    if (lu.singular()) {
        throw ScalingFailure("expm: Pade denominator is singular");
    }
    CMatrix x = lu.solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        x = x * x;
    }
    if (mu != Complex(0.0)) {
        x *= std::exp(mu);
    }
    if (!x.allFinite()) {
        throw ScalingFailure("expm: result overflowed");
    }
    if (stats != nullptr) {
        *stats = ExpmStats{degree, squarings};
    }
    return x;
}

/// exp(A) = V diag(e^lambda) V^-1. Only meaningful for diagonalizable, reasonably
/// conditioned A; used as an independent cross-check of expm.
inline CMatrix expm_eigendecomposition(const CMatrix &a) {
    const auto sys = linalg::eigensystem(a);
    CVector exp_values(static_cast<Eigen::Index>(sys.values.size()));
    for (std::size_t i = 0; i < sys.values.size(); ++i) {
        exp_values(static_cast<Eigen::Index>(i)) = std::exp(sys.values[i]);
    }
    const CMatrix scaled = sys.right_vectors * exp_values.asDiagonal();
    const linalg::LuFactorization lu(sys.right_vectors);
    return lu.solve_right(scaled);
}

}  // namespace randpec
