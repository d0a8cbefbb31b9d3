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

// Thin RAII wrappers over the LAPACK routines the library leans on. Everything
// works on column-major Eigen storage, which is what LAPACK expects.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <complex>
#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "randpec/errors.hpp"
#include "randpec/types.hpp"

namespace randpec::linalg {

inline double one_norm(const CMatrix &a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

/// All eigenvalues of a general complex square matrix (LAPACK zgeev, no vectors).
inline std::vector<Complex> eigenvalues(const CMatrix &a) {
    if (a.rows() != a.cols()) {
        throw ShapeError("eigenvalues: matrix is not square");
    }
    const lapack_int n = static_cast<lapack_int>(a.rows());
    std::vector<Complex> w(static_cast<std::size_t>(n));
    if (n == 0) {
        return w;
    }
    if (!a.allFinite()) {
        throw EigensolverError("eigenvalues: matrix has non-finite entries");
    }
    CMatrix work = a;
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), nullptr, 1,
                                    nullptr, 1);
    if (info != 0) {
        throw EigensolverError("zgeev failed to converge (info=" + std::to_string(info) +
                               ", one-norm=" + std::to_string(one_norm(a)) + ")");
    }
    return w;
}

struct Eigensystem {
    std::vector<Complex> values;
    CMatrix right_vectors;  // columns, unit 2-norm
};

inline Eigensystem eigensystem(const CMatrix &a) {
    if (a.rows() != a.cols()) {
        throw ShapeError("eigensystem: matrix is not square");
    }
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigensystem out;
    out.values.resize(static_cast<std::size_t>(n));
    out.right_vectors.resize(n, n);
    if (n == 0) {
        return out;
    }
    if (!a.allFinite()) {
        throw EigensolverError("eigensystem: matrix has non-finite entries");
    }
    CMatrix work = a;
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, out.values.data(), nullptr,
                                    1, out.right_vectors.data(), n);
    if (info != 0) {
        throw EigensolverError("zgeev failed to converge (info=" + std::to_string(info) +
                               ", one-norm=" + std::to_string(one_norm(a)) + ")");
    }
    return out;
}

struct HermitianEigensystem {
    RVector values;  // ascending
    CMatrix vectors;  // a = vectors * diag(values) * vectors^dagger
};

/// Eigendecomposition of a Hermitian matrix; only the upper triangle is read.
inline HermitianEigensystem hermitian_eigensystem(const CMatrix &a) {
    if (a.rows() != a.cols()) {
        throw ShapeError("hermitian_eigensystem: matrix is not square");
    }
    const lapack_int n = static_cast<lapack_int>(a.rows());
    HermitianEigensystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    if (n == 0) {
        return out;
    }
    CMatrix work = a;
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, work.data(), n, 0.0, 0.0, 0, 0, 0.0, &found,
                                     out.values.data(), out.vectors.data(), n, support.data());
    if (info != 0 || found != n) {
        throw EigensolverError("zheevr failed (info=" + std::to_string(info) + ")");
    }
    return out;
}

inline RVector hermitian_eigenvalues(const CMatrix &a) {
    if (a.rows() != a.cols()) {
        throw ShapeError("hermitian_eigenvalues: matrix is not square");
    }
    const lapack_int n = static_cast<lapack_int>(a.rows());
    RVector values(n);
    if (n == 0) {
        return values;
    }
    CMatrix work = a;
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n, values.data());
    if (info != 0) {
        throw EigensolverError("zheevd failed (info=" + std::to_string(info) + ")");
    }
    return values;
}

/// LU factorization with partial pivoting (zgetrf) plus a 1-norm condition estimate (zgecon).
class LuFactorization {
   public:
    explicit LuFactorization(const CMatrix &a) : lu_(a), pivots_(static_cast<std::size_t>(a.rows())) {
        if (a.rows() != a.cols()) {
            throw ShapeError("LuFactorization: matrix is not square");
        }
        n_ = static_cast<lapack_int>(a.rows());
        if (n_ == 0) {
            return;
        }
        const double anorm = one_norm(a);
        lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n_, n_, lu_.data(), n_, pivots_.data());
        if (info < 0) {
            throw ValidationError("zgetrf: illegal argument " + std::to_string(-info));
        }
        singular_ = info > 0;
        if (singular_ || anorm == 0.0) {
            rcond_ = 0.0;
            singular_ = true;
            return;
        }
        info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n_, lu_.data(), n_, anorm, &rcond_);
        if (info != 0) {
            throw ValidationError("zgecon failed (info=" + std::to_string(info) + ")");
        }
    }

    /// Reciprocal 1-norm condition number estimate; 0 for exactly singular input.
    double reciprocal_condition() const noexcept { return rcond_; }
    bool singular() const noexcept { return singular_; }

    /// log|det A| from the diagonal of U.
    double log_abs_determinant() const {
        double acc = 0.0;
        for (lapack_int i = 0; i < n_; ++i) {
            acc += std::log(std::abs(lu_(i, i)));
        }
        return acc;
    }

    /// Solves A X = B.
    CMatrix solve(const CMatrix &b) const { return solve_impl(b, 'N'); }

    /// Solves X A = B, i.e. A^T X^T = B^T.
    CMatrix solve_right(const CMatrix &b) const {
        CMatrix bt = b.transpose();
        return solve_impl(bt, 'T').transpose();
    }

   private:
    CMatrix solve_impl(const CMatrix &b, char trans) const {
        if (singular_) {
            throw ValidationError("LuFactorization: matrix is singular");
        }
        if (b.rows() != n_) {
            throw ShapeError("LuFactorization: right-hand side has wrong row count");
        }
        CMatrix x = b;
        if (n_ == 0 || b.cols() == 0) {
            return x;
        }
        lapack_int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, trans, n_, static_cast<lapack_int>(x.cols()),
                                         lu_.data(), n_, pivots_.data(), x.data(), n_);
        if (info != 0) {
            throw ValidationError("zgetrs failed (info=" + std::to_string(info) + ")");
        }
        return x;
    }

    CMatrix lu_;
    std::vector<lapack_int> pivots_;
    lapack_int n_ = 0;
    double rcond_ = 1.0;
    bool singular_ = false;
};

}  // namespace randpec::linalg
