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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "randpec/linalg.hpp"
#include "randpec/random_ensembles.hpp"

using namespace randpec;

namespace {

// Marchenko-Pastur law with ratio 1 and unit mean: rho(x) = sqrt(x (4 - x)) / (2 pi x) on [0, 4].
double mp_mass(double a, double b) {
    const int steps = 20000;
    double acc = 0.0;
    const double h = (b - a) / steps;
    for (int i = 0; i < steps; ++i) {
        const double x = a + (i + 0.5) * h;
        acc += std::sqrt(x * (4.0 - x)) / (2.0 * std::numbers::pi * x) * h;
    }
    return acc;
}

// Quarter-circle law for singular values of a Ginibre matrix scaled by 1/sqrt(d): sqrt(4 - s^2) / pi on [0, 2].
double quarter_circle_mass(double a, double b) {
    auto cdf = [](double s) {
        return (s * std::sqrt(4.0 - s * s) / 2.0 + 2.0 * std::asin(s / 2.0)) / std::numbers::pi;
    };
    return cdf(b) - cdf(a);
}

}  // namespace

TEST(RngSeed, SubstreamsAreDeterministicAndDistinct) {
    const RngSeed root{7, 0};
    EXPECT_EQ(root.substream(3), root.substream(3));
    EXPECT_FALSE(root.substream(3) == root.substream(4));
    EXPECT_FALSE(root.substream(0) == root);
    auto a = root.substream(1).engine();
    auto b = root.substream(1).engine();
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(a(), b());
    }
    EXPECT_NE(RngSeed({1, 0}).engine()(), RngSeed({2, 0}).engine()());
}

TEST(Ginibre, BitIdenticalOnRerun) {
    const CMatrix a = sample_ginibre(17, {42, 3});
    const CMatrix b = sample_ginibre(17, {42, 3});
    EXPECT_EQ(max_abs(a - b), 0.0);
    EXPECT_GT(max_abs(a - sample_ginibre(17, {42, 4})), 0.0);
}

TEST(Ginibre, EntryMomentsAtOrderThousand) {
    const CMatrix g = sample_ginibre(1000, {1, 0});
    const Complex mean = g.mean();
    EXPECT_LT(std::abs(mean), 0.01);
    const double second = g.cwiseAbs2().mean();
    EXPECT_NEAR(second, 1.0, 0.05);
    const double re_var = g.real().array().square().mean();
    EXPECT_NEAR(re_var, 0.5, 0.025);
}

TEST(Ginibre, SingularValuesFollowQuarterCircle) {
    const std::size_t d = 1000;
    const CMatrix g = sample_ginibre(d, {2, 0});
    const RVector ev = linalg::hermitian_eigenvalues(g.adjoint() * g);
    std::vector<double> s(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        s[static_cast<std::size_t>(i)] = std::sqrt(std::max(ev(i), 0.0) / static_cast<double>(d));
    }
    const double smax = *std::max_element(s.begin(), s.end());
    EXPECT_GT(smax, 1.9);
    EXPECT_LT(smax, 2.1);
    const int bins = 10;
    for (int b = 0; b < bins; ++b) {
        const double lo = 2.0 * b / bins, hi = 2.0 * (b + 1) / bins;
        const double frac = static_cast<double>(std::count_if(s.begin(), s.end(),
                                                              [&](double v) { return v >= lo && v < hi; })) /
                            static_cast<double>(d);
        EXPECT_NEAR(frac, quarter_circle_mass(lo, hi), 0.02) << "bin " << b;
    }
}

TEST(GlobalKossakowski, TraceHermiticityAndPositivity) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto k = sample_global_kossakowski(8, {seed, 0});
        EXPECT_EQ(k.order(), 63u);
        EXPECT_NEAR(k.trace(), 8.0, 1e-12);
        EXPECT_LE(k.hermiticity_error(), 1e-12);
        EXPECT_GE(k.min_eigenvalue(), -1e-10);
        EXPECT_NO_THROW(k.check_invariants());
    }
    EXPECT_THROW(sample_global_kossakowski(1, {0, 0}), InvalidDimension);
}

TEST(GlobalKossakowski, RescaledSpectrumIsMarchenkoPastur) {
    const std::size_t n = 32;
    const auto k = sample_global_kossakowski(n, {11, 0});
    const RVector ev = linalg::hermitian_eigenvalues(k.matrix()) * (static_cast<double>(n * n - 1) / n);
    const double count = static_cast<double>(ev.size());
    EXPECT_NEAR(ev.mean(), 1.0, 1e-10);
    EXPECT_GT(ev.minCoeff(), -1e-10);
    EXPECT_LT(ev.maxCoeff(), 4.3);
    const int bins = 8;
    for (int b = 0; b < bins; ++b) {
        const double lo = 4.0 * b / bins, hi = 4.0 * (b + 1) / bins;
        const double frac =
            static_cast<double>((ev.array() >= lo && ev.array() < hi).count()) / count;
        EXPECT_NEAR(frac, mp_mass(lo, hi), 0.02) << "bin " << b;
    }
}

TEST(LocalKossakowski, TraceHermiticityAndPositivity) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto k = sample_local_kossakowski(45, 32.0, {seed, 1});
        EXPECT_NEAR(k.trace(), 32.0, 1e-10);
        EXPECT_LE(k.hermiticity_error(), 1e-12);
        EXPECT_GE(k.min_eigenvalue(), -1e-10);
    }
}

TEST(LocalKossakowski, ScalarCase) {
    const auto k = sample_local_kossakowski(1, 16.0, {3, 0});
    ASSERT_EQ(k.order(), 1u);
    EXPECT_NEAR(k.matrix()(0, 0).real(), 16.0, 1e-12);
    EXPECT_NEAR(k.matrix()(0, 0).imag(), 0.0, 1e-12);
}

TEST(LocalKossakowski, SpectrumIsRescaledUniformDiagonal) {
    const RngSeed seed{5, 2};
    const std::size_t d = 18;
    const auto k = sample_local_kossakowski(d, 32.0, seed);
    auto gen = seed.substream(1).engine();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(d);
    for (auto &v : p) {
        v = 1.0 - u(gen);
    }
    double sum = 0.0;
    for (double v : p) {
        sum += v;
    }
    for (auto &v : p) {
        v *= 32.0 / sum;
        EXPECT_GT(v, 0.0);
    }
    std::sort(p.begin(), p.end());
    const RVector ev = linalg::hermitian_eigenvalues(k.matrix());
    for (std::size_t i = 0; i < d; ++i) {
        EXPECT_NEAR(ev(static_cast<Eigen::Index>(i)), p[i], 1e-12);
    }
}

TEST(Kossakowski, RejectsNonHermitianInput) {
    CMatrix m = CMatrix::Identity(3, 3);
    m(0, 1) = 0.5;
    EXPECT_THROW(KossakowskiMatrix(m, 3.0), ValidationError);
    EXPECT_THROW(KossakowskiMatrix(CMatrix::Identity(2, 3), 2.0), ShapeError);
    const KossakowskiMatrix wrong_trace(CMatrix::Identity(3, 3), 2.0);
    EXPECT_THROW(wrong_trace.check_invariants(), ValidationError);
    CMatrix neg = CMatrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    neg(0, 0) = 1.0;
    const KossakowskiMatrix indefinite(neg, 0.0);
    EXPECT_THROW(indefinite.check_invariants(), ValidationError);
}

TEST(HaarUnitary, UnitaryWithUnitDeterminant) {
    for (std::size_t n : {1u, 2u, 5u, 32u}) {
        const CMatrix q = sample_haar_unitary(n, {n, 9});
        EXPECT_LE(max_abs(q.adjoint() * q - CMatrix::Identity(q.rows(), q.rows())), 1e-12);
        EXPECT_NEAR(std::abs(q.determinant()), 1.0, 1e-10);
    }
}

TEST(HaarUnitary, TriangularFactorHasPositiveDiagonal) {
    const RngSeed seed{3, 3};
    const CMatrix h = sample_ginibre(6, seed);
    const CMatrix q = sample_haar_unitary(6, seed);
    const CMatrix r = q.adjoint() * h;
    for (Eigen::Index j = 0; j < 6; ++j) {
        EXPECT_GT(r(j, j).real(), 0.0);
        EXPECT_NEAR(r(j, j).imag(), 0.0, 1e-12);
        for (Eigen::Index i = j + 1; i < 6; ++i) {
            EXPECT_NEAR(std::abs(r(i, j)), 0.0, 1e-12);
        }
    }
}

TEST(HaarUnitary, TwoByTwoEigenphasesAreUniform) {
    const int samples = 100000;
    const int bins = 16;
    std::vector<int> counts(bins, 0);
    const RngSeed root{2024, 0};
    for (int s = 0; s < samples; ++s) {
        const CMatrix u = sample_haar_unitary(2, root.substream(static_cast<std::uint64_t>(s)));
        // Eigenvalues of a 2x2 matrix from its trace and determinant.
        const Complex tr = u.trace();
        const Complex det = u.determinant();
        const Complex disc = std::sqrt(tr * tr - 4.0 * det);
        for (const Complex lambda : {(tr + disc) / 2.0, (tr - disc) / 2.0}) {
            const double phase = std::arg(lambda);
            auto b = static_cast<int>((phase + std::numbers::pi) / (2.0 * std::numbers::pi) * bins);
            counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
        }
    }
    const double total = 2.0 * samples;
    const double p = 1.0 / bins;
    const double sigma = std::sqrt(total * p * (1.0 - p));
    for (int b = 0; b < bins; ++b) {
        EXPECT_LE(std::abs(counts[static_cast<std::size_t>(b)] - total * p), 3.0 * sigma) << "bin " << b;
    }
}
