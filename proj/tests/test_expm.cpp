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
#include <limits>

#include "randpec/expm.hpp"
#include "randpec/random_ensembles.hpp"

using namespace randpec;

namespace {

CMatrix fixture() {
    CMatrix b(3, 3);
    b << 1.0, 2.0, 0.0, -1.0, Complex(0.5, 1.0), 0.3, Complex(0.0, 0.2), 0.0, -2.0;
    return b;
}

struct Reference {
    double scale;
    int degree;
    int squarings;
    Complex e00, e12, e21;
};

// Reference entries of exp(scale * B) from an independent scaling-and-squaring implementation.
const Reference kReferences[] = {
    {0.004, 3, 0, {1.0039919573161527, -2.0116707783997735e-08}, {0.001196400781239858, 2.3967931654942634e-06},
     {-4.2666593749548554e-09, 3.197865579114838e-06}},
    {0.05, 5, 0, {1.048666275453076, -4.0717448774694947e-05}, {0.014438615653610173, 0.00036857804773437694},
     {-8.331033717170347e-06, 0.0004958009937873534}},
    {0.1, 7, 0, {1.094327576187401, -0.0003381904135361485}, {0.027755543837523638, 0.0014471636181478153},
     {-6.659052279507687e-05, 0.001966051124271606}},
    {0.5, 9, 0, {1.290800295398748, -0.05447185069604687}, {0.09191804886463416, 0.029139673649877837},
     {-0.008035910660438714, 0.04502093097298248}},
    {1.5, 13, 0, {-0.366118889574526, -1.9126686141144476}, {-0.10934466970025483, -0.004159589831199892},
     {-0.13022101193051544, 0.2308351215557722}},
    {4.0, 13, 2, {-13.143447046861423, 16.363262893154268}, {-0.2812096852628698, 1.3827444200500822},
     {1.4175477295029248, -0.10251976804969652}},
    {40.0, 13, 5, {-3102015754184.5195, -126151177362206.72}, {-203108473195.9955, -6299153242312.794},
     {-1294253242901.0356, 8305036839804.888}},
};

}  // namespace

TEST(Expm, MatchesReferenceAcrossPadeDegrees) {
    for (const auto &ref : kReferences) {
        ExpmStats stats;
        const CMatrix e = expm(ref.scale * fixture(), &stats);
        EXPECT_EQ(stats.pade_degree, ref.degree) << "scale " << ref.scale;
        EXPECT_EQ(stats.squarings, ref.squarings) << "scale " << ref.scale;
        const double tol = 1e-12 * std::max(1.0, max_abs(e));
        EXPECT_NEAR(std::abs(e(0, 0) - ref.e00), 0.0, tol) << "scale " << ref.scale;
        EXPECT_NEAR(std::abs(e(1, 2) - ref.e12), 0.0, tol) << "scale " << ref.scale;
        EXPECT_NEAR(std::abs(e(2, 1) - ref.e21), 0.0, tol) << "scale " << ref.scale;
    }
}

TEST(Expm, ZeroIsIdentity) {
    EXPECT_EQ(max_abs(expm(CMatrix::Zero(5, 5)) - CMatrix::Identity(5, 5)), 0.0);
}

TEST(Expm, DiagonalIsEntrywise) {
    CVector d(4);
    d << Complex(0.3, 1.0), Complex(-2.0, 0.0), Complex(1.5, -0.5), Complex(-7.0, 3.0);
    const CMatrix e = expm(d.asDiagonal().toDenseMatrix());
    for (Eigen::Index i = 0; i < 4; ++i) {
        EXPECT_LE(std::abs(e(i, i) - std::exp(d(i))), 1e-14 * std::abs(std::exp(d(i))));
    }
    EXPECT_LE(max_abs(e - CMatrix(e.diagonal().asDiagonal())), 0.0);
}

TEST(Expm, NilpotentAndRotation) {
    CMatrix n = CMatrix::Zero(2, 2);
    n(0, 1) = 3.0;
    CMatrix expected = CMatrix::Identity(2, 2);
    expected(0, 1) = 3.0;
    EXPECT_LE(max_abs(expm(n) - expected), 1e-14);

    const double theta = 2.3;
    CMatrix r(2, 2);
    r << 0.0, -theta, theta, 0.0;
    const CMatrix e = expm(r);
    EXPECT_NEAR(e(0, 0).real(), std::cos(theta), 1e-14);
    EXPECT_NEAR(e(1, 0).real(), std::sin(theta), 1e-14);
}

TEST(Expm, AgreesWithEigendecompositionRoute) {
    const CMatrix a = 0.3 * sample_ginibre(40, {5, 5});
    const CMatrix x = expm(a);
    const CMatrix y = expm_eigendecomposition(a);
    EXPECT_LE(max_abs(x - y) / max_abs(x), 1e-11);
}

TEST(Expm, InverseAndTrace) {
    const CMatrix a = 0.5 * sample_ginibre(30, {6, 6});
    const CMatrix prod = expm(a) * expm(-a);
    EXPECT_LE(max_abs(prod - CMatrix::Identity(30, 30)), 1e-11);
    // det exp(A) = exp(Tr A).
    const Complex det = expm(a).determinant();
    EXPECT_LE(std::abs(det - std::exp(a.trace())) / std::abs(det), 1e-10);
}

TEST(Expm, RejectsBadInput) {
    CMatrix bad = CMatrix::Identity(3, 3);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(expm(bad), ScalingFailure);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(expm(bad), ScalingFailure);
    EXPECT_THROW(expm(CMatrix::Identity(2, 3)), ShapeError);
    EXPECT_THROW(expm(1e300 * CMatrix::Identity(2, 2)), ScalingFailure);
}
