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

#include "randpec/channel_assembly.hpp"
#include "randpec/linalg.hpp"

using namespace randpec;

namespace {

// Choi matrix sum_{ab} |a><b| (x) S(|a><b|) of a row-stacked superoperator.
CMatrix choi(const Superoperator &s) {
    const auto n = static_cast<Eigen::Index>(s.hilbert_dimension());
    CMatrix c = CMatrix::Zero(n * n, n * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            CMatrix e = CMatrix::Zero(n, n);
            e(a, b) = 1.0;
            c.block(a * n, b * n, n, n) = unvectorize(s.matrix() * vectorize(e), static_cast<std::size_t>(n));
        }
    }
    return c;
}

CircuitSpec global_spec(std::size_t n, int layers, double t, std::uint64_t seed) {
    CircuitSpec s;
    s.dimension = n;
    s.layers = layers;
    s.t = t;
    s.seed = {seed, 0};
    return s;
}

}  // namespace

TEST(FoldUnitary, IdentityAndConjugationAction) {
    EXPECT_EQ(max_abs(fold_unitary(CMatrix::Identity(3, 3)).matrix() - CMatrix::Identity(9, 9)), 0.0);
    const CMatrix u = sample_haar_unitary(4, {1, 1});
    const auto f = fold_unitary(u);
    EXPECT_EQ(f.kind(), SuperoperatorKind::folded_unitary);
    const CMatrix rho = sample_ginibre(4, {2, 2});
    EXPECT_LE(max_abs(unvectorize(f.matrix() * vectorize(rho), 4) - u * rho * u.adjoint()), 1e-14);
    EXPECT_LE(trace_preservation_error(f), 1e-10);
    for (const Complex z : linalg::eigenvalues(f.matrix())) {
        EXPECT_NEAR(std::abs(z), 1.0, 1e-10);
    }
}

TEST(FoldUnitary, TransposeConventionIsUnitaryButNotConjugation) {
    const CMatrix u = sample_haar_unitary(3, {3, 1});
    const auto f = fold_unitary(u, FoldConvention::transpose);
    EXPECT_LE(max_abs(f.matrix().adjoint() * f.matrix() - CMatrix::Identity(9, 9)), 1e-13);
    EXPECT_LE(max_abs(f.matrix() - kronecker(u, u.transpose())), 0.0);
    EXPECT_GT(max_abs(f.matrix() - fold_unitary(u).matrix()), 1e-3);
}

TEST(FoldUnitary, LeftActionMatchesDenseProduct) {
    const CMatrix u = sample_haar_unitary(5, {4, 1});
    const CMatrix x = sample_ginibre(25, {4, 2});
    for (auto convention : {FoldConvention::conjugate, FoldConvention::transpose}) {
        CMatrix y = x;
        apply_fold_left(u, convention, y);
        EXPECT_LE(max_abs(y - fold_unitary(u, convention).matrix() * x), 1e-13);
    }
    CMatrix wrong(24, 25);
    EXPECT_THROW(apply_fold_left(u, FoldConvention::conjugate, wrong), ShapeError);
}

TEST(FoldUnitary, RejectsNonUnitary) {
    CMatrix u = CMatrix::Identity(2, 2);
    u(0, 1) = 1e-6;
    EXPECT_THROW(fold_unitary(u), ValidationError);
    EXPECT_THROW(fold_unitary(CMatrix::Identity(2, 3)), ShapeError);
}

TEST(MatrixExponential, ZeroTimeAndLabels) {
    const auto l = build_lindbladian(sample_global_kossakowski(4, {1, 0}), build_full_basis(4));
    const auto e0 = matrix_exponential(l, 0.0);
    EXPECT_EQ(max_abs(e0.matrix() - CMatrix::Identity(16, 16)), 0.0);
    EXPECT_EQ(e0.kind(), SuperoperatorKind::noise_channel);
    EXPECT_EQ(matrix_exponential(l, -0.1).kind(), SuperoperatorKind::generic);
}

TEST(MatrixExponential, NoiseChannelIsCptp) {
    const auto l = build_lindbladian(sample_global_kossakowski(4, {2, 0}), build_full_basis(4));
    const auto e = matrix_exponential(l, 0.3);
    EXPECT_LE(trace_preservation_error(e), 1e-12);
    const auto ev = linalg::eigenvalues(e.matrix());
    double radius = 0.0;
    double closest = 1.0;
    for (const Complex z : ev) {
        radius = std::max(radius, std::abs(z));
        closest = std::min(closest, std::abs(z - 1.0));
    }
    EXPECT_LE(radius, 1.0 + 1e-8);
    EXPECT_LE(closest, 1e-8);
    const CMatrix c = choi(e);
    EXPECT_LE(max_abs(c - c.adjoint()), 1e-12);
    EXPECT_GE(linalg::hermitian_eigenvalues(c).minCoeff(), -1e-12);
}

TEST(CircuitSpec, Validation) {
    CircuitSpec s;
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.hilbert_dimension(), 32u);
    s.t = 1.5;
    EXPECT_THROW(s.validate(), ValidationError);
    s.t = 0.1;
    s.layers = 0;
    EXPECT_THROW(s.validate(), ValidationError);
    s.layers = 2;
    s.noise = NoiseKind::local;
    s.k_max = 0;
    EXPECT_THROW(s.validate(), InvalidLocality);
    s.k_max = 6;
    EXPECT_THROW(s.validate(), InvalidLocality);
    s.k_max = 2;
    s.dimension = 24;
    EXPECT_THROW(s.validate(), InvalidDimension);
    s.noise = NoiseKind::global;
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.hilbert_dimension(), 24u);
}

TEST(NoisyCircuit, ZeroNoiseIsTheTargetUnitary) {
    const auto c = assemble_noisy_circuit(global_spec(8, 3, 0.0, 4));
    EXPECT_LE(max_abs(c.noisy.matrix() - c.target.matrix()), 1e-10);
    CMatrix u = CMatrix::Identity(8, 8);
    for (const auto &layer : c.layers) {
        u = layer.unitary * u;
    }
    EXPECT_LE(max_abs(c.target.matrix() - fold_unitary(u).matrix()), 1e-12);
}

TEST(NoisyCircuit, ProductOfLayerFactors) {
    const auto c = assemble_noisy_circuit(global_spec(4, 3, 0.2, 5));
    CMatrix expected = CMatrix::Identity(16, 16);
    for (const auto &layer : c.layers) {
        expected = expm(0.2 * layer.lindbladian.matrix()) * layer.folded.matrix() * expected;
    }
    EXPECT_LE(max_abs(c.noisy.matrix() - expected), 1e-12);
    EXPECT_EQ(c.noisy.kind(), SuperoperatorKind::noisy_circuit);
}

TEST(NoisyCircuit, LayersUseIndependentSubstreams) {
    const auto c = assemble_noisy_circuit(global_spec(4, 2, 0.1, 6));
    EXPECT_EQ(max_abs(c.layers[0].unitary - sample_haar_unitary(4, RngSeed{6, 0}.substream(0))), 0.0);
    EXPECT_EQ(max_abs(c.layers[1].unitary - sample_haar_unitary(4, RngSeed{6, 0}.substream(2))), 0.0);
    EXPECT_GT(max_abs(c.layers[0].lindbladian.matrix() - c.layers[1].lindbladian.matrix()), 1e-3);
}

TEST(NoisyCircuit, RetimingAndPrefixMatchFreshAssembly) {
    const auto base = assemble_noisy_circuit(global_spec(8, 3, 0.1, 7));
    const auto retimed = with_noise_time(base, 0.4);
    const auto fresh = assemble_noisy_circuit(global_spec(8, 3, 0.4, 7));
    EXPECT_EQ(max_abs(retimed.noisy.matrix() - fresh.noisy.matrix()), 0.0);
    const auto prefix = leading_layers(base, 2);
    const auto fresh2 = assemble_noisy_circuit(global_spec(8, 2, 0.1, 7));
    EXPECT_EQ(max_abs(prefix.noisy.matrix() - fresh2.noisy.matrix()), 0.0);
    EXPECT_EQ(prefix.spec.layers, 2);
    EXPECT_THROW(leading_layers(base, 4), ValidationError);
    EXPECT_THROW(with_noise_time(base, -0.1), ValidationError);
}

TEST(NoisyCircuit, SpectrumInsideUnitDiskWithStationaryPoint) {
    const auto c = assemble_noisy_circuit(global_spec(32, 2, 0.1, 8));
    const auto ev = linalg::eigenvalues(c.noisy.matrix());
    double radius = 0.0;
    double closest = 1.0;
    for (const Complex z : ev) {
        radius = std::max(radius, std::abs(z));
        closest = std::min(closest, std::abs(z - 1.0));
    }
    EXPECT_LE(radius, 1.0 + 1e-8);
    EXPECT_LE(closest, 1e-8);
    EXPECT_LE(trace_preservation_error(c.noisy), 1e-10);
}

TEST(NoisyCircuit, MeanModulusDecreasesWithNoise) {
    const auto base = assemble_noisy_circuit(global_spec(16, 2, 0.1, 9));
    double previous = 2.0;
    for (double t : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        const auto ev = linalg::eigenvalues(with_noise_time(base, t).noisy.matrix());
        double mean = 0.0;
        for (const Complex z : ev) {
            mean += std::abs(z);
        }
        mean /= static_cast<double>(ev.size());
        EXPECT_LT(mean, previous) << "t=" << t;
        previous = mean;
    }
}

TEST(NoisyCircuit, LocalNoiseUsesPauliBasis) {
    CircuitSpec s;
    s.qubits = 3;
    s.noise = NoiseKind::local;
    s.k_max = 1;
    s.layers = 2;
    s.seed = {3, 0};
    const auto c = assemble_noisy_circuit(s);
    EXPECT_EQ(c.hilbert_dimension(), 8u);
    EXPECT_EQ(noise_basis(s).size(), 9u);
    for (const auto &layer : c.layers) {
        EXPECT_LE(std::abs(layer.lindbladian.trace() + 64.0) / 64.0, 1e-8);
    }
}
