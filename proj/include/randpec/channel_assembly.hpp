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
#include <string>
#include <vector>

#include "randpec/errors.hpp"
#include "randpec/expm.hpp"
#include "randpec/lindblad_builder.hpp"
#include "randpec/operator_basis.hpp"
#include "randpec/random_ensembles.hpp"
#include "randpec/superoperator.hpp"

namespace randpec {

enum class NoiseKind { global, local };

/// How rho -> U rho U^dagger is folded into an N^2 x N^2 matrix.
///   conjugate: U (x) U^*, the exact action under row-stacking (default).
///   transpose: U (x) U^T, the literal folded form; still unitary but not the conjugation map.
enum class FoldConvention { conjugate, transpose };

inline constexpr double kUnitarityTolerance = 1e-10;

inline double unitarity_error(const CMatrix &u) {
    return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

inline CMatrix kronecker(const CMatrix &x, const CMatrix &y) {
    CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
        }
    }
    return out;
}

inline Superoperator fold_unitary(const CMatrix &u, FoldConvention convention = FoldConvention::conjugate) {
    if (u.rows() != u.cols()) {
        throw ShapeError("fold_unitary: matrix is not square");
    }
    const double err = unitarity_error(u);
    if (!(err <= kUnitarityTolerance)) {
        throw ValidationError("fold_unitary: input is not unitary (max |U^dagger U - 1| = " + std::to_string(err) +
                              ")");
    }
    const CMatrix second = convention == FoldConvention::conjugate ? CMatrix(u.conjugate()) : CMatrix(u.transpose());
    return Superoperator(static_cast<std::size_t>(u.rows()), kronecker(u, second), SuperoperatorKind::folded_unitary);
}

/// x <- (U (x) V) x for the folded unitary of `u`, without forming the N^2 x N^2 fold.
/// Column j of x, reshaped column-major to an N x N block M, maps to V M U^T.
inline void apply_fold_left(const CMatrix &u, FoldConvention convention, CMatrix &x) {
    const Eigen::Index n = u.rows();
    if (u.cols() != n || x.rows() != n * n) {
        throw ShapeError("apply_fold_left: dimension mismatch");
    }
    const CMatrix second = convention == FoldConvention::conjugate ? CMatrix(u.conjugate()) : CMatrix(u.transpose());
    const Eigen::Index blocks = x.size() / n;
    Eigen::Map<CMatrix> view(x.data(), n, blocks);
    CMatrix left(n, blocks);
    left.noalias() = second * view;
    const CMatrix ut = u.transpose();
    for (Eigen::Index j = 0; j < blocks; j += n) {
        view.middleCols(j, n).noalias() = left.middleCols(j, n) * ut;
    }
}

/// exp(t A) via Pade scaling-and-squaring.
inline Superoperator matrix_exponential(const Superoperator &a, double t) {
    if (!std::isfinite(t)) {
        throw ScalingFailure("matrix_exponential: non-finite t");
    }
    const SuperoperatorKind kind =
        a.kind() == SuperoperatorKind::lindbladian && t >= 0.0 ? SuperoperatorKind::noise_channel
                                                               : SuperoperatorKind::generic;
    return Superoperator(a.hilbert_dimension(), expm(t * a.matrix()), kind);
}

struct CircuitSpec {
    int qubits = 5;
    /// Hilbert dimension override for global noise (e.g. N = 24); 0 means 2^qubits.
    std::size_t dimension = 0;
    int layers = 2;
    double t = 0.1;
    NoiseKind noise = NoiseKind::global;
    int k_max = 0;
    RngSeed seed{};
    FoldConvention fold = FoldConvention::conjugate;

    std::size_t hilbert_dimension() const {
        return dimension != 0 ? dimension : (std::size_t{1} << qubits);
    }

    void validate() const {
        if (layers < 1) {
            throw ValidationError("circuit needs at least one layer");
        }
        if (!(t >= 0.0 && t <= 1.0)) {
            throw ValidationError("noise time t must lie in [0, 1], got " + std::to_string(t));
        }
        if (noise == NoiseKind::local) {
            if (qubits < 1 || qubits > 12) {
                throw InvalidDimension("local noise needs 1 <= L <= 12");
            }
            if (dimension != 0 && dimension != (std::size_t{1} << qubits)) {
                throw InvalidDimension("local noise needs N = 2^L");
            }
            if (k_max < 1 || k_max > qubits) {
                throw InvalidLocality("k_max must satisfy 1 <= k_max <= L");
            }
        } else {
            if (dimension == 0 && (qubits < 1 || qubits > 12)) {
                throw InvalidDimension("global noise needs 1 <= L <= 12");
            }
            if (hilbert_dimension() < 2) {
                throw InvalidDimension("global noise needs N >= 2");
            }
        }
    }
};

struct CircuitLayer {
    CMatrix unitary;
    Superoperator folded;
    Superoperator lindbladian;
    Superoperator channel;
};

/// Lambda_U = N_m U_m ... N_1 U_1 together with its layers and the target U = U_m ... U_1.
struct NoisyCircuit {
    CircuitSpec spec;
    std::vector<CircuitLayer> layers;
    Superoperator noisy;
    Superoperator target;

    std::size_t hilbert_dimension() const { return noisy.hilbert_dimension(); }
};

inline RngSeed layer_unitary_seed(const RngSeed &root, int layer) {
    return root.substream(2 * static_cast<std::uint64_t>(layer));
}
inline RngSeed layer_noise_seed(const RngSeed &root, int layer) {
    return root.substream(2 * static_cast<std::uint64_t>(layer) + 1);
}

inline OperatorBasis noise_basis(const CircuitSpec &spec) {
    return spec.noise == NoiseKind::local ? build_pauli_basis(spec.qubits, spec.k_max)
                                          : build_gell_mann_basis(spec.hilbert_dimension());
}

inline KossakowskiMatrix sample_kossakowski(const CircuitSpec &spec, const OperatorBasis &basis, RngSeed seed) {
    const std::size_t n = spec.hilbert_dimension();
    return spec.noise == NoiseKind::local ? sample_local_kossakowski(basis.size(), static_cast<double>(n), seed)
                                          : sample_global_kossakowski(n, seed);
}

namespace detail {

/// Multiplies the per-layer factors into Lambda_U and U.
inline NoisyCircuit compose_circuit(const CircuitSpec &spec, std::vector<CircuitLayer> layers) {
    const std::size_t n = spec.hilbert_dimension();
    CMatrix noisy;
    CMatrix unitary;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const CircuitLayer &layer = layers[i];
        if (i == 0) {
            noisy = layer.channel.matrix() * layer.folded.matrix();
            unitary = layer.unitary;
        } else {
            apply_fold_left(layer.unitary, spec.fold, noisy);
            noisy = layer.channel.matrix() * noisy;
            unitary = layer.unitary * unitary;
        }
    }
    Superoperator target = fold_unitary(unitary, spec.fold);
    return NoisyCircuit{spec, std::move(layers), Superoperator(n, std::move(noisy), SuperoperatorKind::noisy_circuit),
                        std::move(target)};
}

}  // namespace detail

inline NoisyCircuit assemble_noisy_circuit(const CircuitSpec &spec) {
    spec.validate();
    const std::size_t n = spec.hilbert_dimension();
    const OperatorBasis basis = noise_basis(spec);

    std::vector<CircuitLayer> layers;
    layers.reserve(static_cast<std::size_t>(spec.layers));
    for (int i = 0; i < spec.layers; ++i) {
        CMatrix u = sample_haar_unitary(n, layer_unitary_seed(spec.seed, i));
        Superoperator folded = fold_unitary(u, spec.fold);
        const KossakowskiMatrix k = sample_kossakowski(spec, basis, layer_noise_seed(spec.seed, i));
        Superoperator lindbladian = build_lindbladian(k, basis);
        Superoperator channel = matrix_exponential(lindbladian, spec.t);
        layers.push_back(CircuitLayer{std::move(u), std::move(folded), std::move(lindbladian), std::move(channel)});
    }
    return detail::compose_circuit(spec, std::move(layers));
}

/// The same sampled unitaries and Lindbladians with the noise time replaced by t.
inline NoisyCircuit with_noise_time(const NoisyCircuit &circuit, double t) {
    CircuitSpec spec = circuit.spec;
    spec.t = t;
    spec.validate();
    std::vector<CircuitLayer> layers = circuit.layers;
    for (auto &layer : layers) {
        layer.channel = matrix_exponential(layer.lindbladian, t);
    }
    return detail::compose_circuit(spec, std::move(layers));
}

/// The circuit made of the first `layers` layers. Layers draw from independent
/// substreams, so this equals assembling the same spec with fewer layers.
inline NoisyCircuit leading_layers(const NoisyCircuit &circuit, int layers) {
    if (layers < 1 || static_cast<std::size_t>(layers) > circuit.layers.size()) {
        throw ValidationError("leading_layers: need 1 <= m <= " + std::to_string(circuit.layers.size()));
    }
    CircuitSpec spec = circuit.spec;
    spec.layers = layers;
    return detail::compose_circuit(
        spec, std::vector<CircuitLayer>(circuit.layers.begin(), circuit.layers.begin() + layers));
}

}  // namespace randpec
