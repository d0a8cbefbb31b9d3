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

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randpec/channel_assembly.hpp"
#include "randpec/errors.hpp"
#include "randpec/expm.hpp"
#include "randpec/linalg.hpp"
#include "randpec/superoperator.hpp"

namespace randpec {

/// Lambda_U counts as invertible when its reciprocal 1-norm condition number exceeds this.
inline constexpr double kInvertibilityThreshold = 1e-12;

struct DenoiserResult {
    Superoperator denoiser;
    /// 1-norm condition number estimate of Lambda_U.
    double condition_estimate = 1.0;
    std::vector<Superoperator> rotated;
    std::optional<Superoperator> bch_linear;
};

struct DenoiserOptions {
    bool with_bch = true;
};

/// D = U Lambda_U^{-1} from an LU factorization of Lambda_U plus one step of
/// iterative refinement on X Lambda_U = U.
inline Superoperator exact_denoiser(const NoisyCircuit &circuit, double *condition_estimate = nullptr) {
    const CMatrix &lambda = circuit.noisy.matrix();
    const CMatrix &target = circuit.target.matrix();
    const linalg::LuFactorization lu(lambda);
    const double rcond = lu.reciprocal_condition();
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (condition_estimate != nullptr) {
        *condition_estimate = cond;
    }
    if (!(rcond > kInvertibilityThreshold)) {
        throw NonInvertibleChannel(
            "noisy channel is not invertible: its spectrum reaches 0 (condition estimate " + std::to_string(cond) + ")",
            cond);
    }
    CMatrix x = lu.solve_right(target);
    const CMatrix residual = target - x * lambda;
    x += lu.solve_right(residual);
    return Superoperator(circuit.hilbert_dimension(), std::move(x), SuperoperatorKind::denoiser);
}

/// L~_i = W_i L_i W_i^dagger with W_i = U_m ... U_{i+1}, so that
/// Lambda_U = exp(t L~_m) ... exp(t L~_1) U. Index i here is 0-based (layer i+1).
inline std::vector<Superoperator> rotated_lindbladians(const NoisyCircuit &circuit) {
    const std::size_t n = circuit.hilbert_dimension();
    const auto m = circuit.layers.size();
    std::vector<std::optional<Superoperator>> slots(m);
    const auto n2 = static_cast<Eigen::Index>(n * n);
    CMatrix w = CMatrix::Identity(n2, n2);
    for (std::size_t idx = m; idx-- > 0;) {
        const CircuitLayer &layer = circuit.layers[idx];
        CMatrix rotated = w * layer.lindbladian.matrix() * w.adjoint();
        slots[idx].emplace(n, std::move(rotated), SuperoperatorKind::lindbladian);
        w = w * layer.folded.matrix();
    }
    std::vector<Superoperator> out;
    out.reserve(m);
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

inline CMatrix sum_of(std::span<const Superoperator> ops) {
    if (ops.empty()) {
        throw ValidationError("need at least one superoperator");
    }
    CMatrix sum = ops.front().matrix();
    for (std::size_t i = 1; i < ops.size(); ++i) {
        sum += ops[i].matrix();
    }
    return sum;
}

/// First-order BCH denoiser exp(-t sum_i L~_i).
inline Superoperator bch_linear_denoiser(std::span<const Superoperator> rotated, double t) {
    const CMatrix sum = sum_of(rotated);
    return Superoperator(rotated.front().hilbert_dimension(), expm(-t * sum), SuperoperatorKind::denoiser);
}

/// Second-order BCH term (t^2/2) sum_{j>k} [L~_j, L~_k] of log(exp(tL~_m)...exp(tL~_1)).
/// Diagnostic only; not part of the linear denoiser.
inline Superoperator bch_second_order_term(std::span<const Superoperator> rotated, double t) {
    if (rotated.empty()) {
        throw ValidationError("need at least one superoperator");
    }
    const Eigen::Index n2 = rotated.front().matrix().rows();
    CMatrix acc = CMatrix::Zero(n2, n2);
    CMatrix earlier = CMatrix::Zero(n2, n2);
    for (const auto &op : rotated) {
        const CMatrix &a = op.matrix();
        acc += a * earlier - earlier * a;
        earlier += a;
    }
    return Superoperator(rotated.front().hilbert_dimension(), 0.5 * t * t * acc, SuperoperatorKind::generic);
}

inline DenoiserResult compute_denoiser(const NoisyCircuit &circuit, DenoiserOptions options = {}) {
    double cond = 1.0;
    Superoperator d = exact_denoiser(circuit, &cond);
    DenoiserResult out{std::move(d), cond, {}, std::nullopt};
    if (options.with_bch) {
        out.rotated = rotated_lindbladians(circuit);
        out.bch_linear.emplace(bch_linear_denoiser(out.rotated, circuit.spec.t));
    }
    return out;
}

/// ||D Lambda_U - U||_max / ||D||_max.
inline double defining_relation_error(const Superoperator &denoiser, const NoisyCircuit &circuit) {
    const CMatrix r = denoiser.matrix() * circuit.noisy.matrix() - circuit.target.matrix();
    return max_abs(r) / max_abs(denoiser.matrix());
}

}  // namespace randpec
