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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "randpec/errors.hpp"
#include "randpec/linalg.hpp"
#include "randpec/superoperator.hpp"

namespace randpec {

/// |lambda - stationary| at or below this marks the stationary eigenvalue.
inline constexpr double kStationaryTolerance = 1e-6;

/// Channels and denoisers keep a stationary eigenvalue at 1, generators at 0.
enum class SpectrumKind { channel, generator };

struct SpectrumParameters {
    std::size_t hilbert_dimension = 0;
    double t = 0.0;
    int layers = 0;
    int k_max = 0;
    std::uint64_t seed = 0;
};

struct SpectrumSample {
    std::vector<Complex> eigenvalues;
    std::string source;
    SpectrumKind kind = SpectrumKind::channel;
    SpectrumParameters params;
    std::vector<bool> stationary;

    std::size_t size() const noexcept { return eigenvalues.size(); }

    std::size_t stationary_count() const {
        return static_cast<std::size_t>(std::count(stationary.begin(), stationary.end(), true));
    }

    std::vector<Complex> non_stationary() const {
        std::vector<Complex> out;
        out.reserve(eigenvalues.size());
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
            if (!stationary[i]) {
                out.push_back(eigenvalues[i]);
            }
        }
        return out;
    }
};

inline Complex stationary_value(SpectrumKind kind) {
    return kind == SpectrumKind::generator ? Complex(0.0) : Complex(1.0);
}

inline std::vector<bool> stationary_flags(std::span<const Complex> values, SpectrumKind kind) {
    const Complex target = stationary_value(kind);
    std::vector<bool> flags(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        flags[i] = std::abs(values[i] - target) <= kStationaryTolerance;
    }
    return flags;
}

inline SpectrumSample make_spectrum(std::vector<Complex> values, std::string source, SpectrumKind kind,
                                    SpectrumParameters params = {}) {
    SpectrumSample s;
    s.stationary = stationary_flags(values, kind);
    s.eigenvalues = std::move(values);
    s.source = std::move(source);
    s.kind = kind;
    s.params = params;
    return s;
}

/// All N^2 eigenvalues of a superoperator, in LAPACK order.
inline SpectrumSample eigenvalues(const Superoperator &s, std::string source = {}, SpectrumParameters params = {}) {
    if (params.hilbert_dimension == 0) {
        params.hilbert_dimension = s.hilbert_dimension();
    }
    if (source.empty()) {
        source = std::string(to_string(s.kind()));
    }
    const SpectrumKind kind =
        s.kind() == SuperoperatorKind::lindbladian ? SpectrumKind::generator : SpectrumKind::channel;
    return make_spectrum(linalg::eigenvalues(s.matrix()), std::move(source), kind, params);
}

/// Largest relative residual ||S v - lambda v|| / ||S||_F over the requested
/// eigenpairs (every `stride`-th pair). Eigenvectors are unit-norm.
inline double eigenpair_residual(const Superoperator &s, std::size_t stride = 1) {
    const auto sys = linalg::eigensystem(s.matrix());
    const double norm = s.matrix().norm();
    double worst = 0.0;
    stride = std::max<std::size_t>(stride, 1);
    for (std::size_t i = 0; i < sys.values.size(); i += stride) {
        const auto v = sys.right_vectors.col(static_cast<Eigen::Index>(i));
        const double r = (s.matrix() * v - sys.values[i] * v).norm();
        worst = std::max(worst, norm > 0.0 ? r / norm : r);
    }
    return worst;
}

/// max over lambda of the distance from conj(lambda) to the nearest eigenvalue.
inline double conjugation_closure_error(std::span<const Complex> values) {
    double worst = 0.0;
    for (const Complex &z : values) {
        const Complex c = std::conj(z);
        double best = std::numeric_limits<double>::infinity();
        for (const Complex &w : values) {
            best = std::min(best, std::abs(c - w));
            if (best == 0.0) {
                break;
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

/// For each eigenvalue of `a`, the distance to the nearest eigenvalue of `b`;
/// sorted descending.
inline std::vector<double> min_distance_profile(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() || b.empty()) {
        throw DegenerateInput("min_distance_profile needs two non-empty spectra");
    }
    std::vector<double> out;
    out.reserve(a.size());
    for (const Complex &z : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex &w : b) {
            best = std::min(best, std::abs(z - w));
        }
        out.push_back(best);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// max(max profile(a, b), max profile(b, a)): a Hausdorff distance between the two sets.
inline double symmetric_max_min_distance(std::span<const Complex> a, std::span<const Complex> b) {
    return std::max(min_distance_profile(a, b).front(), min_distance_profile(b, a).front());
}

inline Complex mean_of(std::span<const Complex> values) {
    Complex acc = 0.0;
    for (const Complex &z : values) {
        acc += z;
    }
    return values.empty() ? acc : acc / static_cast<double>(values.size());
}

inline double mean_log_modulus(std::span<const Complex> values) {
    double acc = 0.0;
    for (const Complex &z : values) {
        acc += std::log(std::abs(z));
    }
    return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
}

inline double spectral_radius(std::span<const Complex> values) {
    double r = 0.0;
    for (const Complex &z : values) {
        r = std::max(r, std::abs(z));
    }
    return r;
}

}  // namespace randpec
