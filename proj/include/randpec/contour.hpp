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

// Angular contour of pooled Lindblad spectra and its image under
// g(f) = exp(-t (sqrt(m) f - m)), the predicted boundary of the denoiser spectrum.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "randpec/errors.hpp"
#include "randpec/spectra.hpp"

namespace randpec {

/// Closed contour around the shifted Lindblad cloud f = lambda + 1, ordered by angle.
struct LindbladContour {
    std::size_t hilbert_dimension = 0;
    std::vector<Complex> points;

    /// N f, the size-independent coordinates in which the universal shape lives.
    std::vector<Complex> rescaled() const {
        std::vector<Complex> out(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            out[i] = static_cast<double>(hilbert_dimension) * points[i];
        }
        return out;
    }

    double real_min() const {
        double v = std::numeric_limits<double>::infinity();
        for (const auto &p : points) v = std::min(v, p.real());
        return v;
    }
    double real_max() const {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto &p : points) v = std::max(v, p.real());
        return v;
    }
    /// Largest |Re f| on the contour: distance from the center to the farther real-axis tip.
    double real_half_extent() const { return std::max(std::abs(real_min()), std::abs(real_max())); }
    double real_diameter() const { return real_max() - real_min(); }
};

/// Pools Lindblad spectra, shifts by +1 and takes, in each of `n_angles` equal
/// angular sectors of N(lambda + 1), the point of largest modulus.
inline LindbladContour empirical_lindblad_contour(std::span<const SpectrumSample> samples, std::size_t n_angles) {
    if (n_angles < 16) {
        throw ValidationError("contour extraction needs at least 16 angular bins");
    }
    if (samples.empty()) {
        throw BinningError("contour extraction needs at least one spectrum");
    }
    const std::size_t n = samples.front().params.hilbert_dimension;
    if (n == 0) {
        throw ValidationError("spectrum sample is missing its Hilbert dimension");
    }
    std::vector<Complex> best(n_angles);
    std::vector<double> best_mod(n_angles, -1.0);
    const double scale = static_cast<double>(n);
    for (const auto &s : samples) {
        if (s.kind != SpectrumKind::generator) {
            throw ValidationError("contour extraction expects Lindblad (generator) spectra");
        }
        if (s.params.hilbert_dimension != n) {
            throw ValidationError("contour extraction expects spectra of one Hilbert dimension");
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.stationary[i]) {
                continue;
            }
            const Complex f = s.eigenvalues[i] + 1.0;
            const Complex z = scale * f;
            const double angle = std::arg(z);
            auto bin = static_cast<std::size_t>((angle + std::numbers::pi) / (2.0 * std::numbers::pi) *
                                                static_cast<double>(n_angles));
            if (bin >= n_angles) {
                bin = n_angles - 1;
            }
            const double mod = std::abs(z);
            if (mod > best_mod[bin]) {
                best_mod[bin] = mod;
                best[bin] = f;
            }
        }
    }
    for (std::size_t b = 0; b < n_angles; ++b) {
        if (best_mod[b] < 0.0) {
            throw BinningError("angular bin " + std::to_string(b) + " of " + std::to_string(n_angles) +
                               " is empty; pool more spectra or use fewer bins");
        }
    }
    return LindbladContour{n, std::move(best)};
}

inline Complex denoiser_contour_map(Complex f, double t, int layers) {
    const double m = static_cast<double>(layers);
    return std::exp(-t * (std::sqrt(m) * f - m));
}

struct ContourPrediction {
    std::vector<Complex> base;
    std::vector<Complex> mapped;
    double t = 0.0;
    int layers = 0;
    /// exp(t m), the image of the base center 0.
    double predicted_center = 1.0;
};

inline ContourPrediction predict_denoiser_contour(std::span<const Complex> base, double t, int layers) {
    if (layers < 1) {
        throw ValidationError("contour prediction needs m >= 1");
    }
    ContourPrediction p;
    p.base.assign(base.begin(), base.end());
    p.mapped.reserve(base.size());
    for (const Complex &f : base) {
        p.mapped.push_back(denoiser_contour_map(f, t, layers));
    }
    p.t = t;
    p.layers = layers;
    p.predicted_center = std::exp(t * static_cast<double>(layers));
    return p;
}

/// Vertex average.
inline Complex polygon_centroid(std::span<const Complex> polygon) { return mean_of(polygon); }

inline std::vector<Complex> dilate_polygon(std::span<const Complex> polygon, double factor, Complex center) {
    std::vector<Complex> out;
    out.reserve(polygon.size());
    for (const Complex &p : polygon) {
        out.push_back(center + factor * (p - center));
    }
    return out;
}

/// Even-odd ray casting.
inline bool point_in_polygon(Complex p, std::span<const Complex> polygon) {
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Complex a = polygon[i];
        const Complex b = polygon[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = (b.real() - a.real()) * (p.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
            if (p.real() < x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

inline double fraction_inside(std::span<const Complex> points, std::span<const Complex> polygon) {
    if (points.empty()) {
        return 0.0;
    }
    std::size_t count = 0;
    for (const Complex &p : points) {
        count += point_in_polygon(p, polygon);
    }
    return static_cast<double>(count) / static_cast<double>(points.size());
}

}  // namespace randpec
