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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "randpec/errors.hpp"
#include "randpec/linalg.hpp"
#include "randpec/random_ensembles.hpp"
#include "randpec/spectra.hpp"

namespace randpec {

struct SupportBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Support of the free sum of m unit-mean Marchenko-Pastur laws: m + 1 -/+ 2 sqrt(m).
inline SupportBounds kossakowski_sum_bounds(int layers) {
    if (layers < 1) {
        throw ValidationError("kossakowski_sum_bounds needs m >= 1");
    }
    const double m = static_cast<double>(layers);
    return SupportBounds{m + 1.0 - 2.0 * std::sqrt(m), m + 1.0 + 2.0 * std::sqrt(m)};
}

/// Eigenvalues (ascending) of sum_{i<m} K_i (N^2 - 1)/N for each requested m, with
/// K_i = sample_global_kossakowski(N, seed.substream(i)); each rescaled term has unit
/// mean eigenvalue. Samples are shared, so the sum for m extends the sum for m' < m.
inline std::vector<RVector> rescaled_kossakowski_sum_spectra(std::size_t n, std::span<const int> layers,
                                                             RngSeed seed) {
    int max_m = 0;
    for (int m : layers) {
        if (m < 1) {
            throw ValidationError("need m >= 1");
        }
        max_m = std::max(max_m, m);
    }
    const double scale = static_cast<double>(n * n - 1) / static_cast<double>(n);
    std::vector<RVector> out(layers.size());
    CMatrix sum;
    for (int i = 0; i < max_m; ++i) {
        const auto k = sample_global_kossakowski(n, seed.substream(static_cast<std::uint64_t>(i)));
        if (i == 0) {
            sum = scale * k.matrix();
        } else {
            sum += scale * k.matrix();
        }
        for (std::size_t j = 0; j < layers.size(); ++j) {
            if (layers[j] == i + 1) {
                out[j] = linalg::hermitian_eigenvalues(sum);
            }
        }
    }
    return out;
}

inline RVector rescaled_kossakowski_sum_eigenvalues(std::size_t n, int layers, RngSeed seed) {
    const int m[] = {layers};
    return rescaled_kossakowski_sum_spectra(n, m, seed).front();
}

struct DecayBand {
    double lower = 0.0;
    double upper = 0.0;
    double center = 0.0;
    std::size_t population = 0;
    bool stationary = false;
};

struct BandOptions {
    /// A band boundary needs a gap larger than gap_factor * (median gap).
    double gap_factor = 30.0;
    /// Every band must hold at least this fraction of the clustered values (and at least 2).
    double min_population_fraction = 0.02;
};

struct BandSummary {
    std::vector<DecayBand> bands;

    std::size_t count() const noexcept { return bands.size(); }
    std::size_t count_excluding_stationary() const {
        return static_cast<std::size_t>(
            std::count_if(bands.begin(), bands.end(), [](const DecayBand &b) { return !b.stationary; }));
    }
};

/// Value that decay bands are read from: log|lambda| / (t m) for channels and
/// denoisers, Re(lambda) for generators.
inline double decay_coordinate(Complex z, SpectrumKind kind, double tm) {
    return kind == SpectrumKind::generator ? z.real() : std::log(std::abs(z)) / tm;
}

/// One-dimensional gap splitting of the decay coordinate. Conjugate partners
/// share a coordinate, so only Im >= 0 representatives take part in the gap
/// statistics; the stationary point is its own band. Populations count every
/// eigenvalue that falls in a band.
inline BandSummary decay_band_clusters(const SpectrumSample &spec, double t, int layers, BandOptions options = {}) {
    if (spec.size() < 2) {
        throw DegenerateInput("decay_band_clusters needs at least two eigenvalues");
    }
    const double tm = t * static_cast<double>(layers);
    if (spec.kind == SpectrumKind::channel && !(tm > 0.0)) {
        throw DegenerateInput("decay_band_clusters needs t m > 0 for channel spectra");
    }
    std::vector<double> reps;
    std::vector<double> all;
    std::size_t stationary = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec.stationary[i]) {
            ++stationary;
            continue;
        }
        const Complex z = spec.eigenvalues[i];
        const double v = decay_coordinate(z, spec.kind, tm);
        all.push_back(v);
        if (z.imag() >= -1e-8 * std::max(1.0, std::abs(z))) {
            reps.push_back(v);
        }
    }

    BandSummary out;
    if (stationary > 0) {
        const double v = 0.0;
        out.bands.push_back(DecayBand{v, v, v, stationary, true});
    }
    if (reps.empty()) {
        return out;
    }
    std::sort(reps.begin(), reps.end());
    const std::size_t n = reps.size();
    std::vector<std::size_t> cuts;  // band boundary after index i
    if (n >= 3) {
        std::vector<double> gaps(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            gaps[i] = reps[i + 1] - reps[i];
        }
        std::vector<double> sorted_gaps = gaps;
        std::nth_element(sorted_gaps.begin(), sorted_gaps.begin() + static_cast<std::ptrdiff_t>(sorted_gaps.size() / 2),
                         sorted_gaps.end());
        const double median = sorted_gaps[sorted_gaps.size() / 2];
        const auto min_pop = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::ceil(options.min_population_fraction * static_cast<double>(n))));

        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (gaps[i] > options.gap_factor * median && gaps[i] > 0.0) {
                candidates.push_back(i);
            }
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](std::size_t a, std::size_t b) { return gaps[a] > gaps[b]; });
        for (std::size_t c : candidates) {
            std::vector<std::size_t> trial = cuts;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), c), c);
            bool ok = true;
            std::size_t start = 0;
            for (std::size_t k = 0; k <= trial.size() && ok; ++k) {
                const std::size_t end = k < trial.size() ? trial[k] + 1 : n;
                ok = end - start >= min_pop;
                start = end;
            }
            if (ok) {
                cuts = std::move(trial);
            }
        }
    }

    std::size_t start = 0;
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
        const std::size_t end = k < cuts.size() ? cuts[k] + 1 : n;
        DecayBand band;
        band.lower = reps[start];
        band.upper = reps[end - 1];
        double sum = 0.0;
        for (double v : all) {
            // Members are the values between this band's edges, extended to the midpoints of the gaps.
            const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : 0.5 * (reps[start - 1] + reps[start]);
            const double hi =
                k == cuts.size() ? std::numeric_limits<double>::infinity() : 0.5 * (reps[end - 1] + reps[end]);
            if (v > lo && v <= hi) {
                ++band.population;
                sum += v;
            }
        }
        band.center = band.population > 0 ? sum / static_cast<double>(band.population) : 0.5 * (band.lower + band.upper);
        out.bands.push_back(band);
        start = end;
    }
    return out;
}

}  // namespace randpec
