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

// Seeded experiment catalog and runner. A run writes
//   spectra.csv  (run_id, source, re, im, is_stationary) or spectra.json,
//   summary.json (schema-versioned parameters and derived quantities),
//   timing.json  (wall time; kept apart so the other two files are reproducible).

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "randpec/analytics.hpp"
#include "randpec/channel_assembly.hpp"
#include "randpec/contour.hpp"
#include "randpec/denoiser.hpp"
#include "randpec/errors.hpp"
#include "randpec/spectra.hpp"

namespace randpec {

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr std::size_t kDeskScaleSuperoperatorOrder = 4096;
inline constexpr double kConjugationTolerance = 1e-8;
inline constexpr const char *kOutputDirEnv = "RANDPEC_OUT";

/// Raised for configurations that are rejected before any numerics run.
class UsageError : public Error {
   public:
    using Error::Error;
};

enum class OutputFormat { csv, json };

/// What a catalog entry computes for each (N or k_max, m, t, member).
enum class Product {
    channel_and_denoiser,
    denoiser_contour,
    bch_comparison,
    local_denoiser,
    lindblad_spectra,
    kossakowski_sum,
};

struct ExperimentConfig {
    std::string name;
    Product product = Product::denoiser_contour;
    NoiseKind noise = NoiseKind::global;
    int qubits = 5;
    /// Global noise only; empty means {2^L}.
    std::vector<std::size_t> dimensions;
    std::vector<int> layers{2};
    std::vector<double> times{0.1};
    /// Local noise only.
    std::vector<int> k_max;
    int ensemble = 1;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    OutputFormat format = OutputFormat::csv;
    /// 0 means hardware concurrency.
    unsigned threads = 0;
    bool allow_large = false;
    std::size_t contour_angles = 32;
    double contour_dilation = 1.1;
    BandOptions bands{};

    std::vector<std::size_t> resolved_dimensions() const {
        if (noise == NoiseKind::local || dimensions.empty()) {
            return {std::size_t{1} << qubits};
        }
        return dimensions;
    }

    /// One entry per group: the Hilbert dimension (global) or k_max (local).
    std::size_t group_count() const {
        return noise == NoiseKind::local ? k_max.size() : resolved_dimensions().size();
    }

    void validate() const {
        if (ensemble < 1) {
            throw UsageError("--ensemble must be >= 1");
        }
        if (layers.empty() || times.empty()) {
            throw UsageError("need at least one value of m and of t");
        }
        for (int m : layers) {
            if (m < 1) {
                throw UsageError("m must be >= 1");
            }
        }
        for (double t : times) {
            if (!(t >= 0.0 && t <= 1.0)) {
                throw UsageError("t must lie in [0, 1]");
            }
        }
        if (contour_angles < 16) {
            throw UsageError("contour needs at least 16 angular bins");
        }
        if (qubits < 1 || qubits > 12) {
            throw UsageError("L must lie in [1, 12]");
        }
        if (noise == NoiseKind::local) {
            if (k_max.empty()) {
                throw UsageError("local noise needs at least one --kmax");
            }
            for (int k : k_max) {
                if (k < 1 || k > qubits) {
                    throw UsageError("k_max must satisfy 1 <= k_max <= L");
                }
            }
        } else if (!k_max.empty()) {
            throw UsageError("--kmax applies to local noise only");
        }
        for (std::size_t n : resolved_dimensions()) {
            if (n < 2) {
                throw UsageError("N must be >= 2");
            }
            if (n * n > kDeskScaleSuperoperatorOrder && !allow_large) {
                throw UsageError("N^2 = " + std::to_string(n * n) + " exceeds " +
                                 std::to_string(kDeskScaleSuperoperatorOrder) + "; pass --allow-large to run it");
            }
        }
    }
};

struct CatalogEntry {
    std::string name;
    std::string description;
    ExperimentConfig defaults;
};

inline std::vector<CatalogEntry> experiment_catalog() {
    auto make = [](std::string name, Product product, NoiseKind noise, int qubits, std::vector<std::size_t> dims,
                   std::vector<int> m, std::vector<double> t, std::vector<int> kmax, int ensemble) {
        ExperimentConfig c;
        c.name = std::move(name);
        c.product = product;
        c.noise = noise;
        c.qubits = qubits;
        c.dimensions = std::move(dims);
        c.layers = std::move(m);
        c.times = std::move(t);
        c.k_max = std::move(kmax);
        c.ensemble = ensemble;
        return c;
    };
    using P = Product;
    using Nk = NoiseKind;
    return {
        {"fig2", "noisy channel and denoiser spectra versus t, with predicted centers exp(tm)",
         make("fig2", P::channel_and_denoiser, Nk::global, 5, {32}, {2}, {0.1, 0.2, 0.3, 0.4, 0.5}, {}, 1)},
        {"fig3", "denoiser spectra for several N with the predicted contour",
         make("fig3", P::denoiser_contour, Nk::global, 5, {8, 16, 24, 32}, {2}, {0.1}, {}, 1)},
        {"fig4", "denoiser spectra for several m with the predicted contour",
         make("fig4", P::denoiser_contour, Nk::global, 5, {32}, {2, 3, 4, 5}, {0.1}, {}, 1)},
        {"fig5-hist", "min-distance profile between exact and first-order BCH denoiser, global noise",
         make("fig5-hist", P::bch_comparison, Nk::global, 5, {32}, {2, 5}, {0.1, 0.5}, {}, 1)},
        {"fig6", "denoiser spectrum against the contour predicted from the Lindblad spectrum",
         make("fig6", P::denoiser_contour, Nk::global, 5, {32}, {10}, {0.5}, {}, 1)},
        {"fig7", "denoiser spectrum for 2-local noise with decay bands",
         make("fig7", P::local_denoiser, Nk::local, 6, {}, {2}, {0.1}, {2}, 1)},
        {"fig8-hist", "min-distance profile between exact and first-order BCH denoiser, 2-local noise",
         make("fig8-hist", P::bch_comparison, Nk::local, 5, {}, {2, 5}, {0.1, 0.5}, {2}, 1)},
        {"lindblad-spectra", "spectra of single random Lindbladians, rescaled as N(lambda + 1)",
         make("lindblad-spectra", P::lindblad_spectra, Nk::global, 5, {8, 16, 24, 32}, {1}, {0.0}, {}, 10)},
        {"local-kmax-sweep", "denoiser spectra for every locality k_max = 1..L",
         make("local-kmax-sweep", P::local_denoiser, Nk::local, 6, {}, {2}, {0.1}, {1, 2, 3, 4, 5, 6}, 1)},
        {"kossakowski-sum", "eigenvalues of sums of m rescaled Kossakowski matrices against m+1 -/+ 2 sqrt(m)",
         make("kossakowski-sum", P::kossakowski_sum, Nk::global, 5, {32}, {1, 2, 4}, {0.0}, {}, 10)},
    };
}

inline std::optional<ExperimentConfig> catalog_defaults(const std::string &name) {
    for (auto &e : experiment_catalog()) {
        if (e.name == name) {
            return e.defaults;
        }
    }
    return std::nullopt;
}

inline const char *to_string(Product p) {
    switch (p) {
        case Product::channel_and_denoiser:
            return "channel_and_denoiser";
        case Product::denoiser_contour:
            return "denoiser_contour";
        case Product::bch_comparison:
            return "bch_comparison";
        case Product::local_denoiser:
            return "local_denoiser";
        case Product::lindblad_spectra:
            return "lindblad_spectra";
        case Product::kossakowski_sum:
            return "kossakowski_sum";
    }
    return "unknown";
}

/// Shortest representation that reads back to the same double.
inline std::string format_shortest(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

/// 17 significant digits.
inline std::string format_full(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline nlohmann::json config_to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    j["experiment"] = c.name;
    j["product"] = to_string(c.product);
    j["noise"] = c.noise == NoiseKind::local ? "local" : "global";
    j["L"] = c.qubits;
    j["N"] = c.resolved_dimensions();
    j["m"] = c.layers;
    j["t"] = c.times;
    j["k_max"] = c.k_max;
    j["ensemble"] = c.ensemble;
    j["seed"] = c.seed;
    j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
    j["contour_angles"] = c.contour_angles;
    j["contour_dilation"] = c.contour_dilation;
    j["band_gap_factor"] = c.bands.gap_factor;
    j["band_min_population_fraction"] = c.bands.min_population_fraction;
    return j;
}

inline nlohmann::json list_experiments_json() {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &e : experiment_catalog()) {
        nlohmann::json j = config_to_json(e.defaults);
        j.erase("format");
        j["name"] = e.name;
        j["description"] = e.description;
        out.push_back(std::move(j));
    }
    return out;
}

inline std::string list_experiments_text() {
    std::ostringstream os;
    for (const auto &e : experiment_catalog()) {
        const auto &c = e.defaults;
        os << e.name << "  " << e.description << "\n    noise=" << (c.noise == NoiseKind::local ? "local" : "global");
        auto list = [&os](const char *key, const auto &values) {
            os << ' ' << key << '=';
            for (std::size_t i = 0; i < values.size(); ++i) {
                os << (i ? "," : "");
                if constexpr (std::is_floating_point_v<std::decay_t<decltype(values[i])>>) {
                    os << format_shortest(values[i]);
                } else {
                    os << values[i];
                }
            }
        };
        if (c.noise == NoiseKind::local) {
            os << " L=" << c.qubits;
            list("k_max", c.k_max);
        } else {
            list("N", c.resolved_dimensions());
        }
        if (c.product != Product::lindblad_spectra) {
            list("m", c.layers);
        }
        if (c.product != Product::lindblad_spectra && c.product != Product::kossakowski_sum) {
            list("t", c.times);
        }
        os << " ensemble=" << c.ensemble << "\n";
    }
    return os.str();
}

/// One emitted spectrum.
struct SpectrumRecord {
    std::string run_id;
    SpectrumSample sample;
};

struct ExperimentResult {
    std::vector<SpectrumRecord> spectra;
    nlohmann::json summary;
    double wall_seconds = 0.0;
    bool ok = true;
    std::string error;
};

namespace detail {

inline nlohmann::json complex_list(std::span<const Complex> values) {
    nlohmann::json out = nlohmann::json::array();
    for (const Complex &z : values) {
        out.push_back({z.real(), z.imag()});
    }
    return out;
}

inline nlohmann::json bands_json(const BandSummary &b) {
    nlohmann::json j;
    j["count"] = b.count();
    j["count_excluding_stationary"] = b.count_excluding_stationary();
    nlohmann::json list = nlohmann::json::array();
    for (const auto &band : b.bands) {
        list.push_back({{"lower", band.lower},
                        {"upper", band.upper},
                        {"center", band.center},
                        {"population", band.population},
                        {"stationary", band.stationary}});
    }
    j["bands"] = std::move(list);
    return j;
}

inline nlohmann::json determinant_json(std::span<const Complex> denoiser_eigs, double t, int m) {
    const double mean = mean_log_modulus(denoiser_eigs);
    const double expected = t * static_cast<double>(m);
    return {{"mean_log_modulus", mean},
            {"expected", expected},
            {"abs_error", std::abs(mean - expected)},
            {"rel_error", expected != 0.0 ? std::abs(mean - expected) / expected : std::abs(mean)}};
}

/// Count = N^2 and conjugation closure, checked before anything is written.
inline void check_spectrum(const SpectrumRecord &r) {
    const std::size_t n = r.sample.params.hilbert_dimension;
    if (r.sample.source != "kossakowski_sum" && r.sample.size() != n * n) {
        throw ValidationError(r.run_id + "/" + r.sample.source + ": expected " + std::to_string(n * n) +
                              " eigenvalues, got " + std::to_string(r.sample.size()));
    }
    const double err = conjugation_closure_error(r.sample.eigenvalues);
    if (!(err <= kConjugationTolerance)) {
        throw ValidationError(r.run_id + "/" + r.sample.source + ": spectrum is not closed under conjugation (error " +
                              format_shortest(err) + ")");
    }
}

struct MemberTask {
    std::size_t group = 0;
    int member = 0;
};

struct MemberOutput {
    std::vector<SpectrumRecord> spectra;
    std::vector<nlohmann::json> runs;
    /// Lindblad spectra pooled for the group contour.
    std::vector<SpectrumSample> lindblad;
    /// Denoiser spectra awaiting the contour check, keyed by index into `runs`.
    std::vector<std::pair<std::size_t, std::vector<Complex>>> pending_contour;
};

inline std::string group_label(const ExperimentConfig &c, std::size_t group) {
    if (c.noise == NoiseKind::local) {
        return "L" + std::to_string(c.qubits) + "_k" + std::to_string(c.k_max[group]);
    }
    return "N" + std::to_string(c.resolved_dimensions()[group]);
}

inline CircuitSpec member_spec(const ExperimentConfig &c, std::size_t group, int member, int layers, double t) {
    CircuitSpec s;
    s.noise = c.noise;
    s.qubits = c.qubits;
    s.layers = layers;
    s.t = t;
    if (c.noise == NoiseKind::local) {
        s.k_max = c.k_max[group];
    } else {
        const std::size_t n = c.resolved_dimensions()[group];
        s.dimension = n;
        int q = 0;
        while ((std::size_t{1} << q) < n) {
            ++q;
        }
        s.qubits = std::max(q, 1);
    }
    s.seed = RngSeed{c.seed, static_cast<std::uint64_t>(member)};
    return s;
}

inline nlohmann::json run_header(const ExperimentConfig &c, const CircuitSpec &s, const std::string &run_id,
                                 int member) {
    nlohmann::json j;
    j["run_id"] = run_id;
    j["N"] = s.hilbert_dimension();
    j["noise"] = c.noise == NoiseKind::local ? "local" : "global";
    if (c.noise == NoiseKind::local) {
        j["L"] = s.qubits;
        j["k_max"] = s.k_max;
    }
    j["t"] = s.t;
    j["m"] = s.layers;
    j["member"] = member;
    j["seed"] = {{"value", s.seed.value}, {"stream", s.seed.stream}};
    return j;
}

inline SpectrumParameters spectrum_params(const CircuitSpec &s) {
    return SpectrumParameters{s.hilbert_dimension(), s.t, s.layers, s.k_max, s.seed.value};
}

inline std::string run_id_for(const ExperimentConfig &c, std::size_t group, int member, int m, double t) {
    return group_label(c, group) + "_t" + format_shortest(t) + "_m" + std::to_string(m) + "_e" +
           std::to_string(member);
}

inline MemberOutput run_circuit_member(const ExperimentConfig &c, const MemberTask &task) {
    MemberOutput out;
    const int max_m = *std::max_element(c.layers.begin(), c.layers.end());
    const CircuitSpec base_spec = member_spec(c, task.group, task.member, max_m, c.times.front());
    const NoisyCircuit full = assemble_noisy_circuit(base_spec);

    if (c.product == Product::denoiser_contour) {
        const std::string prefix = group_label(c, task.group) + "_e" + std::to_string(task.member);
        for (int i = 0; i < max_m; ++i) {
            SpectrumParameters p = spectrum_params(base_spec);
            p.t = 0.0;
            p.layers = 1;
            auto s = eigenvalues(full.layers[static_cast<std::size_t>(i)].lindbladian, "lindbladian", p);
            out.spectra.push_back(SpectrumRecord{prefix + "_layer" + std::to_string(i + 1), s});
            out.lindblad.push_back(std::move(s));
        }
    }

    for (int m : c.layers) {
        const NoisyCircuit prefix = m == max_m ? full : leading_layers(full, m);
        for (double t : c.times) {
            const NoisyCircuit circuit = t == prefix.spec.t ? prefix : with_noise_time(prefix, t);
            const CircuitSpec &spec = circuit.spec;
            const std::string run_id = run_id_for(c, task.group, task.member, m, t);
            nlohmann::json run = run_header(c, spec, run_id, task.member);
            const SpectrumParameters params = spectrum_params(spec);

            DenoiserOptions opts;
            opts.with_bch = c.product == Product::bch_comparison;
            const DenoiserResult d = compute_denoiser(circuit, opts);
            const SpectrumSample dspec = eigenvalues(d.denoiser, "denoiser", params);
            run["condition_estimate"] = d.condition_estimate;
            run["predicted_center"] = std::exp(t * static_cast<double>(m));
            run["determinant_check"] = determinant_json(dspec.eigenvalues, t, m);
            run["stationary_count"] = dspec.stationary_count();

            if (c.product == Product::channel_and_denoiser) {
                SpectrumSample nspec = eigenvalues(circuit.noisy, "noisy_channel", params);
                run["noisy_spectral_radius"] = spectral_radius(nspec.eigenvalues);
                out.spectra.push_back(SpectrumRecord{run_id, std::move(nspec)});
            }
            if (c.product == Product::bch_comparison) {
                SpectrumSample lspec = eigenvalues(*d.bch_linear, "bch_linear", params);
                const auto profile = min_distance_profile(dspec.eigenvalues, lspec.eigenvalues);
                run["min_distance"] = {{"from", "denoiser"},
                                       {"to", "bch_linear"},
                                       {"max", profile.front()},
                                       {"symmetric_max",
                                        symmetric_max_min_distance(dspec.eigenvalues, lspec.eigenvalues)},
                                       {"profile", profile}};
                out.spectra.push_back(SpectrumRecord{run_id, std::move(lspec)});
            }
            if (c.product == Product::local_denoiser || c.noise == NoiseKind::local) {
                run["bands"] = bands_json(decay_band_clusters(dspec, t, m, c.bands));
            }
            if (c.product == Product::denoiser_contour) {
                out.pending_contour.emplace_back(out.runs.size(), dspec.non_stationary());
            }
            out.spectra.push_back(SpectrumRecord{run_id, dspec});
            out.runs.push_back(std::move(run));
        }
    }
    return out;
}

inline MemberOutput run_lindblad_member(const ExperimentConfig &c, const MemberTask &task) {
    MemberOutput out;
    const CircuitSpec spec = member_spec(c, task.group, task.member, 1, 0.0);
    spec.validate();
    const OperatorBasis basis = noise_basis(spec);
    const KossakowskiMatrix k = sample_kossakowski(spec, basis, layer_noise_seed(spec.seed, 0));
    const Superoperator l = build_lindbladian(k, basis);
    const std::string run_id = group_label(c, task.group) + "_e" + std::to_string(task.member);
    SpectrumParameters params = spectrum_params(spec);
    SpectrumSample s = eigenvalues(l, "lindbladian", params);

    nlohmann::json run = run_header(c, spec, run_id, task.member);
    run.erase("t");
    run.erase("m");
    const Complex mean = mean_of(s.eigenvalues);
    run["mean_eigenvalue"] = {mean.real(), mean.imag()};
    run["trace"] = {l.trace().real(), l.trace().imag()};
    if (c.noise == NoiseKind::local) {
        run["bands"] = bands_json(decay_band_clusters(s, 1.0, 1, c.bands));
    }
    out.lindblad.push_back(s);
    out.spectra.push_back(SpectrumRecord{run_id, std::move(s)});
    out.runs.push_back(std::move(run));
    return out;
}

inline MemberOutput run_kossakowski_member(const ExperimentConfig &c, const MemberTask &task) {
    MemberOutput out;
    const std::size_t n = c.resolved_dimensions()[task.group];
    const RngSeed seed{c.seed, static_cast<std::uint64_t>(task.member)};
    const auto spectra = rescaled_kossakowski_sum_spectra(n, c.layers, seed);
    for (std::size_t j = 0; j < c.layers.size(); ++j) {
        const int m = c.layers[j];
        const RVector &eig = spectra[j];
        const std::string run_id = group_label(c, task.group) + "_m" + std::to_string(m) + "_e" +
                                   std::to_string(task.member);
        std::vector<Complex> values(static_cast<std::size_t>(eig.size()));
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
            values[static_cast<std::size_t>(i)] = Complex(eig(i), 0.0);
        }
        const auto bounds = kossakowski_sum_bounds(m);
        nlohmann::json run;
        run["run_id"] = run_id;
        run["N"] = n;
        run["m"] = m;
        run["member"] = task.member;
        run["seed"] = {{"value", seed.value}, {"stream", seed.stream}};
        run["bounds"] = {bounds.lower, bounds.upper};
        run["min"] = eig.minCoeff();
        run["max"] = eig.maxCoeff();
        run["mean"] = eig.mean();
        SpectrumSample s;
        s.eigenvalues = std::move(values);
        s.source = "kossakowski_sum";
        s.kind = SpectrumKind::channel;
        s.params = SpectrumParameters{n, 0.0, m, 0, seed.value};
        s.stationary.assign(s.eigenvalues.size(), false);
        out.spectra.push_back(SpectrumRecord{run_id, std::move(s)});
        out.runs.push_back(std::move(run));
    }
    return out;
}

inline MemberOutput run_member(const ExperimentConfig &c, const MemberTask &task) {
    switch (c.product) {
        case Product::lindblad_spectra:
            return run_lindblad_member(c, task);
        case Product::kossakowski_sum:
            return run_kossakowski_member(c, task);
        default:
            return run_circuit_member(c, task);
    }
}

/// Runs tasks on `threads` workers; slot i always belongs to task i. A failed
/// task leaves its output empty and its exception in `errors[i]`.
inline std::vector<MemberOutput> run_members(const ExperimentConfig &c, const std::vector<MemberTask> &tasks,
                                             unsigned threads, std::vector<std::exception_ptr> &errors) {
    std::vector<MemberOutput> outputs(tasks.size());
    errors.assign(tasks.size(), nullptr);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                outputs[i] = run_member(c, tasks[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    return outputs;
}

inline std::string describe(const std::exception_ptr &e) {
    try {
        std::rethrow_exception(e);
    } catch (const std::exception &x) {
        return x.what();
    } catch (...) {
        return "unknown error";
    }
}

}  // namespace detail

/// Runs every (group, member) of the experiment and collects spectra and the summary
/// in deterministic order. Throws UsageError for invalid configs; numerical failures
/// are reported through ExperimentResult::ok.
inline ExperimentResult compute_experiment(const ExperimentConfig &config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.summary["schema_version"] = kSummarySchemaVersion;
    result.summary["parameters"] = config_to_json(config);

    std::vector<detail::MemberTask> tasks;
    for (std::size_t g = 0; g < config.group_count(); ++g) {
        for (int e = 0; e < config.ensemble; ++e) {
            tasks.push_back({g, e});
        }
    }
    const unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());

    std::vector<std::exception_ptr> errors;
    auto outputs = detail::run_members(config, tasks, threads, errors);
    nlohmann::json failures = nlohmann::json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (errors[i]) {
            failures.push_back({{"group", detail::group_label(config, tasks[i].group)},
                                {"member", tasks[i].member},
                                {"error", detail::describe(errors[i])}});
        }
    }
    try {

        nlohmann::json contours = nlohmann::json::array();
        const bool wants_contour =
            config.product == Product::denoiser_contour || config.product == Product::lindblad_spectra;
        if (wants_contour && config.noise == NoiseKind::global) {
            for (std::size_t g = 0; g < config.group_count(); ++g) {
                std::vector<SpectrumSample> pool;
                for (std::size_t i = 0; i < tasks.size(); ++i) {
                    if (tasks[i].group == g) {
                        for (auto &s : outputs[i].lindblad) {
                            pool.push_back(s);
                        }
                    }
                }
                nlohmann::json cj;
                cj["group"] = detail::group_label(config, g);
                cj["N"] = config.resolved_dimensions()[g];
                try {
                    const LindbladContour base = empirical_lindblad_contour(pool, config.contour_angles);
                    cj["angles"] = config.contour_angles;
                    cj["base"] = detail::complex_list(base.points);
                    cj["real_half_extent"] = base.real_half_extent();
                    cj["real_diameter"] = base.real_diameter();
                    cj["rescaled_real_half_extent"] =
                        base.real_half_extent() * static_cast<double>(base.hilbert_dimension);
                    nlohmann::json predictions = nlohmann::json::array();
                    if (config.product == Product::denoiser_contour) {
                        for (int m : config.layers) {
                            for (double t : config.times) {
                                const auto pred = predict_denoiser_contour(base.points, t, m);
                                const auto dilated = dilate_polygon(pred.mapped, config.contour_dilation,
                                                                    polygon_centroid(pred.mapped));
                                predictions.push_back({{"t", t},
                                                       {"m", m},
                                                       {"predicted_center", pred.predicted_center},
                                                       {"mapped", detail::complex_list(pred.mapped)}});
                                for (std::size_t i = 0; i < tasks.size(); ++i) {
                                    if (tasks[i].group != g) {
                                        continue;
                                    }
                                    for (auto &[run_index, values] : outputs[i].pending_contour) {
                                        auto &run = outputs[i].runs[run_index];
                                        if (run["t"].get<double>() == t && run["m"].get<int>() == m) {
                                            run["fraction_inside_dilated_contour"] = fraction_inside(values, dilated);
                                        }
                                    }
                                }
                            }
                        }
                        cj["predictions"] = std::move(predictions);
                    }
                } catch (const BinningError &e) {
                    cj["error"] = e.what();
                }
                contours.push_back(std::move(cj));
            }
        }

        nlohmann::json runs = nlohmann::json::array();
        for (auto &o : outputs) {
            for (auto &r : o.runs) {
                runs.push_back(std::move(r));
            }
            for (auto &s : o.spectra) {
                detail::check_spectrum(s);
                result.spectra.push_back(std::move(s));
            }
        }
        result.summary["runs"] = std::move(runs);
        if (!contours.empty()) {
            result.summary["contours"] = std::move(contours);
        }
    } catch (const std::exception &e) {
        failures.push_back({{"error", e.what()}});
        result.spectra.clear();
    }
    if (failures.empty()) {
        result.summary["status"] = "ok";
    } else {
        result.ok = false;
        result.error = failures.front()["error"].get<std::string>();
        result.summary["status"] = "failed";
        result.summary["failures"] = std::move(failures);
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

inline void write_spectra_csv(std::ostream &os, const std::vector<SpectrumRecord> &spectra) {
    os << "run_id,source,re,im,is_stationary\n";
    for (const auto &r : spectra) {
        for (std::size_t i = 0; i < r.sample.size(); ++i) {
            const Complex z = r.sample.eigenvalues[i];
            os << r.run_id << ',' << r.sample.source << ',' << format_full(z.real()) << ',' << format_full(z.imag())
               << ',' << (r.sample.stationary[i] ? 1 : 0) << '\n';
        }
    }
}

inline nlohmann::json spectra_json(const std::vector<SpectrumRecord> &spectra) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto &r : spectra) {
        std::vector<double> re, im;
        std::vector<bool> st(r.sample.stationary.begin(), r.sample.stationary.end());
        for (const Complex &z : r.sample.eigenvalues) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        list.push_back({{"run_id", r.run_id}, {"source", r.sample.source}, {"re", re}, {"im", im}, {"is_stationary", st}});
    }
    return {{"schema_version", kSummarySchemaVersion}, {"spectra", std::move(list)}};
}

struct WrittenFiles {
    std::filesystem::path spectra;
    std::filesystem::path summary;
    std::filesystem::path timing;
};

inline WrittenFiles write_experiment(const ExperimentResult &result, const ExperimentConfig &config) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(config.out_dir) / config.name;
    fs::create_directories(dir);
    WrittenFiles files;
    files.spectra = dir / (config.format == OutputFormat::csv ? "spectra.csv" : "spectra.json");
    files.summary = dir / "summary.json";
    files.timing = dir / "timing.json";
    {
        std::ofstream os(files.spectra, std::ios::binary);
        if (config.format == OutputFormat::csv) {
            write_spectra_csv(os, result.spectra);
        } else {
            os << spectra_json(result.spectra).dump(1) << '\n';
        }
        if (!os) {
            throw Error("cannot write " + files.spectra.string());
        }
    }
    {
        std::ofstream os(files.summary, std::ios::binary);
        os << result.summary.dump(1) << '\n';
        if (!os) {
            throw Error("cannot write " + files.summary.string());
        }
    }
    {
        std::ofstream os(files.timing, std::ios::binary);
        os << nlohmann::json{{"wall_seconds", result.wall_seconds}}.dump(1) << '\n';
    }
    return files;
}

/// compute_experiment + write_experiment. Returns 0 on success, 1 on numerical failure
/// (summary.json then carries status "failed"). UsageError propagates.
inline int run_experiment(const ExperimentConfig &config) {
    const ExperimentResult result = compute_experiment(config);
    write_experiment(result, config);
    return result.ok ? 0 : 1;
}

/// --out beats the environment variable, which beats the built-in default.
inline std::string resolve_output_dir(const std::optional<std::string> &flag, const std::string &fallback) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return fallback;
}

}  // namespace randpec
