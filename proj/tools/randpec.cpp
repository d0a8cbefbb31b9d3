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

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "randpec.hpp"

namespace {

struct Overrides {
    std::optional<int> qubits;
    std::vector<std::size_t> dimensions;
    std::vector<int> layers;
    std::vector<double> times;
    std::vector<int> k_max;
    std::optional<std::string> noise;
    std::optional<int> ensemble;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::string format = "csv";
    unsigned threads = 0;
    bool allow_large = false;
    std::optional<std::size_t> angles;
    std::optional<double> gap_factor;
};

void add_run_flags(CLI::App *sub, Overrides &o) {
    sub->add_option("--L", o.qubits, "number of qubits (local noise, or N = 2^L for global noise)");
    sub->add_option("--N", o.dimensions, "Hilbert dimensions for global noise")->delimiter(',');
    sub->add_option("--m", o.layers, "numbers of layers")->delimiter(',');
    sub->add_option("--t", o.times, "noise times in [0, 1]")->delimiter(',');
    sub->add_option("--kmax", o.k_max, "noise localities (implies local noise)")->delimiter(',');
    sub->add_option("--noise", o.noise, "global or local")->check(CLI::IsMember({"global", "local"}));
    sub->add_option("--ensemble", o.ensemble, "ensemble size");
    sub->add_option("--seed", o.seed, "root seed");
    sub->add_option("--out", o.out, "output directory (default: $RANDPEC_OUT or ./out)");
    sub->add_option("--format", o.format, "spectra format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "worker threads (0 = hardware concurrency)");
    sub->add_flag("--allow-large", o.allow_large, "permit N^2 > 4096");
    sub->add_option("--angles", o.angles, "angular bins for the Lindblad contour");
    sub->add_option("--band-gap-factor", o.gap_factor, "gap / median-gap ratio that opens a decay band");
}

randpec::ExperimentConfig apply(randpec::ExperimentConfig c, const Overrides &o) {
    if (o.qubits) {
        c.qubits = *o.qubits;
        if (o.dimensions.empty() && c.noise == randpec::NoiseKind::global) {
            c.dimensions.clear();
        }
    }
    if (!o.dimensions.empty()) c.dimensions = o.dimensions;
    if (!o.layers.empty()) c.layers = o.layers;
    if (!o.times.empty()) c.times = o.times;
    if (o.noise) {
        c.noise = *o.noise == "local" ? randpec::NoiseKind::local : randpec::NoiseKind::global;
        if (c.noise == randpec::NoiseKind::global) {
            c.k_max.clear();
        }
    }
    if (!o.k_max.empty()) {
        c.k_max = o.k_max;
        c.noise = randpec::NoiseKind::local;
    }
    if (o.ensemble) c.ensemble = *o.ensemble;
    if (o.seed) c.seed = *o.seed;
    c.out_dir = randpec::resolve_output_dir(o.out, c.out_dir);
    c.format = o.format == "json" ? randpec::OutputFormat::json : randpec::OutputFormat::csv;
    c.threads = o.threads;
    c.allow_large = o.allow_large;
    if (o.angles) c.contour_angles = *o.angles;
    if (o.gap_factor) c.bands.gap_factor = *o.gap_factor;
    return c;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Spectra of random noisy circuits and their denoisers"};
    app.require_subcommand(1);

    bool list_json = false;
    auto *list = app.add_subcommand("list", "print the experiment catalog");
    list->add_flag("--json", list_json, "machine-readable catalog");

    Overrides overrides;
    std::map<CLI::App *, randpec::ExperimentConfig> runs;
    for (const auto &entry : randpec::experiment_catalog()) {
        auto *sub = app.add_subcommand(entry.name, entry.description);
        add_run_flags(sub, overrides);
        runs.emplace(sub, entry.defaults);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    if (list->parsed()) {
        if (list_json) {
            std::cout << randpec::list_experiments_json().dump(2) << '\n';
        } else {
            std::cout << randpec::list_experiments_text();
        }
        return 0;
    }

    for (auto &[sub, defaults] : runs) {
        if (!sub->parsed()) {
            continue;
        }
        randpec::ExperimentConfig config;
        try {
            config = apply(defaults, overrides);
            config.validate();
        } catch (const randpec::Error &e) {
            std::cerr << "usage error: " << e.what() << '\n';
            return 2;
        }
        try {
            const auto result = randpec::compute_experiment(config);
            const auto files = randpec::write_experiment(result, config);
            if (!result.ok) {
                std::cerr << "numerical failure: " << result.error << "\n(partial outputs in "
                          << files.summary.parent_path().string() << ", status \"failed\")\n";
                return 1;
            }
            std::cout << files.spectra.string() << '\n' << files.summary.string() << '\n';
            return 0;
        } catch (const randpec::UsageError &e) {
            std::cerr << "usage error: " << e.what() << '\n';
            return 2;
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 2;
}
