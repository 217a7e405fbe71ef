// Copyright 2026 The qdeph Authors
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


// qdeph: simulate qubit dephasing under classical noise, reproduce the
// reference figures, run the validation suites and tabulate closed forms.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdeph/analytic.h"
#include "qdeph/app.h"
#include "qdeph/config.h"

namespace {

std::string read_text(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw qdeph::ConfigError("--config", "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Applies `--set section.key=value` entries on top of the file contents.
void apply_overrides(qdeph::KeyValues &kv, const std::vector<std::string> &sets) {
    for (const auto &s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw qdeph::ConfigError("--set", "expected section.key=value, got '" + s + "'");
        }
        kv[s.substr(0, eq)] = s.substr(eq + 1);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Qubit dephasing under classical stochastic noise"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<double> significance;

    auto *sim = app.add_subcommand("simulate", "Run one configured simulation");
    sim->add_option("--config", config_path, "Key-value config file");
    sim->add_option("--set", sets, "Override a config key: section.key=value");
    sim->add_option("--seed", seed, "Master seed");
    sim->add_option("--threads", threads, "Worker threads (does not change results)");
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_option("--format", format, "csv or json");
    sim->add_option("--significance", significance, "Revival threshold in standard errors");

    std::string figure_name;
    qdeph::FigureOptions fig_opts;
    auto *fig = app.add_subcommand("figure", "Reproduce a preconfigured figure");
    fig->add_option("name", figure_name, "Figure name: " + qdeph::figure_name_list())->required();
    fig->add_option("--seed", fig_opts.seed, "Master seed");
    fig->add_option("--threads", fig_opts.threads, "Worker threads (does not change results)");
    fig->add_option("--out", fig_opts.out_dir, "Output directory");
    fig->add_option("--format", fig_opts.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    fig->add_option("--significance", fig_opts.significance, "Revival threshold in standard errors")
        ->check(CLI::PositiveNumber);

    std::string suite = "all";
    std::uint64_t val_seed = 1;
    int val_threads = 1;
    auto *val = app.add_subcommand("validate", "Run invariant suites");
    val->add_option("suite", suite, "oracles, spectra, statistics or all");
    val->add_option("--seed", val_seed, "Master seed");
    val->add_option("--threads", val_threads, "Worker threads")->check(CLI::PositiveNumber);

    std::string formula_name;
    qdeph::TabulateRequest tab;
    double tab_gamma = 0, tab_sigma = 0, tab_kappa = 0;
    auto *tabc = app.add_subcommand("tabulate", "Print a closed-form curve");
    tabc->add_option("formula", formula_name, "d_ou, d_rtn, d_y, corr_ou, corr_rtn, corr_y_stationary, spectrum_y")
        ->required();
    auto *g_opt = tabc->add_option("--gamma", tab_gamma, "Noise rate");
    auto *s_opt = tabc->add_option("--sigma", tab_sigma, "Noise amplitude");
    auto *k_opt = tabc->add_option("--kappa", tab_kappa, "Filter rate");
    tabc->add_option("--omega0", tab.params.omega0, "Coupling");
    tabc->add_option("--from", tab.x_min, "First abscissa");
    tabc->add_option("--to", tab.x_max, "Last abscissa");
    tabc->add_option("--points", tab.points, "Number of points");
    tabc->add_option("--format", tab.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return qdeph::kExitConfig;
    }

    if (*sim) {
        qdeph::RunConfig cfg;
        try {
            qdeph::KeyValues kv;
            if (!config_path.empty()) kv = qdeph::parse_key_values(read_text(config_path));
            apply_overrides(kv, sets);
            if (seed) kv["run.seed"] = std::to_string(*seed);
            if (threads) kv["run.threads"] = std::to_string(*threads);
            if (out_dir) kv["run.output_dir"] = *out_dir;
            if (format) kv["run.format"] = *format;
            if (significance) {
                std::ostringstream os;
                os.precision(17);
                os << *significance;
                kv["run.significance"] = os.str();
            }
            cfg = qdeph::resolve_config(kv);
        } catch (const std::invalid_argument &e) {
            std::cerr << "config error: " << e.what() << '\n';
            return qdeph::kExitConfig;
        }
        return qdeph::cmd_simulate(cfg, std::cout, std::cerr);
    }
    if (*fig) {
        if (fig_opts.threads < 1) {
            std::cerr << "config error: --threads: must be >= 1\n";
            return qdeph::kExitConfig;
        }
        return qdeph::cmd_figure(figure_name, fig_opts, std::cout, std::cerr);
    }
    if (*val) return qdeph::cmd_validate(suite, val_seed, val_threads, std::cout, std::cerr);

    try {
        tab.formula = qdeph::analytic::parse_formula(formula_name);
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return qdeph::kExitConfig;
    }
    if (*g_opt) tab.params.gamma = tab_gamma;
    if (*s_opt) tab.params.sigma = tab_sigma;
    if (*k_opt) tab.params.kappa = tab_kappa;
    return qdeph::cmd_tabulate(tab, std::cout, std::cerr);
}
