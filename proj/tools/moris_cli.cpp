// SPDX-License-Identifier: Apache-2.0
//
// moris - analysis and simulation of multi-operator RIS links
// Copyright (C) 2026 The moris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "moris/channel.hpp"
#include "moris/emit.hpp"
#include "moris/error.hpp"
#include "moris/experiment.hpp"
#include "moris/mcsim.hpp"
#include "moris/perf.hpp"

namespace {

using namespace moris;

enum ExitCode { kOk = 0, kOther = 1, kUsage = 2, kNumeric = 3, kIo = 4 };

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::config: return kUsage;
        case ErrorCategory::io: return kIo;
        case ErrorCategory::domain:
        case ErrorCategory::convergence:
        case ErrorCategory::degenerate: return kNumeric;
    }
    return kOther;
}

// Link parameters shared by the single-point subcommands.
struct LinkArgs {
    int M0 = 16;
    double rho = 0.5;
    double m = 1.0;
    std::optional<double> kappa;
    bool perfect_csi = false;
    int N = 1;
    std::optional<int> M_interferer;
    std::string ioi_mode = "uniform_fraction";
    int subframe_factor = 2;
    bool independent_interferers = false;
    double p_db = 10.0;

    void add_to(CLI::App* app, bool with_power) {
        app->add_option("--M0", M0, "Reference RIS elements")->check(CLI::PositiveNumber);
        app->add_option("--rho", rho, "Power correlation coefficient")->check(CLI::Range(0.0, 1.0));
        app->add_option("--m", m, "Nakagami shape of both hops")->check(CLI::Range(0.5, 1e6));
        auto* k = app->add_option("--kappa", kappa, "von Mises concentration of the phase error (default 8)");
        auto* pc = app->add_flag("--perfect-csi", perfect_csi, "No phase error");
        k->excludes(pc);
        app->add_option("--N", N, "Number of interfering operators")->check(CLI::NonNegativeNumber);
        app->add_option("--M-interferer", M_interferer, "Elements per interfering RIS (default M0)");
        app->add_option("--ioi-mode", ioi_mode, "uniform_fraction or subframe")
            ->check(CLI::IsMember({"uniform_fraction", "subframe"}));
        app->add_option("--subframe-factor", subframe_factor, "c_i for subframe mode")->check(CLI::Range(2, 1000000));
        app->add_flag("--independent-interferers", independent_interferers,
                      "Draw interferer amplitudes without spatial correlation");
        if (with_power) app->add_option("--p-db", p_db, "Transmit SNR in dB");
    }

    [[nodiscard]] channel::FadingParams fading() const {
        channel::FadingParams f;
        f.m_h_shape = f.m_g_shape = m;
        if (!perfect_csi) f.phase_error = channel::VonMises{kappa.value_or(cli::kDefaultKappa)};
        return f;
    }

    [[nodiscard]] perf::InterferenceProfile profile() const {
        perf::InterferenceProfile p;
        p.mode = ioi_mode == "subframe" ? perf::IoiMode::SubFrame : perf::IoiMode::UniformFraction;
        for (int i = 0; i < N; ++i) {
            perf::Interferer it;
            it.m_elements = M_interferer.value_or(M0);
            if (p.mode == perf::IoiMode::SubFrame) it.subframe_factor = subframe_factor;
            p.interferers.push_back(it);
        }
        return p;
    }

    [[nodiscard]] channel::MomentSummary summary() const {
        return channel::summarize(channel::RisGeometry::near_square(M0), rho, fading());
    }

    [[nodiscard]] perf::SnrModel model() const {
        return perf::SnrModel::from_db(p_db, channel::gamma_fit(summary()), perf::sigma_squared(profile()));
    }

    [[nodiscard]] mcsim::SimConfig sim(std::int64_t frames, std::uint64_t seed) const {
        mcsim::SimConfig c;
        c.geometry = channel::RisGeometry::near_square(M0);
        c.rho = rho;
        c.fading = fading();
        c.interference = profile();
        c.interferer_correlated = !independent_interferers;
        c.p = perf::db_to_linear(p_db);
        c.frames = frames;
        c.seed = seed;
        return c;
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<double> linspace_db(double lo, double hi, int points) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
    return g;
}

void write_outputs(const cli::ResultTable& table, const std::string& prefix, const std::string& format) {
    if (format == "csv" || format == "both") {
        cli::emit_csv(table, prefix + ".csv");
        std::cerr << "wrote " << prefix << ".csv\n";
    }
    if (format == "svg" || format == "both") {
        cli::emit_svg_plot(table, prefix + ".svg");
        std::cerr << "wrote " << prefix << ".svg\n";
    }
}

int run_spec(cli::ExperimentSpec spec, const std::string& out, const std::string& format, int workers) {
    const std::string prefix = out.empty() ? (spec.out.empty() ? spec.name : spec.out) : out;
    cli::RunOptions opts;
    opts.workers = workers;
    opts.on_row = [](const cli::ResultRow& r) {
        std::cerr << "  " << r.case_label << "  x=" << num(r.sweep_value) << "  C_mc=" << num(r.c_montecarlo)
                  << "\n";
    };
    try {
        const cli::ResultTable table = cli::run_experiment(spec, opts);
        write_outputs(table, prefix, format);
    } catch (const cli::ExperimentFailure& e) {
        if (!e.partial().rows.empty()) {
            cli::emit_csv(e.partial(), prefix + ".partial.csv");
            std::cerr << "wrote partial results to " << prefix << ".partial.csv\n";
        }
        throw;
    }
    return kOk;
}

std::string format_name(cli::OutputFormat f) {
    switch (f) {
        case cli::OutputFormat::csv: return "csv";
        case cli::OutputFormat::svg: return "svg";
        case cli::OutputFormat::both: return "both";
    }
    return "csv";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moris: analytic bounds and Monte-Carlo simulation of multi-operator RIS links"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "moris 0.1.0");

    std::uint64_t seed = 0xC0FFEE;
    std::int64_t frames = 10000;
    std::string out;
    std::string format;
    int workers = 0;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "RNG seed (default 0xC0FFEE)");
        sub->add_option("--frames", frames, "Monte-Carlo frames")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "Output path prefix");
        sub->add_option("--format", format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
        sub->add_option("--workers", workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };

    LinkArgs link;

    auto* moments = app.add_subcommand("moments", "Moments of the aligned gain and its Gamma fit");
    link.add_to(moments, false);

    auto* cdf = app.add_subcommand("cdf", "SNR CDF on a dB grid, optionally with the empirical CDF");
    link.add_to(cdf, true);
    add_common(cdf);
    double cdf_lo = -10.0, cdf_hi = 40.0;
    int cdf_points = 26;
    bool cdf_mc = false;
    cdf->add_option("--from-db", cdf_lo, "First SNR threshold (dB)");
    cdf->add_option("--to-db", cdf_hi, "Last SNR threshold (dB)");
    cdf->add_option("--points", cdf_points, "Grid points")->check(CLI::PositiveNumber);
    cdf->add_flag("--montecarlo", cdf_mc, "Add the empirical CDF column");

    auto* capacity = app.add_subcommand("capacity", "Spectral-efficiency bounds and asymptotic SNR");
    link.add_to(capacity, true);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo spectral efficiency");
    link.add_to(simulate, true);
    add_common(simulate);

    auto* figure = app.add_subcommand("figure", "Reproduce a figure preset (fig3, fig4, fig5, fig6)");
    std::string figure_id;
    std::vector<double> kappas;
    figure->add_option("id", figure_id, "Preset id")->required()->check(CLI::IsMember(cli::figure_ids()));
    figure->add_option("--kappa", kappas, "Override the kappa list of fig3");
    add_common(figure);

    auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
    std::string config_path;
    run->add_option("config", config_path, "key = value or JSON config file")->required();
    add_common(run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (moments->parsed()) {
            const auto s = link.summary();
            const auto fit = channel::gamma_fit(s);
            std::cout << "M0," << link.M0 << "\ntheta_bar," << num(s.theta_bar) << "\nmean_x," << num(s.mean_x)
                      << "\nsecond_moment_x," << num(s.second_moment_x) << "\nvar_x," << num(s.var_x)
                      << "\ntrace_product," << num(s.trace_product) << "\nalpha," << num(fit.alpha) << "\nbeta,"
                      << num(fit.beta) << "\n";
            return kOk;
        }
        if (cdf->parsed()) {
            const perf::SnrModel model = link.model();
            const std::vector<double> grid_db = linspace_db(cdf_lo, cdf_hi, cdf_points);
            std::vector<double> grid;
            for (double g : grid_db) grid.push_back(perf::db_to_linear(g));
            std::vector<double> emp;
            if (cdf_mc) {
                mcsim::EstimateOptions eo;
                eo.workers = workers;
                emp = mcsim::empirical_cdf(link.sim(frames, seed), grid, eo);
            }
            std::cout << "gamma_db,cdf" << (cdf_mc ? ",empirical" : "") << ",path\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto r = perf::snr_cdf_detailed(grid[i], model);
                std::cout << num(grid_db[i]) << ',' << num(r.probability);
                if (cdf_mc) std::cout << ',' << num(emp[i]);
                std::cout << ',' << (r.path == perf::CdfPath::NoInterference ? "no_interference" : "marcum") << "\n";
            }
            return kOk;
        }
        if (capacity->parsed()) {
            const auto s = link.summary();
            const perf::SnrModel model = link.model();
            std::cout << "C_lower," << num(perf::capacity_lower(model)) << "\nC_lower_closed_form,"
                      << num(perf::capacity_lower(model, perf::LogGainMethod::ClosedForm)) << "\nC_upper,"
                      << num(perf::capacity_upper(model)) << "\nsigma2," << num(model.sigma2) << "\nasymptotic_snr,"
                      << num(perf::asymptotic_snr_db(link.M0, s.theta_bar, s.trace_product, link.p_db)) << "\n";
            return kOk;
        }
        if (simulate->parsed()) {
            mcsim::EstimateOptions eo;
            eo.workers = workers;
            const auto r = mcsim::estimate_spectral_efficiency(link.sim(frames, seed), eo);
            std::cout << "C_montecarlo," << num(r.mean) << "\nmc_std_error," << num(r.std_error) << "\nframes,"
                      << r.n << "\n";
            return kOk;
        }
        if (figure->parsed()) {
            cli::ExperimentSpec spec = cli::figure_preset(figure_id);
            spec.seed = seed;
            spec.frames = frames;
            if (!kappas.empty()) {
                if (figure_id != "fig3") throw ConfigError("--kappa overrides only apply to fig3");
                spec.cases.clear();
                for (double k : kappas) {
                    cli::CaseSpec c;
                    c.label = "kappa=" + num(k);
                    c.kappa = k;
                    spec.cases.push_back(c);
                }
                spec.validate();
            }
            return run_spec(spec, out, format.empty() ? "csv" : format, workers);
        }
        if (run->parsed()) {
            cli::ExperimentSpec spec = cli::parse_config(config_path);
            if (run->count("--seed")) spec.seed = seed;
            if (run->count("--frames")) spec.frames = frames;
            return run_spec(spec, out, format.empty() ? format_name(spec.format) : format, workers);
        }
    } catch (const moris::Error& e) {
        std::cerr << "error [" << to_string(e.category()) << "]: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kOther;
}
