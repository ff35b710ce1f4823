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

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "moris/channel.hpp"
#include "moris/experiment.hpp"
#include "moris/mcsim.hpp"
#include "moris/perf.hpp"

namespace moris::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<CaseSpec> effective_cases(const ExperimentSpec& spec) {
    if (!spec.cases.empty()) return spec.cases;
    CaseSpec c;
    c.label = spec.name;
    return {c};
}

}  // namespace

PointParams resolve_point(const ExperimentSpec& spec, const CaseSpec& c, double x) {
    PointParams p;
    p.p_dB = c.p_dB.value_or(spec.p_dB);
    p.rho = c.rho.value_or(spec.rho);
    p.m = c.m.value_or(spec.m);
    p.M0 = c.M0.value_or(spec.M0);
    p.N = c.N.value_or(spec.N);
    p.ioi_mode = spec.ioi_mode;
    p.subframe_factor = spec.subframe_factor;
    p.interferer_correlated = spec.interferer_correlated;
    p.frames = spec.frames;
    p.seed = spec.seed;

    const bool perfect = c.perfect_csi.value_or(c.kappa ? false : spec.perfect_csi);
    if (!perfect) p.kappa = c.kappa ? c.kappa : (spec.kappa ? spec.kappa : std::optional<double>(kDefaultKappa));

    switch (spec.sweep) {
        case SweepVariable::p_dB: p.p_dB = x; break;
        case SweepVariable::rho: p.rho = x; break;
        case SweepVariable::kappa: p.kappa = x; break;
        case SweepVariable::m: p.m = x; break;
        case SweepVariable::M0: p.M0 = static_cast<int>(x); break;
    }
    p.M_interferer = c.M_interferer.value_or(spec.M_interferer.value_or(p.M0));
    return p;
}

mcsim::SimConfig sim_config(const PointParams& pp) {
    mcsim::SimConfig cfg;
    cfg.geometry = channel::RisGeometry::near_square(pp.M0);
    cfg.rho = pp.rho;
    cfg.fading.m_h_shape = pp.m;
    cfg.fading.m_g_shape = pp.m;
    if (pp.kappa) cfg.fading.phase_error = channel::VonMises{*pp.kappa};
    cfg.interference.mode = pp.ioi_mode;
    for (int i = 0; i < pp.N; ++i) {
        perf::Interferer it;
        it.m_elements = pp.M_interferer;
        if (pp.ioi_mode == perf::IoiMode::SubFrame) it.subframe_factor = pp.subframe_factor;
        cfg.interference.interferers.push_back(it);
    }
    cfg.interferer_correlated = pp.interferer_correlated;
    cfg.p = perf::db_to_linear(pp.p_dB);
    cfg.frames = pp.frames;
    cfg.seed = pp.seed;
    return cfg;
}

perf::SnrModel snr_model(const mcsim::SimConfig& cfg) {
    const channel::MomentSummary summary = channel::summarize(cfg.geometry, cfg.rho, cfg.fading);
    return {cfg.p, channel::gamma_fit(summary), perf::sigma_squared(cfg.interference)};
}

ResultRow evaluate_point(const ExperimentSpec& spec, const CaseSpec& c, double x, int mc_workers) {
    const PointParams pp = resolve_point(spec, c, x);
    const mcsim::SimConfig cfg = sim_config(pp);

    ResultRow row;
    row.case_label = c.label;
    row.sweep_value = x;
    row.c_lower = row.c_upper = row.c_montecarlo = row.mc_std_error = row.outage = kNaN;

    const channel::MomentSummary summary = channel::summarize(cfg.geometry, cfg.rho, cfg.fading);
    row.asymptotic_snr = perf::asymptotic_snr_db(pp.M0, summary.theta_bar, summary.trace_product, pp.p_dB);

    if (spec.outputs.bounds || spec.outputs.outage) {
        const perf::SnrModel model =
            perf::SnrModel::from_db(pp.p_dB, channel::gamma_fit(summary), perf::sigma_squared(cfg.interference));
        if (spec.outputs.bounds) {
            row.c_lower = perf::capacity_lower(model);
            row.c_upper = perf::capacity_upper(model);
        }
        if (spec.outputs.outage) {
            row.outage = perf::outage_probability(perf::db_to_linear(spec.outage_threshold_db), model);
        }
    }
    if (spec.outputs.montecarlo) {
        mcsim::EstimateOptions opts;
        opts.workers = mc_workers;
        const mcsim::EstimatorResult r = mcsim::estimate_spectral_efficiency(cfg, opts);
        row.c_montecarlo = r.mean;
        row.mc_std_error = r.std_error;
    }
    return row;
}

ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
    spec.validate();
    const std::vector<CaseSpec> cases = effective_cases(spec);
    struct Task {
        std::size_t case_index;
        double x;
    };
    std::vector<Task> tasks;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        for (double x : spec.grid) tasks.push_back({ci, x});
    }

    const std::size_t n = tasks.size();
    std::vector<ResultRow> rows(n);
    std::vector<char> done(n, 0);
    std::size_t flushed = 0;
    std::size_t first_failure = n;
    std::exception_ptr error;
    std::mutex mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    const auto worker = [&] {
        for (;;) {
            if (stop.load()) return;
            const std::size_t t = next.fetch_add(1);
            if (t >= n) return;
            try {
                ResultRow row = evaluate_point(spec, cases[tasks[t].case_index], tasks[t].x, 1);
                std::lock_guard lock(mutex);
                rows[t] = std::move(row);
                done[t] = 1;
                while (flushed < n && done[flushed] && flushed < first_failure) {
                    if (options.on_row) options.on_row(rows[flushed]);
                    ++flushed;
                }
            } catch (...) {
                std::lock_guard lock(mutex);
                if (t < first_failure) {
                    first_failure = t;
                    error = std::current_exception();
                }
                stop = true;
                return;
            }
        }
    };

    int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ResultTable table;
    table.sweep_name = std::string(to_string(spec.sweep));
    if (error) {
        for (std::size_t i = 0; i < first_failure && done[i]; ++i) table.rows.push_back(rows[i]);
        try {
            std::rethrow_exception(error);
        } catch (const Error& e) {
            throw ExperimentFailure(e.category(), e.what(), std::move(table));
        } catch (const std::exception& e) {
            throw ExperimentFailure(ErrorCategory::convergence, e.what(), std::move(table));
        }
    }
    table.rows = std::move(rows);
    return table;
}

}  // namespace moris::cli
