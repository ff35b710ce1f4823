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

#ifndef MORIS_EXPERIMENT_HPP
#define MORIS_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moris/error.hpp"
#include "moris/mcsim.hpp"
#include "moris/perf.hpp"

namespace moris::cli {

enum class SweepVariable { p_dB, rho, kappa, m, M0 };

[[nodiscard]] std::string_view to_string(SweepVariable v) noexcept;
/// Throws ConfigError for names outside {p_dB, rho, kappa, m, M0}.
[[nodiscard]] SweepVariable parse_sweep_variable(std::string_view name);

enum class OutputFormat { csv, svg, both };

/// Named override bundle; one table series per case.
struct CaseSpec {
    std::string label;
    std::optional<double> p_dB;
    std::optional<double> rho;
    std::optional<double> kappa;
    std::optional<double> m;
    std::optional<bool> perfect_csi;
    std::optional<int> M0;
    std::optional<int> N;
    std::optional<int> M_interferer;
};

struct Outputs {
    bool bounds = true;
    bool montecarlo = true;
    bool outage = false;
};

/// One sweep over a single parameter, repeated for every case.
///
/// Unset kappa with perfect_csi = false means a von Mises phase error with
/// concentration 8. Interferers default to M0 elements each.
struct ExperimentSpec {
    std::string name = "experiment";
    SweepVariable sweep = SweepVariable::p_dB;
    std::vector<double> grid;

    double p_dB = 10.0;
    double rho = 0.5;
    double m = 1.0;
    std::optional<double> kappa;
    bool perfect_csi = false;
    int M0 = 16;
    int N = 1;
    std::optional<int> M_interferer;
    perf::IoiMode ioi_mode = perf::IoiMode::UniformFraction;
    int subframe_factor = 2;
    bool interferer_correlated = true;

    std::int64_t frames = 10000;
    std::uint64_t seed = 0xC0FFEE;
    Outputs outputs;
    double outage_threshold_db = 0.0;

    std::vector<CaseSpec> cases;  ///< empty means a single unnamed case
    std::string out;              ///< output path prefix (extension added per format)
    OutputFormat format = OutputFormat::csv;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

inline constexpr double kDefaultKappa = 8.0;

/// Preset ids accepted by figure_preset.
[[nodiscard]] const std::vector<std::string>& figure_ids();

/// Frozen parameter bundle reproducing one of the figure configurations.
[[nodiscard]] ExperimentSpec figure_preset(std::string_view id);

/// Reads a key = value file, or JSON when the first non-blank character is
/// '{'. Parse errors carry line and column; unknown keys are rejected.
[[nodiscard]] ExperimentSpec parse_config(const std::string& path);
[[nodiscard]] ExperimentSpec parse_config_text(std::string_view text, const std::string& origin = "<text>");

struct ResultRow {
    std::string case_label;
    double sweep_value = 0.0;
    double c_lower = 0.0;
    double c_upper = 0.0;
    double c_montecarlo = 0.0;
    double mc_std_error = 0.0;
    double outage = 0.0;
    double asymptotic_snr = 0.0;
};

struct ResultTable {
    std::string sweep_name;
    std::vector<ResultRow> rows;
};

/// Parameters of a single sweep point after case overrides.
struct PointParams {
    double p_dB = 0.0;
    double rho = 0.0;
    double m = 1.0;
    std::optional<double> kappa;  ///< empty means perfect CSI
    int M0 = 1;
    int N = 0;
    int M_interferer = 1;
    perf::IoiMode ioi_mode = perf::IoiMode::UniformFraction;
    int subframe_factor = 2;
    bool interferer_correlated = true;
    std::int64_t frames = 1;
    std::uint64_t seed = 0;
};

[[nodiscard]] PointParams resolve_point(const ExperimentSpec& spec, const CaseSpec& c, double sweep_value);

/// Simulator configuration of a resolved point (square-ish arrays, one
/// identical interferer per N).
[[nodiscard]] mcsim::SimConfig sim_config(const PointParams& point);

/// Moment-matched analytic model of the link a simulator configuration describes.
[[nodiscard]] perf::SnrModel snr_model(const mcsim::SimConfig& config);

/// Analytic and simulated measures of one point; entries that were not
/// requested are NaN.
[[nodiscard]] ResultRow evaluate_point(const ExperimentSpec& spec, const CaseSpec& c, double sweep_value,
                                       int mc_workers = 1);

struct RunOptions {
    int workers = 0;  ///< sweep points evaluated concurrently; 0 = hardware concurrency
    /// Called in table order as soon as each row and all rows before it are done.
    std::function<void(const ResultRow&)> on_row;
};

/// Thrown by run_experiment when a point fails; carries the rows completed
/// (in table order) before the failing point.
class ExperimentFailure : public Error {
public:
    ExperimentFailure(ErrorCategory category, const std::string& what, ResultTable partial)
        : Error(category, what), partial_(std::move(partial)) {}
    [[nodiscard]] const ResultTable& partial() const noexcept { return partial_; }

private:
    ResultTable partial_;
};

[[nodiscard]] ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

}  // namespace moris::cli

#endif  // MORIS_EXPERIMENT_HPP
