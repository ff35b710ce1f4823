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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "moris/experiment.hpp"

namespace moris::cli {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Location-tagged error: "origin:line:column: message".
[[noreturn]] void fail_at(const std::string& origin, std::size_t line, std::size_t column, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
}

struct ValueError {
    std::string message;
};

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
        throw ValueError{key + ": expected a finite number, got '" + v + "'"};
    }
    return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ValueError{key + ": expected an integer, got '" + v + "'"};
    }
    return out;
}

int to_small_int(const std::string& key, const std::string& v) {
    const std::int64_t x = to_int(key, v);
    if (x < -1000000000 || x > 1000000000) throw ValueError{key + ": value out of range"};
    return static_cast<int>(x);
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const bool hex = v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X');
    const char* first = v.data() + (hex ? 2 : 0);
    const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), out, hex ? 16 : 10);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ValueError{key + ": expected an unsigned 64-bit integer, got '" + v + "'"};
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValueError{key + ": expected true or false, got '" + v + "'"};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::vector<double> to_grid(const std::string& key, const std::string& v) {
    std::vector<double> g;
    for (const std::string& item : split(v, ',')) {
        if (item.empty()) throw ValueError{key + ": empty list entry"};
        g.push_back(to_double(key, item));
    }
    return g;
}

void set_case_field(CaseSpec& c, const std::string& key, const std::string& v) {
    if (key == "p_dB") c.p_dB = to_double(key, v);
    else if (key == "rho") c.rho = to_double(key, v);
    else if (key == "kappa") c.kappa = to_double(key, v);
    else if (key == "m") c.m = to_double(key, v);
    else if (key == "perfect_csi") c.perfect_csi = to_bool(key, v);
    else if (key == "M0") c.M0 = to_small_int(key, v);
    else if (key == "N") c.N = to_small_int(key, v);
    else if (key == "M_interferer") c.M_interferer = to_small_int(key, v);
    else throw ValueError{"unknown case key '" + key + "'"};
}

// "label: key=value, key=value"
CaseSpec parse_case(const std::string& v) {
    const auto colon = v.find(':');
    if (colon == std::string::npos) throw ValueError{"case: expected 'label: key=value, ...'"};
    CaseSpec c;
    c.label = trim(std::string_view(v).substr(0, colon));
    if (c.label.empty()) throw ValueError{"case: empty label"};
    const std::string rest = trim(std::string_view(v).substr(colon + 1));
    if (rest.empty()) return c;
    for (const std::string& item : split(rest, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ValueError{"case '" + c.label + "': expected key=value, got '" + item + "'"};
        set_case_field(c, trim(std::string_view(item).substr(0, eq)), trim(std::string_view(item).substr(eq + 1)));
    }
    return c;
}

struct Builder {
    ExperimentSpec spec;
    std::set<std::string> seen;

    void set(const std::string& key, const std::string& v) {
        if (key != "case" && !seen.insert(key).second) throw ValueError{"duplicate key '" + key + "'"};
        if (key == "name") spec.name = v;
        else if (key == "sweep") spec.sweep = parse_sweep_variable(v);
        else if (key == "grid") spec.grid = to_grid(key, v);
        else if (key == "p_dB") spec.p_dB = to_double(key, v);
        else if (key == "rho") spec.rho = to_double(key, v);
        else if (key == "m") spec.m = to_double(key, v);
        else if (key == "kappa") spec.kappa = to_double(key, v);
        else if (key == "perfect_csi") spec.perfect_csi = to_bool(key, v);
        else if (key == "M0") spec.M0 = to_small_int(key, v);
        else if (key == "N") spec.N = to_small_int(key, v);
        else if (key == "M_interferer") spec.M_interferer = to_small_int(key, v);
        else if (key == "ioi_mode") {
            if (v == "uniform_fraction") spec.ioi_mode = perf::IoiMode::UniformFraction;
            else if (v == "subframe") spec.ioi_mode = perf::IoiMode::SubFrame;
            else throw ValueError{"ioi_mode: expected uniform_fraction or subframe, got '" + v + "'"};
        } else if (key == "subframe_factor") spec.subframe_factor = to_small_int(key, v);
        else if (key == "interferer_correlated") spec.interferer_correlated = to_bool(key, v);
        else if (key == "frames") spec.frames = to_int(key, v);
        else if (key == "seed") spec.seed = to_seed(key, v);
        else if (key == "outputs") {
            spec.outputs = {false, false, false};
            for (const std::string& o : split(v, ',')) {
                if (o == "bounds") spec.outputs.bounds = true;
                else if (o == "montecarlo") spec.outputs.montecarlo = true;
                else if (o == "outage") spec.outputs.outage = true;
                else throw ValueError{"outputs: unknown output '" + o + "'"};
            }
        } else if (key == "outage_threshold_db") spec.outage_threshold_db = to_double(key, v);
        else if (key == "out") spec.out = v;
        else if (key == "format") {
            if (v == "csv") spec.format = OutputFormat::csv;
            else if (v == "svg") spec.format = OutputFormat::svg;
            else if (v == "both") spec.format = OutputFormat::both;
            else throw ValueError{"format: expected csv, svg or both, got '" + v + "'"};
        } else if (key == "case") spec.cases.push_back(parse_case(v));
        else throw ValueError{"unknown key '" + key + "'"};
    }
};

ExperimentSpec finish(Builder& b, const std::string& origin) {
    if (!b.seen.count("grid")) throw ConfigError(origin + ": missing required key 'grid'");
    try {
        b.spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return b.spec;
}

ExperimentSpec parse_key_value(std::string_view text, const std::string& origin) {
    Builder b;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail_at(origin, line_no, first + 1, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) fail_at(origin, line_no, first + 1, "missing key before '='");
        const std::string value = trim(line.substr(eq + 1));
        const auto vcol = line.find_first_not_of(" \t", eq + 1);
        try {
            b.set(key, value);
        } catch (const ValueError& e) {
            fail_at(origin, line_no, (vcol == std::string_view::npos ? eq + 1 : vcol) + 1, e.message);
        } catch (const ConfigError& e) {
            fail_at(origin, line_no, (vcol == std::string_view::npos ? eq + 1 : vcol) + 1, e.what());
        }
    }
    return finish(b, origin);
}

std::string json_scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v.get<double>());
        return std::string(buf, r.ptr);
    }
    throw ValueError{"expected a scalar value"};
}

std::string json_list(const nlohmann::json& v) {
    if (!v.is_array()) return json_scalar(v);
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + json_scalar(v[i]);
    return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

ExperimentSpec parse_json(std::string_view text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        const auto at = msg.find("parse error");
        fail_at(origin, line, col, at == std::string::npos ? msg : msg.substr(at));
    }
    if (!doc.is_object()) throw ConfigError(origin + ": top-level JSON value must be an object");
    Builder b;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "cases") {
                if (!value.is_array()) throw ValueError{"cases: expected an array"};
                for (const auto& item : value) {
                    if (!item.is_object() || !item.contains("label")) {
                        throw ValueError{"cases: every entry needs an object with 'label'"};
                    }
                    CaseSpec c;
                    for (const auto& [ck, cv] : item.items()) {
                        if (ck == "label") c.label = json_scalar(cv);
                        else set_case_field(c, ck, json_scalar(cv));
                    }
                    b.spec.cases.push_back(c);
                }
            } else if (key == "grid" || key == "outputs") {
                b.set(key, json_list(value));
            } else {
                b.set(key, json_scalar(value));
            }
        }
    } catch (const ValueError& e) {
        throw ConfigError(origin + ": " + e.message);
    }
    return finish(b, origin);
}

void check_point_domain(SweepVariable v, double x, const std::string& where) {
    switch (v) {
        case SweepVariable::p_dB:
            break;
        case SweepVariable::rho:
            if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(where + ": rho must lie in [0, 1]");
            break;
        case SweepVariable::kappa:
            if (!(x >= 0.0)) throw ConfigError(where + ": kappa must be >= 0");
            break;
        case SweepVariable::m:
            if (!(x >= 0.5)) throw ConfigError(where + ": m must be >= 0.5");
            break;
        case SweepVariable::M0:
            if (!(x >= 1.0) || x != std::floor(x) || x > 1e6) throw ConfigError(where + ": M0 must be a positive integer");
            break;
    }
}

}  // namespace

std::string_view to_string(SweepVariable v) noexcept {
    switch (v) {
        case SweepVariable::p_dB: return "p_dB";
        case SweepVariable::rho: return "rho";
        case SweepVariable::kappa: return "kappa";
        case SweepVariable::m: return "m";
        case SweepVariable::M0: return "M0";
    }
    return "?";
}

SweepVariable parse_sweep_variable(std::string_view name) {
    for (SweepVariable v : {SweepVariable::p_dB, SweepVariable::rho, SweepVariable::kappa, SweepVariable::m,
                            SweepVariable::M0}) {
        if (to_string(v) == name) return v;
    }
    throw ConfigError("sweep: expected one of p_dB, rho, kappa, m, M0, got '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
    if (grid.empty()) throw ConfigError("grid: must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw ConfigError("grid: entries must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("grid: must be strictly increasing");
        check_point_domain(sweep, grid[i], "grid");
    }
    if (!std::isfinite(p_dB)) throw ConfigError("p_dB: must be finite");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho: must lie in [0, 1]");
    if (!(m >= 0.5)) throw ConfigError("m: must be >= 0.5");
    if (kappa && !(*kappa >= 0.0)) throw ConfigError("kappa: must be >= 0");
    if (kappa && perfect_csi) throw ConfigError("kappa conflicts with perfect_csi = true");
    if (M0 < 1) throw ConfigError("M0: must be >= 1");
    if (N < 0) throw ConfigError("N: must be >= 0");
    if (M_interferer && *M_interferer < 1) throw ConfigError("M_interferer: must be >= 1");
    if (ioi_mode == perf::IoiMode::SubFrame && subframe_factor < 2) {
        throw ConfigError("subframe_factor: must be >= 2 in subframe mode");
    }
    if (frames < 1) throw ConfigError("frames: must be >= 1, got " + std::to_string(frames));
    if (!outputs.bounds && !outputs.montecarlo && !outputs.outage) {
        throw ConfigError("outputs: at least one output must be requested");
    }
    if (!std::isfinite(outage_threshold_db)) throw ConfigError("outage_threshold_db: must be finite");

    std::set<std::string> labels;
    for (const CaseSpec& c : cases) {
        const std::string where = "case '" + c.label + "'";
        if (c.label.empty()) throw ConfigError("case: label must not be empty");
        if (!labels.insert(c.label).second) throw ConfigError(where + ": duplicate label");
        const bool overrides_sweep = (sweep == SweepVariable::p_dB && c.p_dB) ||
                                     (sweep == SweepVariable::rho && c.rho) ||
                                     (sweep == SweepVariable::kappa && c.kappa) ||
                                     (sweep == SweepVariable::m && c.m) || (sweep == SweepVariable::M0 && c.M0);
        if (overrides_sweep) throw ConfigError(where + ": overrides the sweep variable " + std::string(to_string(sweep)));
        if (c.rho && !(*c.rho >= 0.0 && *c.rho <= 1.0)) throw ConfigError(where + ": rho must lie in [0, 1]");
        if (c.m && !(*c.m >= 0.5)) throw ConfigError(where + ": m must be >= 0.5");
        if (c.kappa && !(*c.kappa >= 0.0)) throw ConfigError(where + ": kappa must be >= 0");
        if (c.kappa && c.perfect_csi.value_or(false)) throw ConfigError(where + ": kappa conflicts with perfect_csi = true");
        if (c.M0 && *c.M0 < 1) throw ConfigError(where + ": M0 must be >= 1");
        if (c.N && *c.N < 0) throw ConfigError(where + ": N must be >= 0");
        if (c.M_interferer && *c.M_interferer < 1) throw ConfigError(where + ": M_interferer must be >= 1");
    }
    const bool csi_everywhere = perfect_csi && std::all_of(cases.begin(), cases.end(), [](const CaseSpec& c) {
                                    return c.perfect_csi.value_or(true) && !c.kappa;
                                });
    if (sweep == SweepVariable::kappa && csi_everywhere) {
        throw ConfigError("sweep: kappa sweep conflicts with perfect_csi = true");
    }
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig3", "fig4", "fig5", "fig6"};
    return ids;
}

ExperimentSpec figure_preset(std::string_view id) {
    ExperimentSpec s;
    s.name = std::string(id);
    s.sweep = SweepVariable::p_dB;
    s.grid = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    s.N = 1;
    s.m = 1.0;
    s.rho = 0.5;
    s.out = std::string(id);
    const auto kappa_case = [](double k) {
        CaseSpec c;
        char buf[32];
        std::snprintf(buf, sizeof buf, "kappa=%g", k);
        c.label = buf;
        c.kappa = k;
        return c;
    };
    if (id == "fig3") {
        s.M0 = 100;
        s.cases = {kappa_case(1.0), kappa_case(8.0)};
    } else if (id == "fig4" || id == "fig5") {
        s.M0 = 4;
        s.kappa = 8.0;
        for (double m : {1.0, 2.0, 4.0}) {
            if (id == "fig4") {
                CaseSpec c;
                c.label = "m=" + std::to_string(static_cast<int>(m));
                c.m = m;
                s.cases.push_back(c);
            } else {
                for (double rho : {0.5, 0.0}) {
                    CaseSpec c;
                    char buf[48];
                    std::snprintf(buf, sizeof buf, "m=%g,rho=%g", m, rho);
                    c.label = buf;
                    c.m = m;
                    c.rho = rho;
                    s.cases.push_back(c);
                }
            }
        }
    } else if (id == "fig6") {
        s.sweep = SweepVariable::rho;
        s.grid = {0.0, 0.25, 0.5, 0.75, 1.0};
        s.p_dB = 10.0;
        s.M0 = 16;
        for (auto [n, k] : {std::pair{1, 8.0}, std::pair{1, 1.0}, std::pair{10, 8.0}, std::pair{10, 1.0}}) {
            CaseSpec c;
            char buf[48];
            std::snprintf(buf, sizeof buf, "N=%d,kappa=%g", n, k);
            c.label = buf;
            c.N = n;
            c.kappa = k;
            s.cases.push_back(c);
        }
    } else {
        throw ConfigError("unknown figure id '" + std::string(id) + "' (expected fig3, fig4, fig5 or fig6)");
    }
    s.validate();
    return s;
}

ExperimentSpec parse_config_text(std::string_view text, const std::string& origin) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json(text, origin);
    return parse_key_value(text, origin);
}

ExperimentSpec parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed to read config file '" + path + "'");
    return parse_config_text(buf.str(), path);
}

}  // namespace moris::cli
