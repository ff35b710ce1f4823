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

#include "moris/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "moris/error.hpp"

namespace moris::cli {
namespace {

std::string shortest(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<std::vector<std::string>> split_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (ch == ',') {
            record.push_back(field);
            field.clear();
            field_started = true;
        } else if (ch == '\r' || ch == '\n') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (field_started || !field.empty() || !record.empty()) {
                record.push_back(field);
                records.push_back(record);
            }
            record.clear();
            field.clear();
            field_started = false;
        } else {
            field += ch;
            field_started = true;
        }
    }
    if (quoted) throw ConfigError("CSV: unterminated quoted field");
    if (field_started || !field.empty() || !record.empty()) {
        record.push_back(field);
        records.push_back(record);
    }
    return records;
}

double parse_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("CSV record " + std::to_string(line) + ": invalid number '" + s + "'");
    }
    return v;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string fixed(double v, int digits = 2) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

}  // namespace

std::string format_csv(const ResultTable& table) {
    std::string out = "case," + csv_field(table.sweep_name) +
                      ",C_lower,C_upper,C_montecarlo,mc_std_error,outage,asymptotic_snr\r\n";
    for (const ResultRow& r : table.rows) {
        out += csv_field(r.case_label);
        for (double v : {r.sweep_value, r.c_lower, r.c_upper, r.c_montecarlo, r.mc_std_error, r.outage,
                         r.asymptotic_snr}) {
            out += ',' + shortest(v);
        }
        out += "\r\n";
    }
    return out;
}

void emit_csv(const ResultTable& table, const std::string& path) {
    if (table.rows.empty()) throw IoError("refusing to write empty table to '" + path + "'");
    write_file(path, format_csv(table));
}

ResultTable parse_csv_text(const std::string& text) {
    const auto records = split_records(text);
    if (records.empty()) throw ConfigError("CSV: missing header");
    const auto& header = records.front();
    if (header.size() != 8 || header[0] != "case") throw ConfigError("CSV: unexpected header");
    ResultTable table;
    table.sweep_name = header[1];
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.size() != 8) {
            throw ConfigError("CSV record " + std::to_string(i + 1) + ": expected 8 fields, got " +
                              std::to_string(rec.size()));
        }
        ResultRow r;
        r.case_label = rec[0];
        r.sweep_value = parse_number(rec[1], i + 1);
        r.c_lower = parse_number(rec[2], i + 1);
        r.c_upper = parse_number(rec[3], i + 1);
        r.c_montecarlo = parse_number(rec[4], i + 1);
        r.mc_std_error = parse_number(rec[5], i + 1);
        r.outage = parse_number(rec[6], i + 1);
        r.asymptotic_snr = parse_number(rec[7], i + 1);
        table.rows.push_back(r);
    }
    return table;
}

ResultTable parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str());
}

std::string format_svg(const ResultTable& table) {
    constexpr double W = 760, H = 480, left = 70, right = 190, top = 30, bottom = 60;
    const double pw = W - left - right;
    const double ph = H - top - bottom;

    std::vector<std::string> labels;
    for (const ResultRow& r : table.rows) {
        if (std::find(labels.begin(), labels.end(), r.case_label) == labels.end()) labels.push_back(r.case_label);
    }
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const ResultRow& r : table.rows) {
        xmin = std::min(xmin, r.sweep_value);
        xmax = std::max(xmax, r.sweep_value);
        for (double v : {r.c_lower, r.c_upper, r.c_montecarlo}) {
            if (std::isfinite(v)) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    }
    if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
    ymin = std::min(ymin, 0.0);
    if (ymax <= ymin) ymax = ymin + 1.0;
    if (xmax <= xmin) xmin -= 0.5, xmax += 0.5;
    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    const auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<g class=\"axes\" stroke=\"black\">\n";
    o << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph << "\"/>\n";
    o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        o << "<line x1=\"" << fixed(sx(xv)) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(sx(xv)) << "\" y2=\""
          << top + ph + 5 << "\"/>\n";
        o << "<text stroke=\"none\" text-anchor=\"middle\" x=\"" << fixed(sx(xv)) << "\" y=\"" << top + ph + 18
          << "\">" << tick_label(xv) << "</text>\n";
        o << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(sy(yv)) << "\" x2=\"" << left << "\" y2=\""
          << fixed(sy(yv)) << "\"/>\n";
        o << "<text stroke=\"none\" text-anchor=\"end\" x=\"" << left - 8 << "\" y=\"" << fixed(sy(yv) + 4) << "\">"
          << tick_label(yv) << "</text>\n";
    }
    o << "</g>\n";
    o << "<text class=\"xlabel\" text-anchor=\"middle\" x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\">"
      << xml_escape(table.sweep_name) << "</text>\n";
    o << "<text class=\"ylabel\" text-anchor=\"middle\" transform=\"translate(18," << top + ph / 2
      << ") rotate(-90)\">bits per channel use</text>\n";

    for (std::size_t s = 0; s < labels.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        o << "<g class=\"series\" data-case=\"" << xml_escape(labels[s]) << "\" stroke=\"" << color
          << "\" fill=\"none\">\n";
        const auto polyline = [&](double ResultRow::*field, const char* cls, const char* dash) {
            std::string pts;
            for (const ResultRow& r : table.rows) {
                if (r.case_label != labels[s] || !std::isfinite(r.*field)) continue;
                pts += fixed(sx(r.sweep_value)) + "," + fixed(sy(r.*field)) + " ";
            }
            if (pts.empty()) return;
            pts.pop_back();
            o << "<polyline class=\"" << cls << "\" points=\"" << pts << "\"";
            if (*dash) o << " stroke-dasharray=\"" << dash << "\"";
            o << "/>\n";
        };
        polyline(&ResultRow::c_montecarlo, "montecarlo", "");
        polyline(&ResultRow::c_lower, "lower", "4 3");
        polyline(&ResultRow::c_upper, "upper", "1 3");
        for (const ResultRow& r : table.rows) {
            if (r.case_label != labels[s] || !std::isfinite(r.c_montecarlo)) continue;
            o << "<circle cx=\"" << fixed(sx(r.sweep_value)) << "\" cy=\"" << fixed(sy(r.c_montecarlo))
              << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        const double ly = top + 14 + 18 * static_cast<double>(s);
        o << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
          << "\"/>\n";
        o << "<text stroke=\"none\" fill=\"black\" x=\"" << left + pw + 45 << "\" y=\"" << ly + 4 << "\">"
          << xml_escape(labels[s]) << "</text>\n";
        o << "</g>\n";
    }
    o << "<text x=\"" << left + pw + 15 << "\" y=\"" << H - 30
      << "\" font-size=\"10\">solid: Monte-Carlo; dashed: lower; dotted: upper</text>\n";
    o << "</svg>\n";
    return o.str();
}

void emit_svg_plot(const ResultTable& table, const std::string& path) {
    if (table.rows.empty()) throw IoError("refusing to plot empty table to '" + path + "'");
    write_file(path, format_svg(table));
}

}  // namespace moris::cli
