// Copyright 2026 The qlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file report.hpp
 * Experiment reports and their JSON / CSV serializations.
 *
 * Non-finite values never reach the output as bare numbers: +inf becomes the
 * string "inf", -inf becomes "-inf" and NaN (an undefined difference of two
 * infinite divergences) becomes "not-comparable".
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "../extended_real.hpp"
#include "config.hpp"

#ifndef QLAB_VERSION
#define QLAB_VERSION "0.1.0"
#endif

namespace qlab::harness {

inline json num(double v) {
    if (std::isnan(v)) {
        return "not-comparable";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

inline json num(const ExtendedReal &v) { return num(v.value()); }

inline json num(const DivergenceGap &g) {
    switch (g.kind) {
    case DivergenceGap::Kind::finite:
        return num(g.value);
    case DivergenceGap::Kind::plus_infinity:
        return "inf";
    case DivergenceGap::Kind::minus_infinity:
        return "-inf";
    case DivergenceGap::Kind::not_comparable:
        break;
    }
    return "not-comparable";
}

inline json num(const std::vector<double> &v) {
    json a = json::array();
    for (double x : v) {
        a.push_back(num(x));
    }
    return a;
}

/// A declared tolerance check: `value` compared against `tolerance` by
/// `relation` ("<=" or ">=").
struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation = "<=";
    bool pass = false;
};

inline Check check_le(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, "<=", value <= tolerance};
}

inline Check check_ge(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, ">=", value >= tolerance};
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    ExperimentConfig config;
    json results = json::object();
    std::vector<Check> checks;
    CsvTable table;
    double duration_seconds = 0.0;
    std::string version = QLAB_VERSION;

    [[nodiscard]] bool all_pass() const {
        for (const Check &c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] const Check *find_check(std::string_view name) const {
        for (const Check &c : checks) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }
};

enum class Format { json, csv };

inline json checks_json(const ExperimentReport &r) {
    json a = json::array();
    for (const Check &c : r.checks) {
        a.push_back({{"name", c.name},
                     {"value", num(c.value)},
                     {"relation", c.relation},
                     {"tolerance", num(c.tolerance)},
                     {"pass", c.pass}});
    }
    return a;
}

/// Everything except timing: two runs of one config must agree on this byte
/// for byte.
inline std::string numeric_payload(const ExperimentReport &r) {
    json j;
    j["config"] = serialize_config(r.config);
    j["results"] = r.results;
    j["checks"] = checks_json(r);
    j["table"] = {{"header", r.table.header}, {"rows", json::array()}};
    for (const auto &row : r.table.rows) {
        j["table"]["rows"].push_back(num(row));
    }
    return j.dump();
}

inline std::string format_csv_value(double v) {
    if (std::isnan(v)) {
        return "not-comparable";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string write_csv(const ExperimentReport &r) {
    std::string out;
    for (std::size_t i = 0; i < r.table.header.size(); ++i) {
        out += (i ? "," : "") + r.table.header[i];
    }
    out += '\n';
    for (const auto &row : r.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + format_csv_value(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline std::string write_json(const ExperimentReport &r) {
    json j;
    j["experiment"] = std::string(to_string(r.config.experiment));
    j["version"] = r.version;
    j["config"] = serialize_config(r.config);
    j["results"] = r.results;
    j["checks"] = checks_json(r);
    j["all_pass"] = r.all_pass();
    j["duration_seconds"] = r.duration_seconds;
    return j.dump(2) + "\n";
}

inline std::string write_report(const ExperimentReport &r, Format format) {
    return format == Format::csv ? write_csv(r) : write_json(r);
}

} // namespace qlab::harness
