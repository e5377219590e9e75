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
 * @file config.hpp
 * Experiment configuration: a JSON document naming one experiment, its
 * parameters, a seed and an optional output path.
 *
 * parse_config() validates everything it can before anything runs and fills
 * in every defaulted parameter, so the echoed configuration in a report is
 * the full effective one. All semantic problems are reported together.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "../errors.hpp"
#include "../matcore.hpp"
#include "../modelsel.hpp"

namespace qlab::harness {

using json = nlohmann::json;

enum class Experiment { stein, sanov, chernoff, divergence_props, hot, modelsel, risk_alpha };

inline constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperiments{{
    {Experiment::stein, "stein"},
    {Experiment::sanov, "sanov"},
    {Experiment::chernoff, "chernoff"},
    {Experiment::divergence_props, "divergence-props"},
    {Experiment::hot, "hot"},
    {Experiment::modelsel, "modelsel"},
    {Experiment::risk_alpha, "risk-alpha"},
}};

inline std::string_view to_string(Experiment e) {
    for (const auto &[k, name] : kExperiments) {
        if (k == e) {
            return name;
        }
    }
    return "unknown";
}

inline std::optional<Experiment> experiment_from_string(std::string_view name) {
    for (const auto &[k, n] : kExperiments) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

inline std::string experiment_names() {
    std::string out;
    for (const auto &[k, n] : kExperiments) {
        out += out.empty() ? "" : ", ";
        out += n;
    }
    return out;
}

/// One line per experiment describing its parameters; required ones first.
inline std::string_view experiment_usage(Experiment e) {
    switch (e) {
    case Experiment::stein:
        return "p, q, epsilon, n_list | fit_mode=all, tolerance=0.01, np_bruteforce_n=0";
    case Experiment::sanov:
        return "p, constraints, n_list | form=as_given, resolution=200, bound_factor=3";
    case Experiment::chernoff:
        return "p, q, n_list | priors=[[0.5,0.5]], tolerance=0.05";
    case Experiment::divergence_props:
        return "| trials=100, dim_min=2, dim_max=8, alphas=[-0.5,0,0.5], tolerance=1e-9";
    case Experiment::hot:
        return "mode=commuting|noncommuting|explicit | trials=100, dim_min=2, dim_max=8, "
               "alphas=[-1,-0.5,0,0.5,1], t_points=21, tolerance=1e-9; "
               "explicit: rho, sigma, measurement";
    case Experiment::modelsel:
        return "true_dist, models, n, datasets | mode=selection|generalization, beta=1, "
               "expected_model=0, min_rate=0.95, model=0, se_factor=3";
    case Experiment::risk_alpha:
        return "| grid={lo:0.05,hi:0.95,count:9}, family=binary or dists, n=3, "
               "alphas=[-1,0,0.5,1], perturbations=50, perturbation_magnitude=0.01, "
               "slack=1e-12";
    }
    return "";
}

struct ExperimentConfig {
    Experiment experiment = Experiment::stein;
    json parameters = json::object();
    std::uint64_t seed = 0;
    std::string output_path;

    friend bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
        return a.experiment == b.experiment && a.parameters == b.parameters &&
               a.seed == b.seed && a.output_path == b.output_path;
    }
};

inline json serialize_config(const ExperimentConfig &cfg) {
    json j;
    j["experiment"] = std::string(to_string(cfg.experiment));
    j["parameters"] = cfg.parameters;
    j["seed"] = cfg.seed;
    j["output_path"] = cfg.output_path;
    return j;
}

// ---------------------------------------------------------------------------
// Conversions from validated parameter values.

/// Probability array; renormalized because the load tolerance (1e-9) is looser
/// than the distribution invariant.
inline ClassicalDistribution to_distribution(const json &j) {
    std::vector<double> p = j.get<std::vector<double>>();
    double s = 0.0;
    for (double v : p) {
        s += v;
    }
    for (double &v : p) {
        v /= s;
    }
    return ClassicalDistribution(std::move(p));
}

/// Row-major array of rows of [re, im] pairs.
inline CMatrix to_cmatrix(const json &j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    CMatrix m(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < rows; ++c) {
            const json &e = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

inline json from_cmatrix(const CMatrix &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(row);
    }
    return rows;
}

inline Measurement to_measurement(const json &j) {
    std::vector<HermitianMatrix> effects;
    for (const json &e : j) {
        effects.emplace_back(to_cmatrix(e));
    }
    return Measurement(std::move(effects));
}

inline ParamGrid to_grid(const json &j) {
    return ParamGrid::midpoint_1d(j["lo"].get<double>(), j["hi"].get<double>(),
                                  j["count"].get<std::size_t>());
}

inline std::vector<std::size_t> to_sizes(const json &j) { return j.get<std::vector<std::size_t>>(); }

/// Builds the induced model described by one entry of a "models" array.
inline InducedModel to_model(const json &m) {
    const std::size_t dim = m["dim"].get<std::size_t>();
    if (m.contains("family")) {
        return binary_family(to_grid(m["grid"]), dim);
    }
    if (m.contains("dists")) {
        std::vector<ClassicalDistribution> dists;
        for (const json &d : m["dists"]) {
            dists.push_back(to_distribution(d));
        }
        return InducedModel(to_grid(m["grid"]), std::move(dists), dim);
    }
    std::vector<DensityMatrix> states;
    for (const json &s : m["states"]) {
        states.emplace_back(to_cmatrix(s));
    }
    const QuantumModel qm(to_grid(m["grid"]), std::move(states), dim);
    return induce_model(qm, to_measurement(m["measurement"]));
}

namespace detail {

/// Field-by-field checker. Every method records its problems and, when a key
/// is absent and a default exists, writes the default back into the object.
class Checker {
  public:
    Checker(json &obj, std::string prefix, std::vector<std::string> &errors)
        : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

    void fail(const std::string &key, const std::string &msg) {
        errors_.push_back(prefix_ + key + ": " + msg);
    }

    bool has(const char *key) const { return obj_.contains(key); }
    json &at(const char *key) { return obj_[key]; }

    bool require(const char *key) {
        seen_.insert(key);
        if (!obj_.contains(key)) {
            fail(key, "required parameter is missing");
            return false;
        }
        return true;
    }

    bool present_or_default(const char *key, const json &def) {
        seen_.insert(key);
        if (!obj_.contains(key)) {
            obj_[key] = def;
        }
        return true;
    }

    /// A probability array: nonnegative finite entries summing to 1 within 1e-9.
    bool prob(const char *key) {
        if (!require(key)) {
            return false;
        }
        return prob_value(key, obj_[key]);
    }

    bool prob_value(const std::string &key, const json &v) {
        if (!v.is_array() || v.empty()) {
            fail(key, "expected a nonempty array of probabilities");
            return false;
        }
        double s = 0.0;
        for (const json &e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>()) || e.get<double>() < 0.0) {
                fail(key, "probabilities must be finite and nonnegative");
                return false;
            }
            s += e.get<double>();
        }
        if (std::abs(s - 1.0) > 1e-9) {
            std::ostringstream os;
            os << "probabilities sum to " << s << ", expected 1 within 1e-9";
            fail(key, os.str());
            return false;
        }
        return true;
    }

    bool number(const char *key, std::optional<double> def, double lo, double hi,
                bool open_lo = false, bool open_hi = false) {
        if (def ? !present_or_default(key, *def) : !require(key)) {
            return false;
        }
        const json &v = obj_[key];
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            fail(key, "expected a finite number");
            return false;
        }
        const double x = v.get<double>();
        if (x < lo || x > hi || (open_lo && x == lo) || (open_hi && x == hi)) {
            std::ostringstream os;
            os << "value " << x << " outside " << (open_lo ? "(" : "[") << lo << ", " << hi
               << (open_hi ? ")" : "]");
            fail(key, os.str());
            return false;
        }
        return true;
    }

    bool integer(const char *key, std::optional<std::int64_t> def, std::int64_t lo,
                 std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
        if (def ? !present_or_default(key, *def) : !require(key)) {
            return false;
        }
        return integer_value(key, obj_[key], lo, hi);
    }

    bool integer_value(const std::string &key, const json &v, std::int64_t lo, std::int64_t hi) {
        if (!v.is_number_integer()) {
            fail(key, "expected an integer");
            return false;
        }
        const auto x = v.get<std::int64_t>();
        if (x < lo || x > hi) {
            fail(key, "integer " + std::to_string(x) + " outside [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
            return false;
        }
        return true;
    }

    bool integer_list(const char *key, std::optional<json> def, std::int64_t lo,
                      std::size_t min_len = 1) {
        if (def ? !present_or_default(key, *def) : !require(key)) {
            return false;
        }
        const json &v = obj_[key];
        if (!v.is_array() || v.size() < min_len) {
            fail(key, "expected an array of at least " + std::to_string(min_len) + " integers");
            return false;
        }
        bool ok = true;
        for (const json &e : v) {
            ok = integer_value(key, e, lo, std::numeric_limits<std::int64_t>::max()) && ok;
        }
        return ok;
    }

    bool number_list(const char *key, std::optional<json> def, double lo, double hi) {
        if (def ? !present_or_default(key, *def) : !require(key)) {
            return false;
        }
        const json &v = obj_[key];
        if (!v.is_array() || v.empty()) {
            fail(key, "expected a nonempty array of numbers");
            return false;
        }
        for (const json &e : v) {
            if (!e.is_number() || e.get<double>() < lo || e.get<double>() > hi) {
                std::ostringstream os;
                os << "entries must be numbers in [" << lo << ", " << hi << "]";
                fail(key, os.str());
                return false;
            }
        }
        return true;
    }

    bool choice(const char *key, std::optional<std::string> def,
                std::initializer_list<std::string_view> allowed) {
        if (def ? !present_or_default(key, *def) : !require(key)) {
            return false;
        }
        const json &v = obj_[key];
        std::string list;
        for (std::string_view a : allowed) {
            list += list.empty() ? "" : ", ";
            list += a;
            if (v.is_string() && v.get<std::string>() == a) {
                return true;
            }
        }
        fail(key, "expected one of: " + list);
        return false;
    }

    /// Square complex matrix as rows of [re, im] pairs.
    bool matrix_value(const std::string &key, const json &v) {
        if (!v.is_array() || v.empty()) {
            fail(key, "expected a square array of [re, im] pairs");
            return false;
        }
        for (const json &row : v) {
            if (!row.is_array() || row.size() != v.size()) {
                fail(key, "matrix must be square");
                return false;
            }
            for (const json &e : row) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                    fail(key, "matrix entries must be [re, im] number pairs");
                    return false;
                }
            }
        }
        return true;
    }

    /// Runs `build` and converts library validation failures into messages.
    template <class F> bool construct(const std::string &key, F &&build) {
        try {
            build();
            return true;
        } catch (const Error &e) {
            fail(key, e.what());
            return false;
        }
    }

    void reject_unknown() {
        for (const auto &item : obj_.items()) {
            if (!seen_.count(item.key())) {
                fail(item.key(), "unknown parameter");
            }
        }
    }

    /// Checker for a nested object, sharing this checker's error list.
    Checker sub(json &obj, const std::string &name) {
        return Checker(obj, prefix_ + name + ".", errors_);
    }

    /// Marks a key as accepted without checking it here.
    void allow(const char *key) { seen_.insert(key); }

  private:
    json &obj_;
    std::string prefix_;
    std::vector<std::string> &errors_;
    std::set<std::string> seen_;
};

inline bool same_length(Checker &c, const json &params, const char *a, const char *b) {
    if (params[a].size() != params[b].size()) {
        c.fail(b, std::string("length differs from ") + a);
        return false;
    }
    return true;
}

/// {lo, hi, count} midpoint grid.
inline bool check_grid(Checker &c, json &params, const char *key, bool required) {
    if (required ? !c.require(key)
                 : !c.present_or_default(key, json{{"lo", 0.05}, {"hi", 0.95}, {"count", 9}})) {
        return false;
    }
    json &g = params[key];
    if (!g.is_object()) {
        c.fail(key, "expected an object {lo, hi, count}");
        return false;
    }
    Checker gc = c.sub(g, key);
    bool ok = gc.number("lo", std::nullopt, -1e300, 1e300);
    ok = gc.number("hi", std::nullopt, -1e300, 1e300) && ok;
    ok = gc.integer("count", std::nullopt, 1, 100000) && ok;
    gc.reject_unknown();
    if (ok && !(g["hi"].get<double>() > g["lo"].get<double>())) {
        c.fail(key, "hi must exceed lo");
        ok = false;
    }
    return ok;
}

inline void check_stein(Checker &c, json &params) {
    const bool p = c.prob("p");
    const bool q = c.prob("q");
    if (p && q) {
        same_length(c, params, "p", "q");
    }
    c.number("epsilon", std::nullopt, 0.0, 1.0, true, true);
    c.integer_list("n_list", std::nullopt, 1);
    c.choice("fit_mode", std::string("all"), {"all", "asymptotic"});
    c.number("tolerance", 0.01, 0.0, 1e300);
    c.integer("np_bruteforce_n", 0, 0, 64);
}

inline void check_sanov(Checker &c, json &params) {
    const bool p = c.prob("p");
    if (c.require("constraints")) {
        json &cs = params["constraints"];
        if (!cs.is_array() || cs.empty()) {
            c.fail("constraints", "expected a nonempty array of constraints");
        } else {
            for (std::size_t i = 0; i < cs.size(); ++i) {
                const std::string name = "constraints[" + std::to_string(i) + "]";
                if (!cs[i].is_object()) {
                    c.fail(name, "expected an object {coefficients, relation, bound}");
                    continue;
                }
                Checker cc = c.sub(cs[i], name);
                if (cc.number_list("coefficients", std::nullopt, -1e300, 1e300) && p &&
                    cs[i]["coefficients"].size() != params["p"].size()) {
                    cc.fail("coefficients", "length differs from p");
                }
                cc.choice("relation", std::nullopt, {"ge", "le", "gt", "lt"});
                cc.number("bound", std::nullopt, -1e300, 1e300);
                cc.reject_unknown();
            }
        }
    }
    c.integer_list("n_list", std::nullopt, 1);
    c.choice("form", std::string("as_given"), {"as_given", "closure", "interior"});
    c.integer("resolution", 200, 1, 100000);
    c.number("bound_factor", 3.0, 0.0, 1e300);
}

inline void check_chernoff(Checker &c, json &params) {
    const bool p = c.prob("p");
    const bool q = c.prob("q");
    if (p && q) {
        same_length(c, params, "p", "q");
    }
    c.integer_list("n_list", std::nullopt, 1, 2);
    if (c.present_or_default("priors", json::array({json::array({0.5, 0.5})}))) {
        const json &pr = params["priors"];
        if (!pr.is_array() || pr.empty()) {
            c.fail("priors", "expected a nonempty array of [pi1, pi2] pairs");
        } else {
            for (std::size_t i = 0; i < pr.size(); ++i) {
                const std::string name = "priors[" + std::to_string(i) + "]";
                if (c.prob_value(name, pr[i]) && (pr[i].size() != 2 || pr[i][0].get<double>() <= 0.0 ||
                                                  pr[i][1].get<double>() <= 0.0)) {
                    c.fail(name, "expected two positive prior weights");
                }
            }
        }
    }
    c.number("tolerance", 0.05, 0.0, 1e300);
}

inline void check_dims(Checker &c, json &params) {
    const bool lo = c.integer("dim_min", 2, 1, 64);
    const bool hi = c.integer("dim_max", 8, 1, 64);
    if (lo && hi && params["dim_min"].get<int>() > params["dim_max"].get<int>()) {
        c.fail("dim_max", "must not be below dim_min");
    }
}

inline void check_divergence_props(Checker &c, json &params) {
    c.integer("trials", 100, 1, 1000000);
    check_dims(c, params);
    c.number_list("alphas", json::array({-0.5, 0.0, 0.5}), -1.0, 1.0);
    c.number("tolerance", 1e-9, 0.0, 1e300);
}

inline void check_hot(Checker &c, json &params) {
    c.choice("mode", std::string("commuting"), {"commuting", "noncommuting", "explicit"});
    c.number_list("alphas", json::array({-1.0, -0.5, 0.0, 0.5, 1.0}), -1.0, 1.0);
    c.integer("t_points", 21, 2, 100000);
    c.number("tolerance", 1e-9, 0.0, 1e300);
    if (params["mode"] != "explicit") {
        c.integer("trials", 100, 1, 1000000);
        check_dims(c, params);
        return;
    }
    const bool rho = c.require("rho") && c.matrix_value("rho", params["rho"]) &&
                     c.construct("rho", [&] { DensityMatrix(to_cmatrix(params["rho"])); });
    const bool sigma = c.require("sigma") && c.matrix_value("sigma", params["sigma"]) &&
                       c.construct("sigma", [&] { DensityMatrix(to_cmatrix(params["sigma"])); });
    bool meas = c.require("measurement");
    if (meas) {
        const json &m = params["measurement"];
        if (!m.is_array() || m.empty()) {
            c.fail("measurement", "expected a nonempty array of effect matrices");
            meas = false;
        } else {
            for (std::size_t i = 0; i < m.size(); ++i) {
                meas = c.matrix_value("measurement[" + std::to_string(i) + "]", m[i]) && meas;
            }
            meas = meas && c.construct("measurement", [&] { (void)to_measurement(m); });
        }
    }
    if (rho && sigma && params["rho"].size() != params["sigma"].size()) {
        c.fail("sigma", "dimension differs from rho");
    }
    if (rho && meas && params["measurement"][0].size() != params["rho"].size()) {
        c.fail("measurement", "dimension differs from rho");
    }
}

/// One entry of a "models" array: a binary family, explicit distributions, or
/// states with a measurement. Returns the outcome alphabet size (0 on error).
inline std::size_t check_model(Checker &c, json &m, const std::string &name) {
    if (!m.is_object()) {
        c.fail(name, "expected a model object");
        return 0;
    }
    Checker mc = c.sub(m, name);
    const int kinds = static_cast<int>(m.contains("family")) + static_cast<int>(m.contains("dists")) +
                      static_cast<int>(m.contains("states"));
    if (kinds != 1) {
        c.fail(name, "exactly one of family, dists or states is required");
        return 0;
    }
    std::size_t alphabet = 0;
    bool ok = true;
    if (m.contains("family")) {
        ok = mc.choice("family", std::nullopt, {"binary"});
        ok = check_grid(mc, m, "grid", false) && ok;
        alphabet = 2;
    } else if (m.contains("dists")) {
        mc.allow("dists");
        const json &d = m["dists"];
        if (!d.is_array() || d.empty()) {
            mc.fail("dists", "expected a nonempty array of distributions");
            return 0;
        }
        for (std::size_t i = 0; i < d.size(); ++i) {
            ok = mc.prob_value("dists[" + std::to_string(i) + "]", d[i]) && ok;
            if (ok && d[i].size() != d[0].size()) {
                mc.fail("dists", "distributions differ in length");
                ok = false;
            }
        }
        if (!m.contains("grid")) {
            m["grid"] = json{{"lo", 0.0}, {"hi", 1.0}, {"count", d.size()}};
        }
        ok = check_grid(mc, m, "grid", true) && ok;
        if (ok && m["grid"]["count"].get<std::size_t>() != d.size()) {
            mc.fail("grid", "count differs from the number of distributions");
            ok = false;
        }
        alphabet = ok ? d[0].size() : 0;
    } else {
        mc.allow("states");
        const json &st = m["states"];
        if (!st.is_array() || st.empty()) {
            mc.fail("states", "expected a nonempty array of density matrices");
            return 0;
        }
        for (std::size_t i = 0; i < st.size(); ++i) {
            ok = mc.matrix_value("states[" + std::to_string(i) + "]", st[i]) && ok;
        }
        if (mc.require("measurement")) {
            const json &ms = m["measurement"];
            if (!ms.is_array() || ms.empty()) {
                mc.fail("measurement", "expected a nonempty array of effect matrices");
                ok = false;
            } else {
                for (std::size_t i = 0; i < ms.size(); ++i) {
                    ok = mc.matrix_value("measurement[" + std::to_string(i) + "]", ms[i]) && ok;
                }
                alphabet = ms.size();
            }
        } else {
            ok = false;
        }
        if (!m.contains("grid")) {
            m["grid"] = json{{"lo", 0.0}, {"hi", 1.0}, {"count", st.size()}};
        }
        ok = check_grid(mc, m, "grid", true) && ok;
        if (ok && m["grid"]["count"].get<std::size_t>() != st.size()) {
            mc.fail("grid", "count differs from the number of states");
            ok = false;
        }
    }
    ok = mc.integer("dim", 1, 0, 1000000) && ok;
    mc.reject_unknown();
    if (!ok) {
        return 0;
    }
    // Library-level checks: valid states and effects, shared supports.
    ok = mc.construct("model", [&] {
        const std::vector<InducedModel> one{to_model(m)};
        const PredictiveValidation v = validate_predictive_measurement(one);
        if (!v.ok) {
            throw ValidationError("outcome support changes across the grid (first at grid index " +
                                  std::to_string(v.violations.front().grid_index) + ")");
        }
    });
    return ok ? alphabet : 0;
}

inline void check_modelsel(Checker &c, json &params) {
    const bool truth = c.prob("true_dist");
    std::size_t n_models = 0;
    if (c.require("models")) {
        json &ms = params["models"];
        if (!ms.is_array() || ms.empty()) {
            c.fail("models", "expected a nonempty array of models");
        } else {
            n_models = ms.size();
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const std::string name = "models[" + std::to_string(i) + "]";
                const std::size_t k = check_model(c, ms[i], name);
                if (k != 0 && truth && k != params["true_dist"].size()) {
                    c.fail(name, "outcome count differs from true_dist");
                }
            }
        }
    }
    c.integer("n", std::nullopt, 1, 100000000);
    c.integer("datasets", std::nullopt, 1, 100000000);
    c.choice("mode", std::string("selection"), {"selection", "generalization"});
    c.number("beta", 1.0, 0.0, 1e300, true);
    const auto last = static_cast<std::int64_t>(n_models == 0 ? 0 : n_models - 1);
    c.integer("expected_model", 0, 0, last);
    c.integer("model", 0, 0, last);
    c.number("min_rate", 0.95, 0.0, 1.0);
    c.number("se_factor", 3.0, 0.0, 1e300);
}

inline void check_risk_alpha(Checker &c, json &params) {
    if (params.contains("dists")) {
        c.allow("dists");
        const json &d = params["dists"];
        if (!d.is_array() || d.empty()) {
            c.fail("dists", "expected a nonempty array of distributions");
        } else {
            for (std::size_t i = 0; i < d.size(); ++i) {
                c.prob_value("dists[" + std::to_string(i) + "]", d[i]);
            }
        }
        if (params.contains("family")) {
            c.fail("family", "family and dists are mutually exclusive");
        }
        if (!params.contains("grid") && d.is_array()) {
            params["grid"] = json{{"lo", 0.0}, {"hi", 1.0}, {"count", d.size()}};
        }
    } else {
        c.choice("family", std::string("binary"), {"binary"});
    }
    if (check_grid(c, params, "grid", false) && params.contains("dists") &&
        params["grid"]["count"].get<std::size_t>() != params["dists"].size()) {
        c.fail("grid", "count differs from the number of distributions");
    }
    c.integer("n", 3, 0, 64);
    c.number_list("alphas", json::array({-1.0, 0.0, 0.5, 1.0}), -1.0, 1.0);
    c.integer("perturbations", 50, 0, 1000000);
    c.number("perturbation_magnitude", 0.01, 0.0, 1.0);
    c.number("slack", 1e-12, 0.0, 1e300);
}

inline void check_parameters(Experiment e, json &params, std::vector<std::string> &errors) {
    Checker c(params, "parameters.", errors);
    switch (e) {
    case Experiment::stein:
        check_stein(c, params);
        break;
    case Experiment::sanov:
        check_sanov(c, params);
        break;
    case Experiment::chernoff:
        check_chernoff(c, params);
        break;
    case Experiment::divergence_props:
        check_divergence_props(c, params);
        break;
    case Experiment::hot:
        check_hot(c, params);
        break;
    case Experiment::modelsel:
        check_modelsel(c, params);
        break;
    case Experiment::risk_alpha:
        check_risk_alpha(c, params);
        break;
    }
    c.reject_unknown();
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

/// Parses and validates configuration text. Throws ParseError on malformed
/// syntax and ConfigError listing every semantic problem.
inline ExperimentConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        // e.byte is one past the offending character.
        const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("config parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + e.what(),
                         line, col);
    }
    std::vector<std::string> errors;
    if (!doc.is_object()) {
        throw ConfigError({"config: top level must be an object"});
    }
    ExperimentConfig cfg;
    std::optional<Experiment> exp;
    if (!doc.contains("experiment")) {
        errors.push_back("experiment: required field is missing; valid names: " +
                         experiment_names());
    } else if (!doc["experiment"].is_string() ||
               !(exp = experiment_from_string(doc["experiment"].get<std::string>()))) {
        errors.push_back("experiment: unknown experiment " + doc["experiment"].dump() +
                         "; valid names: " + experiment_names());
    }
    if (doc.contains("seed")) {
        const json &s = doc["seed"];
        if (s.is_number_unsigned()) {
            cfg.seed = s.get<std::uint64_t>();
        } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
            cfg.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
        } else {
            errors.push_back("seed: expected a nonnegative 64-bit integer");
        }
    }
    if (doc.contains("output_path")) {
        if (doc["output_path"].is_string()) {
            cfg.output_path = doc["output_path"].get<std::string>();
        } else {
            errors.push_back("output_path: expected a string");
        }
    }
    for (const auto &item : doc.items()) {
        const std::string &k = item.key();
        if (k != "experiment" && k != "parameters" && k != "seed" && k != "output_path") {
            errors.push_back(k + ": unknown field");
        }
    }
    if (doc.contains("parameters")) {
        cfg.parameters = doc["parameters"];
        if (!cfg.parameters.is_object()) {
            errors.push_back("parameters: expected an object");
            cfg.parameters = json::object();
        }
    }
    if (exp) {
        cfg.experiment = *exp;
        detail::check_parameters(*exp, cfg.parameters, errors);
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace qlab::harness
