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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// limits are fixed below; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <functional>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qlab/qlab.hpp"

using namespace qlab;
using namespace qlab::harness;

namespace {

const std::string kConfigDir = QLAB_CONFIG_DIR;

// Pinned tolerances.
constexpr double kHotTol = 1e-9;
constexpr double kInvarianceTol = 1e-9;
constexpr double kSteinRate = 0.143841; // kl((0.5,0.5) || (0.75,0.25)) in nats
constexpr double kSteinTol = 0.01;
constexpr double kSanovFactor = 3.0;
constexpr double kChernoffRelTol = 0.05;
constexpr double kOverlapTol = 1e-9;
constexpr double kRiskSlack = 1e-12;
constexpr double kSelectionRate = 0.95;
constexpr double kWaicSeFactor = 3.0;

// Pinned runtime limits, seconds.
constexpr double kLimitHot = 5.0;
constexpr double kLimitAlphaHot = 10.0;
constexpr double kLimitStein = 30.0;
constexpr double kLimitNp = 1.0;
constexpr double kLimitSanov = 5.0;
constexpr double kLimitChernoff = 60.0;
constexpr double kLimitRisk = 10.0;
constexpr double kLimitCriteria = 120.0;

struct Timed {
    ExperimentReport report;
    double seconds = 0.0;
};

std::map<std::string, Timed> g_runs;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Timed &run(const std::string &name) {
    auto it = g_runs.find(name);
    if (it == g_runs.end()) {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentReport r = run_experiment(load_config(kConfigDir + "/" + name));
        it = g_runs.emplace(name, Timed{std::move(r), seconds_since(t0)}).first;
    }
    return it->second;
}

double result(const std::string &name, const char *key) {
    return run(name).report.results.at(key).get<double>();
}

int g_failures = 0;

void line(int id, const char *title, bool pass, const std::string &detail) {
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    g_failures += pass ? 0 : 1;
}

std::string f(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
std::string f(const char *fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

void criterion(int id, const char *title, const std::function<void()> &body) {
    try {
        body();
    } catch (const std::exception &e) {
        line(id, title, false, std::string("error: ") + e.what());
    }
}

// Independent dense-grid minimum of ln sum_k p^(1-t) q^t.
double dense_chernoff(const std::vector<double> &p, const std::vector<double> &q, int points) {
    double best = 0.0;
    for (int j = 0; j <= points; ++j) {
        const double t = static_cast<double>(j) / points;
        double s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            s += std::pow(p[k], 1.0 - t) * std::pow(q[k], t);
        }
        best = std::min(best, std::log(s));
    }
    return best;
}

} // namespace

int main() {
    std::printf("qlab acceptance suite (version %s)\n", QLAB_VERSION);

    criterion(1, "HOT equality, 100 commuting pairs", [] {
        const Timed &t = run("hot_commuting.json");
        const double gap = result("hot_commuting.json", "max_abs_gap_relative_entropy");
        const bool ok = gap <= kHotTol && t.seconds < kLimitHot;
        line(1, "HOT equality, 100 commuting pairs", ok,
             f("max|S - D(born)| = %.3g (tol %.0e), %.2f s (limit %.0f s)", gap, kHotTol, t.seconds,
               kLimitHot));
    });

    criterion(2, "alpha-HOT equality and monotonicity", [] {
        const Timed &c = run("hot_commuting.json");
        const Timed &n = run("hot_noncommuting.json");
        const double eq = result("hot_commuting.json", "max_abs_gap_alpha");
        const double mono = std::min(result("hot_noncommuting.json", "min_gap_alpha"),
                                     result("hot_noncommuting.json", "min_gap_relative_entropy"));
        const double secs = c.seconds + n.seconds;
        const bool ok = eq <= kHotTol && mono >= -kHotTol && secs < kLimitAlphaHot;
        line(2, "alpha-HOT equality and monotonicity", ok,
             f("commuting max|gap| = %.3g, 200 random triples min gap = %.4g (tol %.0e), %.2f s "
               "(limit %.0f s)",
               eq, mono, kHotTol, secs, kLimitAlphaHot));
    });

    criterion(3, "unitary invariance", [] {
        const double s = result("divergence_props.json", "max_drift_relative_entropy");
        const double a = result("divergence_props.json", "max_drift_alpha");
        const bool ok = s <= kInvarianceTol && a <= kInvarianceTol;
        line(3, "unitary invariance", ok,
             f("100 triples: drift S = %.3g, drift S^(alpha) = %.3g (tol %.0e)", s, a, kInvarianceTol));
    });

    criterion(4, "Stein exponent at n = 5000", [] {
        const char *files[] = {"stein_eps001.json", "stein_eps005.json", "stein_eps02.json"};
        double secs = 0.0;
        double worst = 0.0;
        double lo = 1e300;
        double hi = -1e300;
        std::string per;
        std::string fits;
        for (const char *file : files) {
            const Timed &t = run(file);
            secs += t.seconds;
            const double r = result(file, "rate_at_max_n");
            worst = std::max(worst, std::abs(r - kSteinRate));
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            per += f("%s eps=%g: %.5f", per.empty() ? "" : ",", result(file, "epsilon"), r);
            fits += f("%s%.5f", fits.empty() ? "" : "/", result(file, "fitted_rate"));
        }
        const bool ok = worst <= kSteinTol && (hi - lo) <= kSteinTol && secs < kLimitStein;
        line(4, "Stein exponent at n = 5000", ok,
             f("-(1/n)ln beta_n:%s; max|rate - %.6f| = %.4f, eps spread = %.4f (tol %.2f); "
               "fitted slopes over n=1000..5000 %s; %.2f s (limit %.0f s)",
               per.c_str(), kSteinRate, worst, hi - lo, kSteinTol, fits.c_str(), secs, kLimitStein));
    });

    criterion(5, "Neyman-Pearson optimality, n = 3", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const NPOptimalityReport np = np_optimality_bruteforce({0.5, 0.5}, {0.75, 0.25}, 3);
        const double secs = seconds_since(t0);
        const json &shipped = run("stein_eps005.json").report.results.at("np_optimality");
        const bool agree = shipped.at("counterexamples") == np.counterexamples &&
                           shipped.at("tests_enumerated") == np.tests_enumerated;
        const bool ok = np.tests_enumerated == 256 && np.counterexamples == 0 && agree &&
                        secs < kLimitNp;
        line(5, "Neyman-Pearson optimality, n = 3", ok,
             f("%zu tests, %zu levels, %zu counterexamples, shipped config %s, %.3f s (limit %.0f s)",
               np.tests_enumerated, np.levels_checked, np.counterexamples,
               agree ? "agrees" : "DISAGREES", secs, kLimitNp));
    });

    criterion(6, "Sanov rate, K = 3", [] {
        const Timed &t = run("sanov.json");
        const double rate = result("sanov.json", "rate");
        bool ok = t.seconds < kLimitSanov;
        std::string per;
        for (const json &row : t.report.results.at("per_n")) {
            const double n = row.at("n").get<double>();
            const double dev = std::abs(row.at("log_q_n").get<double>() / n + rate);
            const double bound = kSanovFactor * 3.0 * std::log(n + 1.0) / n;
            ok = ok && dev <= bound;
            per += f(" n=%g: %.4f <= %.4f;", n, dev, bound);
        }
        line(6, "Sanov rate, K = 3", ok,
             f("rate = %.6f;%s %.2f s (limit %.0f s)", rate, per.c_str(), t.seconds, kLimitSanov));
    });

    criterion(7, "Chernoff exponent", [] {
        const Timed &t = run("chernoff.json");
        const double c = result("chernoff.json", "exponent");
        const double oracle = dense_chernoff({0.5, 0.5}, {0.75, 0.25}, 100000);
        bool ok = std::abs(c - oracle) <= 1e-9 && t.seconds < kLimitChernoff;
        std::string per;
        for (const json &pr : t.report.results.at("priors")) {
            const double fit = pr.at("fitted_rate").get<double>();
            const double rel = std::abs(fit + c) / std::abs(c);
            ok = ok && rel <= kChernoffRelTol;
            per += f(" pi1=%g fit %.6f (rel %.4f);", pr.at("pi1").get<double>(), fit, rel);
        }
        const double spread = result("chernoff.json", "prior_spread");
        ok = ok && spread <= kChernoffRelTol;
        line(7, "Chernoff exponent", ok,
             f("exponent %.7f (dense grid %.7f);%s prior spread %.2e (tol %.2f); %.2f s (limit %.0f s)",
               c, oracle, per.c_str(), spread, kChernoffRelTol, t.seconds, kLimitChernoff));
    });

    criterion(8, "measured vs quantum overlap", [] {
        const double margin = result("hot_noncommuting.json", "min_overlap_margin");
        const double eq = result("hot_commuting.json", "max_abs_overlap_margin");
        const bool ok = margin >= -kOverlapTol && eq <= kOverlapTol;
        line(8, "measured vs quantum overlap", ok,
             f("200 triples x 21 t: min(F_meas - F_q) = %.3g; commuting max|diff| = %.3g (tol %.0e)",
               margin, eq, kOverlapTol));
    });

    criterion(9, "alpha-predictive minimizes the alpha risk", [] {
        const Timed &t = run("risk_alpha.json");
        bool ok = t.seconds < kLimitRisk;
        std::string per;
        for (const json &row : t.report.results.at("per_alpha")) {
            const double slack = row.at("min_slack").get<double>();
            ok = ok && slack >= -kRiskSlack;
            per += f(" alpha=%g slack %.3g;", row.at("alpha").get<double>(), slack);
        }
        line(9, "alpha-predictive minimizes the alpha risk", ok,
             f("53 competitors per alpha;%s (tol -%.0e), %.2f s (limit %.0f s)", per.c_str(),
               kRiskSlack, t.seconds, kLimitRisk));
    });

    criterion(10, "information criteria", [] {
        const Timed &s = run("modelsel_selection.json");
        const Timed &w = run("modelsel_waic.json");
        const double ar = result("modelsel_selection.json", "aic_selection_rate");
        const double wr = result("modelsel_selection.json", "waic_selection_rate");
        const double diff = result("modelsel_waic.json", "abs_difference");
        const double se = result("modelsel_waic.json", "combined_se");
        const double secs = s.seconds + w.seconds;
        const bool ok = ar >= kSelectionRate && wr >= kSelectionRate && diff <= kWaicSeFactor * se &&
                        secs < kLimitCriteria;
        line(10, "information criteria", ok,
             f("selection AIC %.3f, WAIC %.3f (min %.2f); |mean WAIC - mean G| = %.3g <= %.0f x %.3g; "
               "%.2f s (limit %.0f s)",
               ar, wr, kSelectionRate, diff, kWaicSeFactor, se, secs, kLimitCriteria));
    });

    criterion(11, "harness determinism", [] {
        std::size_t configs = 0;
        std::vector<std::string> mismatched;
        std::vector<std::string> files;
        for (const auto &e : std::filesystem::directory_iterator(kConfigDir)) {
            if (e.path().extension() == ".json") {
                files.push_back(e.path().filename().string());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto &name : files) {
            const std::string first = numeric_payload(run(name).report);
            const std::string second =
                numeric_payload(run_experiment(load_config(kConfigDir + "/" + name)));
            ++configs;
            if (first != second) {
                mismatched.push_back(name);
            }
        }
        line(11, "harness determinism", mismatched.empty(),
             f("%zu shipped configs run twice, %zu payload mismatches", configs, mismatched.size()));
    });

    std::printf("%d of 11 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
