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
 * @file largedev.hpp
 * Sampling, Neyman-Pearson tests and exact large-deviation oracles.
 *
 * Exact quantities are sums over type classes (empirical count vectors) of
 * multinomial weights, accumulated in the log domain with log-gamma
 * coefficients so that probabilities like beta_n at n = 5000 do not
 * underflow. Reductions run in type-enumeration order, which makes every
 * reported value bit-stable.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "divergence.hpp"
#include "extended_real.hpp"
#include "matcore.hpp"
#include "random.hpp"

namespace qlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Upper bound on the number of type classes an exact oracle may enumerate.
inline constexpr double kTypeClassGuard = 1e7;

/// ln(e^a + e^b), exact for -inf operands.
inline double log_add(double a, double b) {
    if (a == kNegInf) {
        return b;
    }
    if (b == kNegInf) {
        return a;
    }
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

struct SampleSequence {
    std::vector<std::size_t> outcomes;
    std::size_t alphabet_size = 0;
    std::uint64_t seed = 0;
};

/// Empirical counts of a sample; n = sum of counts.
struct TypeVector {
    std::vector<std::size_t> counts;
    std::size_t n = 0;

    [[nodiscard]] ClassicalDistribution normalized() const {
        if (n == 0) {
            throw ValidationError("TypeVector::normalized: empty type");
        }
        std::vector<double> p(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k) {
            p[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
        }
        return ClassicalDistribution(std::move(p));
    }
    friend bool operator==(const TypeVector &, const TypeVector &) = default;
};

/// Inversion sampling against the cumulative distribution. Outcomes outside
/// the support are never drawn.
inline SampleSequence sample_iid(const ClassicalDistribution &p, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw ValidationError("sample_iid: n must be positive");
    }
    std::vector<double> cdf;
    std::vector<std::size_t> index;
    double acc = 0.0;
    for (std::size_t k : p.support()) {
        acc += p[k];
        cdf.push_back(acc);
        index.push_back(k);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, acc);
    SampleSequence s{std::vector<std::size_t>(n), p.size(), seed};
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        s.outcomes[i] = index[static_cast<std::size_t>(it - cdf.begin())];
    }
    return s;
}

inline TypeVector empirical_measure(const SampleSequence &s) {
    TypeVector t{std::vector<std::size_t>(s.alphabet_size, 0), s.outcomes.size()};
    for (std::size_t x : s.outcomes) {
        if (x >= s.alphabet_size) {
            throw ValidationError("empirical_measure: outcome outside alphabet");
        }
        ++t.counts[x];
    }
    return t;
}

/// Per-outcome log-likelihood ratio X = -ln(p(x) / q(x)). Outcomes outside
/// supp q give -inf, outcomes in supp q but outside supp p give +inf.
inline double llr_term(const ClassicalDistribution &p, const ClassicalDistribution &q,
                       std::size_t x) {
    if (!q.in_support(x)) {
        return kNegInf;
    }
    if (!p.in_support(x)) {
        return kPosInf;
    }
    return -std::log(p[x] / q[x]);
}

/// S_n = (1/n) sum_j -ln(p(x_j) / q(x_j)). Any outcome outside supp q makes
/// the ratio infinite and the result -inf. The sum is formed from outcome
/// counts, in the same order as the type-class oracles, so a sequence and its
/// type class always produce bit-identical statistics.
inline double normalized_llr(std::span<const std::size_t> outcomes, const ClassicalDistribution &p,
                             const ClassicalDistribution &q) {
    detail::require_same_alphabet(p, q, "normalized_llr");
    if (outcomes.empty()) {
        throw ValidationError("normalized_llr: empty sample");
    }
    std::vector<std::size_t> counts(p.size(), 0);
    for (std::size_t x : outcomes) {
        if (x >= p.size()) {
            throw ValidationError("normalized_llr: outcome outside alphabet");
        }
        ++counts[x];
    }
    double sum = 0.0;
    bool plus_inf = false;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) {
            continue;
        }
        const double v = llr_term(p, q, k);
        if (v == kNegInf) {
            return kNegInf;
        }
        if (v == kPosInf) {
            plus_inf = true;
            continue;
        }
        sum += static_cast<double>(counts[k]) * v;
    }
    return plus_inf ? kPosInf : sum / static_cast<double>(outcomes.size());
}

inline double normalized_llr(const SampleSequence &s, const ClassicalDistribution &p,
                             const ClassicalDistribution &q) {
    return normalized_llr(std::span<const std::size_t>(s.outcomes), p, q);
}

/// Neyman-Pearson test: accept H0 (return 0) iff S_n <= threshold.
class NPTest {
  public:
    NPTest(ClassicalDistribution p, ClassicalDistribution q, double threshold)
        : p_(std::move(p)), q_(std::move(q)), threshold_(threshold) {
        if (!absolutely_continuous(p_, q_)) {
            throw ValidationError("NPTest: supp p must be contained in supp q");
        }
    }
    [[nodiscard]] const ClassicalDistribution &reference_p() const noexcept { return p_; }
    [[nodiscard]] const ClassicalDistribution &reference_q() const noexcept { return q_; }
    [[nodiscard]] double threshold() const noexcept { return threshold_; }

  private:
    ClassicalDistribution p_;
    ClassicalDistribution q_;
    double threshold_;
};

inline int np_decide(std::span<const std::size_t> outcomes, const NPTest &test) {
    return normalized_llr(outcomes, test.reference_p(), test.reference_q()) <= test.threshold() ? 0
                                                                                               : 1;
}

inline int np_decide(const SampleSequence &s, const NPTest &test) {
    return np_decide(std::span<const std::size_t>(s.outcomes), test);
}

// --- type classes -----------------------------------------------------------

/// Number of type classes C(n + K - 1, K - 1), as a double.
inline double type_class_count(std::size_t alphabet, std::size_t n) {
    if (alphabet == 0) {
        return 0.0;
    }
    const double k = static_cast<double>(alphabet - 1);
    const double m = static_cast<double>(n) + k;
    return std::round(std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(static_cast<double>(n) + 1.0)));
}

inline void require_type_guard(std::size_t alphabet, std::size_t n, const char *op) {
    if (type_class_count(alphabet, n) > kTypeClassGuard) {
        throw CapacityError("n", std::string(op) + ": " + std::to_string(n) +
                                     " samples over " + std::to_string(alphabet) +
                                     " outcomes exceed the type-class guard");
    }
}

/// Calls visit(counts) for every count vector of length K summing to n, in
/// lexicographically decreasing order of counts[0], counts[1], ...
inline void for_each_type(std::size_t alphabet, std::size_t n,
                          const std::function<void(std::span<const std::size_t>)> &visit) {
    std::vector<std::size_t> counts(alphabet, 0);
    const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                                  std::size_t left) {
        if (pos + 1 == alphabet) {
            counts[pos] = left;
            visit(counts);
            return;
        }
        for (std::size_t c = left + 1; c-- > 0;) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    if (alphabet > 0) {
        rec(0, n);
    }
}

/// ln( n! / prod_k c_k! ).
inline double log_multinomial(std::span<const std::size_t> counts) {
    std::size_t n = 0;
    double s = 0.0;
    for (std::size_t c : counts) {
        n += c;
        s -= std::lgamma(static_cast<double>(c) + 1.0);
    }
    return s + std::lgamma(static_cast<double>(n) + 1.0);
}

/// ln P_p(type class of counts): multinomial coefficient times prod p_k^{c_k}.
inline double log_type_probability(std::span<const std::size_t> counts,
                                   const ClassicalDistribution &p) {
    double s = log_multinomial(counts);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) {
            continue;
        }
        if (!p.in_support(k)) {
            return kNegInf;
        }
        s += static_cast<double>(counts[k]) * std::log(p[k]);
    }
    return s;
}

// --- Neyman-Pearson error curves --------------------------------------------

struct ErrorPair {
    double alpha_n;   // P_p(S_n > eta), type I
    double beta_n;    // P_q(S_n <= eta), type II
    double log_alpha; // ln alpha_n (-inf when zero)
    double log_beta;
};

struct ErrorLevel {
    double eta;
    ErrorPair errors;
};

/// Exact step curve of the NP test: one entry per distinct value of S_n
/// (ascending), with both error probabilities at threshold eta = that value.
inline std::vector<ErrorLevel> exact_error_curve(const ClassicalDistribution &p,
                                                 const ClassicalDistribution &q, std::size_t n) {
    detail::require_same_alphabet(p, q, "exact_error_curve");
    if (n == 0) {
        throw ValidationError("exact_error_curve: n must be positive");
    }
    require_type_guard(p.size(), n, "exact_error_curve");

    struct Entry {
        double llr;
        double log_p;
        double log_q;
    };
    std::vector<Entry> entries;
    for_each_type(p.size(), n, [&](std::span<const std::size_t> counts) {
        const double lp = log_type_probability(counts, p);
        const double lq = log_type_probability(counts, q);
        if (lp == kNegInf && lq == kNegInf) {
            return;
        }
        double sum = 0.0;
        bool pinf = false;
        bool ninf = false;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (counts[k] == 0) {
                continue;
            }
            const double v = llr_term(p, q, k);
            if (v == kPosInf) {
                pinf = true;
            } else if (v == kNegInf) {
                ninf = true;
            } else {
                sum += static_cast<double>(counts[k]) * v;
            }
        }
        const double llr = ninf ? kNegInf : (pinf ? kPosInf : sum / static_cast<double>(n));
        entries.push_back({llr, lp, lq});
    });
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry &a, const Entry &b) { return a.llr < b.llr; });

    // Group numerically equal levels.
    struct Group {
        double eta;
        double log_p;
        double log_q;
    };
    std::vector<Group> groups;
    for (const Entry &e : entries) {
        if (!groups.empty()) {
            Group &g = groups.back();
            const bool same = (e.llr == g.eta) ||
                              (std::isfinite(e.llr) && std::isfinite(g.eta) &&
                               std::abs(e.llr - g.eta) <= 1e-12 * std::max(1.0, std::abs(g.eta)));
            if (same) {
                g.log_p = log_add(g.log_p, e.log_p);
                g.log_q = log_add(g.log_q, e.log_q);
                continue;
            }
        }
        groups.push_back({e.llr, e.log_p, e.log_q});
    }

    std::vector<ErrorLevel> curve(groups.size());
    double beta_acc = kNegInf;
    for (std::size_t j = 0; j < groups.size(); ++j) {
        beta_acc = log_add(beta_acc, groups[j].log_q);
        curve[j].eta = groups[j].eta;
        curve[j].errors.log_beta = beta_acc;
    }
    double alpha_acc = kNegInf;
    for (std::size_t j = groups.size(); j-- > 0;) {
        curve[j].errors.log_alpha = alpha_acc; // mass strictly above level j
        alpha_acc = log_add(alpha_acc, groups[j].log_p);
    }
    for (ErrorLevel &lvl : curve) {
        lvl.errors.alpha_n = std::min(1.0, std::exp(lvl.errors.log_alpha));
        lvl.errors.beta_n = std::min(1.0, std::exp(lvl.errors.log_beta));
    }
    return curve;
}

struct BetaResult {
    double log_beta;
    double beta;
    double eta;
    double achieved_alpha;
};

/// Optimal type-II error among NP tests with type-I error strictly below eps:
/// the smallest level eta on the exact curve with alpha_n(eta) < eps.
inline BetaResult beta_n_eps(const ClassicalDistribution &p, const ClassicalDistribution &q,
                             std::size_t n, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ValidationError("beta_n_eps: eps must lie in (0, 1)");
    }
    for (const ErrorLevel &lvl : exact_error_curve(p, q, n)) {
        if (lvl.errors.alpha_n < eps) {
            return {lvl.errors.log_beta, lvl.errors.beta_n, lvl.eta, lvl.errors.alpha_n};
        }
    }
    throw NumericalError("beta_n_eps: no threshold reaches the requested level");
}

enum class FitMode { all, asymptotic };

inline const char *to_string(FitMode m) { return m == FitMode::all ? "all" : "asymptotic"; }

/// Negated least-squares slope of log_values against n. In asymptotic mode
/// only the three largest n enter the fit.
inline double rate_fit(std::span<const double> n_list, std::span<const double> log_values,
                       FitMode mode = FitMode::all) {
    if (n_list.size() != log_values.size()) {
        throw ValidationError("rate_fit: n list and value list differ in length");
    }
    if (n_list.size() < 2) {
        throw ValidationError("rate_fit: at least two points are required");
    }
    std::vector<std::size_t> idx(n_list.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (mode == FitMode::asymptotic && idx.size() > 3) {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return n_list[a] > n_list[b]; });
        idx.resize(3);
        std::sort(idx.begin(), idx.end());
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i : idx) {
        mx += n_list[i];
        my += log_values[i];
    }
    mx /= static_cast<double>(idx.size());
    my /= static_cast<double>(idx.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i : idx) {
        sxy += (n_list[i] - mx) * (log_values[i] - my);
        sxx += (n_list[i] - mx) * (n_list[i] - mx);
    }
    if (sxx == 0.0) {
        throw ValidationError("rate_fit: n values must not all be equal");
    }
    return -sxy / sxx;
}

struct SteinResult {
    std::vector<std::size_t> n_list;
    std::vector<double> log_beta;
    std::vector<double> per_n; // -(1/n) ln beta_n(eps)
    std::vector<double> eta;
    std::vector<double> achieved_alpha;
    double fitted_rate = 0.0;
    FitMode mode = FitMode::all;
};

inline SteinResult stein_rate(const ClassicalDistribution &p, const ClassicalDistribution &q,
                              double eps, std::span<const std::size_t> n_list,
                              FitMode mode = FitMode::all) {
    SteinResult r;
    r.mode = mode;
    std::vector<double> ns;
    for (std::size_t n : n_list) {
        const BetaResult b = beta_n_eps(p, q, n, eps);
        r.n_list.push_back(n);
        r.log_beta.push_back(b.log_beta);
        r.per_n.push_back(-b.log_beta / static_cast<double>(n));
        r.eta.push_back(b.eta);
        r.achieved_alpha.push_back(b.achieved_alpha);
        ns.push_back(static_cast<double>(n));
    }
    if (ns.size() >= 2) {
        r.fitted_rate = rate_fit(ns, r.log_beta, mode);
    } else if (ns.size() == 1) {
        r.fitted_rate = r.per_n.front();
    }
    return r;
}

/// Brute-force check of NP optimality over every deterministic test on the
/// K^n sequences: at each level of the NP curve no test with type-I error at
/// most the achieved alpha has a smaller type-II error.
struct NPOptimalityReport {
    std::size_t tests_enumerated = 0;
    std::size_t levels_checked = 0;
    std::size_t counterexamples = 0;
    double max_violation = 0.0; // max over levels of (beta_NP - best competitor beta)
};

inline NPOptimalityReport np_optimality_bruteforce(const ClassicalDistribution &p,
                                                   const ClassicalDistribution &q, std::size_t n,
                                                   double tol = 1e-12) {
    detail::require_same_alphabet(p, q, "np_optimality_bruteforce");
    std::size_t sequences = 1;
    for (std::size_t i = 0; i < n; ++i) {
        sequences *= p.size();
        if (sequences > 20) {
            throw CapacityError("n", "np_optimality_bruteforce: more than 20 sequences");
        }
    }
    std::vector<double> prob_p(sequences, 1.0);
    std::vector<double> prob_q(sequences, 1.0);
    for (std::size_t s = 0; s < sequences; ++s) {
        std::size_t code = s;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t x = code % p.size();
            code /= p.size();
            prob_p[s] *= p[x];
            prob_q[s] *= q[x];
        }
    }
    NPOptimalityReport rep;
    const std::vector<ErrorLevel> curve = exact_error_curve(p, q, n);
    const std::uint64_t total = std::uint64_t{1} << sequences;
    rep.tests_enumerated = static_cast<std::size_t>(total);
    for (const ErrorLevel &lvl : curve) {
        ++rep.levels_checked;
        double best = kPosInf;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double a = 0.0; // T = 1 where the bit is set
            double b = 0.0;
            for (std::size_t s = 0; s < sequences; ++s) {
                if ((mask >> s) & 1U) {
                    a += prob_p[s];
                } else {
                    b += prob_q[s];
                }
            }
            if (a <= lvl.errors.alpha_n + tol) {
                best = std::min(best, b);
            }
        }
        const double violation = lvl.errors.beta_n - best;
        rep.max_violation = std::max(rep.max_violation, violation);
        if (violation > tol) {
            ++rep.counterexamples;
        }
    }
    return rep;
}

struct MonteCarloEstimate {
    double estimate;
    double std_error;
    std::size_t trials;
};

/// Fraction of `trials` i.i.d. q-samples of length n accepted (S_n <= eta).
/// Trial i draws from derive_seed(seed, "mc-beta", i).
inline MonteCarloEstimate monte_carlo_beta(const ClassicalDistribution &p,
                                           const ClassicalDistribution &q, std::size_t n,
                                           double eta, std::size_t trials, std::uint64_t seed) {
    const NPTest test(p, q, eta);
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const SampleSequence s = sample_iid(q, n, derive_seed(seed, "mc-beta", i));
        if (np_decide(s, test) == 0) {
            ++accepted;
        }
    }
    const double f = static_cast<double>(accepted) / static_cast<double>(trials);
    return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(trials)), trials};
}

// --- Sanov -------------------------------------------------------------------

enum class Relation { ge, le, gt, lt };

inline const char *to_string(Relation r) {
    switch (r) {
    case Relation::ge:
        return ">=";
    case Relation::le:
        return "<=";
    case Relation::gt:
        return ">";
    case Relation::lt:
        return "<";
    }
    return "?";
}

struct LinearConstraint {
    std::vector<double> coefficients;
    double bound = 0.0;
    Relation relation = Relation::ge;
};

/// Which version of a half-space event to evaluate: as given, its closure
/// (every constraint weak) or its interior (every constraint strict).
enum class EventForm { as_given, closure, interior };

/// Conjunction of half-space constraints c . nu (rel) tau on the type simplex.
class SanovEvent {
  public:
    explicit SanovEvent(std::vector<LinearConstraint> constraints)
        : constraints_(std::move(constraints)) {
        if (constraints_.empty()) {
            throw ValidationError("SanovEvent: at least one constraint required");
        }
        for (const auto &c : constraints_) {
            if (c.coefficients.size() != constraints_.front().coefficients.size()) {
                throw ValidationError("SanovEvent: constraint lengths differ");
            }
        }
    }
    [[nodiscard]] std::size_t alphabet_size() const noexcept {
        return constraints_.front().coefficients.size();
    }
    [[nodiscard]] const std::vector<LinearConstraint> &constraints() const noexcept {
        return constraints_;
    }

    /// Weak constraints hold up to 1e-12; strict ones need a 1e-12 margin.
    [[nodiscard]] bool contains(std::span<const double> nu, EventForm form = EventForm::as_given) const {
        constexpr double tol = 1e-12;
        for (const auto &c : constraints_) {
            double v = 0.0;
            for (std::size_t k = 0; k < nu.size(); ++k) {
                v += c.coefficients[k] * nu[k];
            }
            const double d = v - c.bound;
            Relation rel = c.relation;
            if (form == EventForm::closure) {
                rel = (rel == Relation::gt) ? Relation::ge : (rel == Relation::lt ? Relation::le : rel);
            } else if (form == EventForm::interior) {
                rel = (rel == Relation::ge) ? Relation::gt : (rel == Relation::le ? Relation::lt : rel);
            }
            bool ok = false;
            switch (rel) {
            case Relation::ge:
                ok = d >= -tol;
                break;
            case Relation::le:
                ok = d <= tol;
                break;
            case Relation::gt:
                ok = d > tol;
                break;
            case Relation::lt:
                ok = d < -tol;
                break;
            }
            if (!ok) {
                return false;
            }
        }
        return true;
    }

  private:
    std::vector<LinearConstraint> constraints_;
};

/// ln P_p(L_n in event), exact over type classes; -inf for an empty event.
inline double sanov_q_n_exact(const ClassicalDistribution &p, std::size_t n,
                              const SanovEvent &event, EventForm form = EventForm::as_given) {
    if (event.alphabet_size() != p.size()) {
        throw ValidationError("sanov_q_n_exact: event and distribution alphabets differ");
    }
    if (n == 0) {
        throw ValidationError("sanov_q_n_exact: n must be positive");
    }
    require_type_guard(p.size(), n, "sanov_q_n_exact");
    double acc = kNegInf;
    std::vector<double> nu(p.size());
    for_each_type(p.size(), n, [&](std::span<const std::size_t> counts) {
        for (std::size_t k = 0; k < counts.size(); ++k) {
            nu[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
        }
        if (event.contains(nu, form)) {
            acc = log_add(acc, log_type_probability(counts, p));
        }
    });
    return acc;
}

/// inf { KL(nu || p) : nu in event } by a simplex grid of spacing 1/resolution
/// followed by 20 rounds of pairwise mass-transfer refinement with a halving
/// step. INFINITY when no feasible point with finite divergence is found.
inline ExtendedReal sanov_rate(const ClassicalDistribution &p, const SanovEvent &event,
                               EventForm form = EventForm::as_given,
                               std::size_t resolution = 200) {
    const std::size_t k_size = p.size();
    if (event.alphabet_size() != k_size) {
        throw ValidationError("sanov_rate: event and distribution alphabets differ");
    }
    if (type_class_count(k_size, resolution) > kTypeClassGuard) {
        throw CapacityError("alphabet_size", "sanov_rate: simplex grid too large");
    }
    const auto objective = [&](std::span<const double> nu) {
        double s = 0.0;
        for (std::size_t k = 0; k < k_size; ++k) {
            if (nu[k] <= 0.0) {
                continue;
            }
            if (!p.in_support(k)) {
                return kPosInf;
            }
            s += nu[k] * std::log(nu[k] / p[k]);
        }
        return s;
    };

    std::vector<double> best_nu;
    double best = kPosInf;
    std::vector<double> nu(k_size);
    for_each_type(k_size, resolution, [&](std::span<const std::size_t> counts) {
        for (std::size_t k = 0; k < k_size; ++k) {
            nu[k] = static_cast<double>(counts[k]) / static_cast<double>(resolution);
        }
        if (!event.contains(nu, form)) {
            return;
        }
        const double v = objective(nu);
        if (v < best) {
            best = v;
            best_nu = nu;
        }
    });
    if (best == kPosInf) {
        return ExtendedReal::infinity();
    }

    double step = 1.0 / static_cast<double>(resolution);
    for (int round = 0; round < 20; ++round) {
        bool improved = true;
        for (int iter = 0; improved && iter < 1000; ++iter) {
            improved = false;
            for (std::size_t i = 0; i < k_size; ++i) {
                for (std::size_t j = 0; j < k_size; ++j) {
                    if (i == j || best_nu[i] <= 0.0) {
                        continue;
                    }
                    std::vector<double> cand = best_nu;
                    const double move = std::min(step, cand[i]);
                    cand[i] -= move;
                    cand[j] += move;
                    if (!event.contains(cand, form)) {
                        continue;
                    }
                    const double v = objective(cand);
                    if (v < best) {
                        best = v;
                        best_nu = std::move(cand);
                        improved = true;
                    }
                }
            }
        }
        step /= 2.0;
    }
    return ExtendedReal::finite(best);
}

/// ln of the minimal Bayes risk pi1 alpha_n + pi2 beta_n over all tests,
/// attained by the MAP rule on each type class.
inline double bayes_error_exact(const ClassicalDistribution &p, const ClassicalDistribution &q,
                                double pi1, double pi2, std::size_t n) {
    detail::require_same_alphabet(p, q, "bayes_error_exact");
    if (!(pi1 > 0.0 && pi2 > 0.0) || std::abs(pi1 + pi2 - 1.0) > 1e-12) {
        throw ValidationError("bayes_error_exact: priors must be positive and sum to 1");
    }
    if (n == 0) {
        throw ValidationError("bayes_error_exact: n must be positive");
    }
    require_type_guard(p.size(), n, "bayes_error_exact");
    const double l1 = std::log(pi1);
    const double l2 = std::log(pi2);
    double acc = kNegInf;
    for_each_type(p.size(), n, [&](std::span<const std::size_t> counts) {
        acc = log_add(acc, std::min(l1 + log_type_probability(counts, p),
                                    l2 + log_type_probability(counts, q)));
    });
    return acc;
}

} // namespace qlab
