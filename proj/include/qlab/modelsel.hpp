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
 * @file modelsel.hpp
 * Parametric models on a finite parameter grid, escort posteriors,
 * predictive distributions, information criteria (AIC, WAIC) and the exact
 * alpha-risk of predictive rules.
 *
 * Integrals over the parameter space are quadrature sums over a ParamGrid
 * with positive cell weights. A prior is a density on the grid, normalized
 * so that sum_theta prior[theta] * weight[theta] = 1.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "divergence.hpp"
#include "largedev.hpp"
#include "matcore.hpp"

namespace qlab {

class ParamGrid {
  public:
    /// Points in a box of the given volume; weights must be positive and sum
    /// to the volume within 1e-9.
    ParamGrid(std::size_t dim_theta, std::vector<std::vector<double>> points,
              std::vector<double> weights, double volume)
        : dim_theta_(dim_theta), points_(std::move(points)), weights_(std::move(weights)),
          volume_(volume) {
        if (points_.empty()) {
            throw ValidationError("ParamGrid: at least one grid point required");
        }
        if (points_.size() != weights_.size()) {
            throw ValidationError("ParamGrid: point and weight counts differ");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (points_[i].size() != dim_theta_) {
                throw ValidationError("ParamGrid: point " + std::to_string(i) +
                                      " has the wrong dimension");
            }
            if (!(weights_[i] > 0.0)) {
                throw ValidationError("ParamGrid: weights must be positive");
            }
            sum += weights_[i];
        }
        if (std::abs(sum - volume_) > 1e-9) {
            throw ValidationError("ParamGrid: weights sum to " + std::to_string(sum) +
                                  ", box volume is " + std::to_string(volume_));
        }
    }

    /// count equal cells of [lo, hi], one point at each cell midpoint.
    static ParamGrid midpoint_1d(double lo, double hi, std::size_t count) {
        if (!(hi > lo) || count == 0) {
            throw ValidationError("ParamGrid::midpoint_1d: need lo < hi and count > 0");
        }
        const double w = (hi - lo) / static_cast<double>(count);
        std::vector<std::vector<double>> pts;
        for (std::size_t i = 0; i < count; ++i) {
            pts.push_back({lo + (static_cast<double>(i) + 0.5) * w});
        }
        return ParamGrid(1, std::move(pts), std::vector<double>(count, w), hi - lo);
    }

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::size_t dim_theta() const noexcept { return dim_theta_; }
    [[nodiscard]] double volume() const noexcept { return volume_; }
    [[nodiscard]] const std::vector<std::vector<double>> &points() const noexcept { return points_; }
    [[nodiscard]] const std::vector<double> &weights() const noexcept { return weights_; }

  private:
    std::size_t dim_theta_;
    std::vector<std::vector<double>> points_;
    std::vector<double> weights_;
    double volume_;
};

/// Constant density 1 / volume.
inline std::vector<double> uniform_prior(const ParamGrid &grid) {
    return std::vector<double>(grid.size(), 1.0 / grid.volume());
}

/// Density concentrated on one grid point (1 / weight there, 0 elsewhere).
inline std::vector<double> point_mass_prior(const ParamGrid &grid, std::size_t index) {
    std::vector<double> prior(grid.size(), 0.0);
    prior.at(index) = 1.0 / grid.weights()[index];
    return prior;
}

struct QuantumModel {
    QuantumModel(ParamGrid g, std::vector<DensityMatrix> s, std::size_t d)
        : grid(std::move(g)), states(std::move(s)), model_dim(d) {
        if (states.size() != grid.size()) {
            throw ValidationError("QuantumModel: one state per grid point required");
        }
        for (const auto &st : states) {
            if (st.dim() != states.front().dim()) {
                throw ValidationError("QuantumModel: states of different dimensions");
            }
        }
    }
    ParamGrid grid;
    std::vector<DensityMatrix> states;
    std::size_t model_dim;
};

/// Outcome distributions of a model under one measurement.
struct InducedModel {
    InducedModel(ParamGrid g, std::vector<ClassicalDistribution> d, std::size_t dim)
        : grid(std::move(g)), dists(std::move(d)), model_dim(dim) {
        if (dists.size() != grid.size()) {
            throw ValidationError("InducedModel: one distribution per grid point required");
        }
        for (const auto &p : dists) {
            if (p.size() != dists.front().size()) {
                throw ValidationError("InducedModel: distributions over different alphabets");
            }
        }
    }
    [[nodiscard]] std::size_t alphabet_size() const { return dists.front().size(); }

    ParamGrid grid;
    std::vector<ClassicalDistribution> dists;
    std::size_t model_dim;
};

inline InducedModel induce_model(const QuantumModel &qm, const Measurement &m) {
    std::vector<ClassicalDistribution> dists;
    dists.reserve(qm.states.size());
    for (const auto &st : qm.states) {
        dists.push_back(born_distribution(st, m));
    }
    return InducedModel(qm.grid, std::move(dists), qm.model_dim);
}

/// The binary family (theta, 1 - theta) on a one-dimensional grid.
inline InducedModel binary_family(const ParamGrid &grid, std::size_t model_dim = 1) {
    std::vector<ClassicalDistribution> dists;
    for (const auto &pt : grid.points()) {
        dists.push_back(ClassicalDistribution{pt.at(0), 1.0 - pt.at(0)});
    }
    return InducedModel(grid, std::move(dists), model_dim);
}

struct SupportViolation {
    std::size_t model_index;
    std::size_t grid_index;
    std::vector<std::size_t> support;
    std::vector<std::size_t> expected_support; // the most common support in the model
};

struct PredictiveValidation {
    bool ok = true;
    std::vector<SupportViolation> violations;
};

/// Each model must have the same outcome support at every grid point. The
/// counting measure dominates everything on a finite alphabet, so that part
/// of the condition always holds.
inline PredictiveValidation
validate_predictive_measurement(std::span<const InducedModel> models) {
    PredictiveValidation out;
    for (std::size_t m = 0; m < models.size(); ++m) {
        if (models[m].alphabet_size() != models.front().alphabet_size()) {
            throw ValidationError("validate_predictive_measurement: models use different alphabets");
        }
        std::map<std::vector<std::size_t>, std::size_t> freq;
        for (const auto &p : models[m].dists) {
            ++freq[p.support()];
        }
        const auto mode = std::max_element(freq.begin(), freq.end(), [](const auto &a, const auto &b) {
            return a.second < b.second;
        });
        for (std::size_t g = 0; g < models[m].dists.size(); ++g) {
            if (models[m].dists[g].support() != mode->first) {
                out.ok = false;
                out.violations.push_back({m, g, models[m].dists[g].support(), mode->first});
            }
        }
    }
    return out;
}

namespace detail {

inline void require_theta(const InducedModel &im, std::size_t theta) {
    if (theta >= im.grid.size()) {
        throw ValidationError("grid index " + std::to_string(theta) + " out of range");
    }
}

inline void require_data(const InducedModel &im, std::span<const std::size_t> data) {
    for (std::size_t x : data) {
        if (x >= im.alphabet_size()) {
            throw ValidationError("observation " + std::to_string(x) + " outside the alphabet");
        }
    }
}

inline void require_prior(const InducedModel &im, std::span<const double> prior) {
    if (prior.size() != im.grid.size()) {
        throw ValidationError("prior length differs from grid size");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
        if (!(prior[i] >= 0.0)) {
            throw ValidationError("prior density must be nonnegative");
        }
        mass += prior[i] * im.grid.weights()[i];
    }
    if (std::abs(mass - 1.0) > 1e-9) {
        throw ValidationError("prior integrates to " + std::to_string(mass) + " over the grid");
    }
}

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

} // namespace detail

/// sum_i ln p_theta(x_i); -inf when an observation lies outside the support.
inline double log_likelihood(const InducedModel &im, std::size_t theta,
                             std::span<const std::size_t> data) {
    detail::require_theta(im, theta);
    detail::require_data(im, data);
    const ClassicalDistribution &p = im.dists[theta];
    double s = 0.0;
    for (std::size_t x : data) {
        if (!p.in_support(x)) {
            return kNegInf;
        }
        s += std::log(p[x]);
    }
    return s;
}

/// Grid argmax of the likelihood; ties go to the smallest index.
inline std::size_t mle(const InducedModel &im, std::span<const std::size_t> data) {
    std::size_t best = 0;
    double best_ll = log_likelihood(im, 0, data);
    for (std::size_t t = 1; t < im.grid.size(); ++t) {
        const double ll = log_likelihood(im, t, data);
        if (ll > best_ll) {
            best_ll = ll;
            best = t;
        }
    }
    return best;
}

/// Posterior density on the grid: sum_theta weights[theta] * cell[theta] = 1.
struct PosteriorWeights {
    std::vector<double> weights;
    double beta;
};

/// weights[theta] proportional to exp(beta * loglik(theta)) * prior[theta],
/// normalized against the grid quadrature in the log domain.
inline PosteriorWeights escort_posterior(const InducedModel &im, std::span<const double> prior,
                                         double beta, std::span<const std::size_t> data) {
    if (!(beta > 0.0)) {
        throw ValidationError("escort_posterior: beta must be positive");
    }
    detail::require_prior(im, prior);
    const std::size_t size = im.grid.size();
    std::vector<double> log_w(size);
    double log_z = kNegInf;
    for (std::size_t t = 0; t < size; ++t) {
        const double lp = detail::safe_log(prior[t]);
        const double ll = log_likelihood(im, t, data);
        log_w[t] = (lp == kNegInf || ll == kNegInf) ? kNegInf : beta * ll + lp;
        log_z = log_add(log_z, log_w[t] + std::log(im.grid.weights()[t]));
    }
    if (log_z == kNegInf) {
        throw DegeneratePosteriorError("escort_posterior: every posterior weight vanished");
    }
    PosteriorWeights post{std::vector<double>(size), beta};
    for (std::size_t t = 0; t < size; ++t) {
        post.weights[t] = std::exp(log_w[t] - log_z);
    }
    return post;
}

/// Posterior average of g(theta) under the grid quadrature.
inline double posterior_expectation(const ParamGrid &grid, const PosteriorWeights &post,
                                    const std::function<double(std::size_t)> &g) {
    double s = 0.0;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const double w = post.weights[t] * grid.weights()[t];
        if (w > 0.0) {
            s += w * g(t);
        }
    }
    return s;
}

struct PredictiveDistribution {
    ClassicalDistribution probs;
    double normalizer = 1.0; // C; 1 for mixture predictives
};

/// Posterior mixture sum_theta p_theta * posterior[theta] * cell[theta].
inline PredictiveDistribution escort_predictive(const InducedModel &im,
                                                std::span<const double> prior, double beta,
                                                std::span<const std::size_t> data) {
    const PosteriorWeights post = escort_posterior(im, prior, beta, data);
    std::vector<double> probs(im.alphabet_size(), 0.0);
    for (std::size_t t = 0; t < im.grid.size(); ++t) {
        const double w = post.weights[t] * im.grid.weights()[t];
        for (std::size_t k = 0; k < probs.size(); ++k) {
            probs[k] += w * im.dists[t][k];
        }
    }
    double sum = 0.0;
    for (double v : probs) {
        sum += v;
    }
    for (double &v : probs) {
        v /= sum;
    }
    return {ClassicalDistribution(std::move(probs)), 1.0};
}

/// sum_i ( <(ln p_theta(x_i))^2> - <ln p_theta(x_i)>^2 ) under the escort posterior.
inline double functional_variance(const InducedModel &im, std::span<const double> prior,
                                  double beta, std::span<const std::size_t> data) {
    if (data.empty()) {
        throw ValidationError("functional_variance: at least one observation required");
    }
    const PosteriorWeights post = escort_posterior(im, prior, beta, data);
    double total = 0.0;
    for (std::size_t x : data) {
        double m1 = 0.0;
        double m2 = 0.0;
        for (std::size_t t = 0; t < im.grid.size(); ++t) {
            const double w = post.weights[t] * im.grid.weights()[t];
            if (w <= 0.0) {
                continue;
            }
            const double l = std::log(im.dists[t][x]);
            m1 += w * l;
            m2 += w * l * l;
        }
        total += std::max(0.0, m2 - m1 * m1);
    }
    return total;
}

/// -(1/n) sum_i ln p_mle(x_i) + d / n.
inline double aic(const InducedModel &im, std::span<const std::size_t> data) {
    if (data.empty()) {
        throw ValidationError("aic: at least one observation required");
    }
    const double n = static_cast<double>(data.size());
    return -log_likelihood(im, mle(im, data), data) / n + static_cast<double>(im.model_dim) / n;
}

/// -(1/n) sum_i ln p_pred(x_i) + (beta / n) V, with the escort predictive.
inline double waic(const InducedModel &im, std::span<const double> prior, double beta,
                   std::span<const std::size_t> data) {
    if (data.empty()) {
        throw ValidationError("waic: at least one observation required");
    }
    const PredictiveDistribution pred = escort_predictive(im, prior, beta, data);
    const double n = static_cast<double>(data.size());
    double train = 0.0;
    for (std::size_t x : data) {
        train -= detail::safe_log(pred.probs[x]);
    }
    return train / n + beta / n * functional_variance(im, prior, beta, data);
}

/// Index of the smallest criterion value; ties go to the smallest index.
inline std::size_t select_model(std::span<const double> criteria) {
    if (criteria.empty()) {
        throw ValidationError("select_model: no criteria given");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < criteria.size(); ++i) {
        if (criteria[i] < criteria[best]) {
            best = i;
        }
    }
    return best;
}

/// Bayesian alpha-predictive distribution with the beta = 1 posterior:
///   alpha != 1: p(k) = ( sum_theta p_theta(k)^{(1-alpha)/2} w_theta )^{2/(1-alpha)}
///   alpha == 1: p(k) = exp( sum_theta w_theta ln p_theta(k) )
/// normalized by C = sum_k p(k), which is stored alongside.
inline PredictiveDistribution alpha_predictive(const InducedModel &im,
                                               std::span<const double> prior, double alpha,
                                               std::span<const std::size_t> data) {
    detail::require_alpha(alpha, "alpha_predictive");
    const PosteriorWeights post = escort_posterior(im, prior, 1.0, data);
    const std::size_t k_size = im.alphabet_size();
    std::vector<double> unnorm(k_size, 0.0);
    for (std::size_t k = 0; k < k_size; ++k) {
        if (alpha == 1.0) {
            double s = 0.0;
            bool zero = false;
            for (std::size_t t = 0; t < im.grid.size(); ++t) {
                const double w = post.weights[t] * im.grid.weights()[t];
                if (w <= 0.0) {
                    continue;
                }
                if (!im.dists[t].in_support(k)) {
                    zero = true;
                    break;
                }
                s += w * std::log(im.dists[t][k]);
            }
            unnorm[k] = zero ? 0.0 : std::exp(s);
        } else {
            const double a = (1.0 - alpha) / 2.0;
            double s = 0.0;
            for (std::size_t t = 0; t < im.grid.size(); ++t) {
                const double w = post.weights[t] * im.grid.weights()[t];
                if (w > 0.0 && im.dists[t].in_support(k)) {
                    s += w * std::pow(im.dists[t][k], a);
                }
            }
            unnorm[k] = std::pow(s, 1.0 / a);
        }
    }
    double c = 0.0;
    for (double v : unnorm) {
        c += v;
    }
    if (!(c > 0.0)) {
        throw DegeneratePosteriorError("alpha_predictive: normalizer vanished");
    }
    for (double &v : unnorm) {
        v /= c;
    }
    return {ClassicalDistribution(std::move(unnorm)), c};
}

/// Convex combination sum_k w_k rho_k.
inline DensityMatrix barycenter_state(std::span<const std::pair<double, DensityMatrix>> family) {
    if (family.empty()) {
        throw ValidationError("barycenter_state: empty family");
    }
    const auto n = static_cast<Eigen::Index>(family.front().second.dim());
    CMatrix sum = CMatrix::Zero(n, n);
    double wsum = 0.0;
    for (const auto &[w, rho] : family) {
        if (!(w >= 0.0)) {
            throw ValidationError("barycenter_state: negative weight");
        }
        if (static_cast<Eigen::Index>(rho.dim()) != n) {
            throw ValidationError("barycenter_state: states of different dimensions");
        }
        sum += w * rho.matrix();
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > kStateTol) {
        throw ValidationError("barycenter_state: weights sum to " + std::to_string(wsum));
    }
    return DensityMatrix(sum);
}

/// A predictive rule maps an observed sequence to a distribution.
using PredictiveRule = std::function<ClassicalDistribution(std::span<const std::size_t>)>;

/// Upper bound on K^n for exact risk enumeration.
inline constexpr std::size_t kSequenceGuard = 1000000;

/// Exact Bayes risk sum_theta sum_{x^n} D^(alpha)(p_theta || rule(x^n))
///   * prod_i p_theta(x_i) * prior[theta] * cell[theta]
/// over all K^n sequences. +inf when an infinite divergence carries weight.
inline double risk_alpha(const InducedModel &im, std::span<const double> prior,
                         const PredictiveRule &rule, double alpha, std::size_t n) {
    detail::require_prior(im, prior);
    detail::require_alpha(alpha, "risk_alpha");
    const std::size_t k_size = im.alphabet_size();
    std::size_t sequences = 1;
    for (std::size_t i = 0; i < n; ++i) {
        sequences *= k_size;
        if (sequences > kSequenceGuard) {
            throw CapacityError("n", "risk_alpha: K^n exceeds " + std::to_string(kSequenceGuard));
        }
    }
    std::vector<std::size_t> seq(n);
    double risk = 0.0;
    for (std::size_t code = 0; code < sequences; ++code) {
        std::size_t c = code;
        for (std::size_t i = n; i-- > 0;) {
            seq[i] = c % k_size;
            c /= k_size;
        }
        const ClassicalDistribution pred = rule(seq);
        for (std::size_t t = 0; t < im.grid.size(); ++t) {
            const double lw = log_likelihood(im, t, seq);
            const double w = prior[t] * im.grid.weights()[t];
            if (lw == kNegInf || w <= 0.0) {
                continue;
            }
            const ExtendedReal d = classical_alpha_div(im.dists[t], pred, alpha);
            if (d.is_infinite()) {
                return kPosInf;
            }
            risk += d.value() * std::exp(lw) * w;
        }
    }
    return risk;
}

/// Plug-in of the grid MLE.
inline PredictiveRule mle_plugin_rule(const InducedModel &im) {
    return [&im](std::span<const std::size_t> data) { return im.dists[mle(im, data)]; };
}

/// Plug-in at the posterior mean of the first coordinate of theta. `family`
/// maps that mean back to a distribution; when empty the grid point nearest
/// the mean is used instead.
inline PredictiveRule posterior_mean_rule(const InducedModel &im, std::vector<double> prior,
                                          std::function<ClassicalDistribution(double)> family = {}) {
    return [&im, prior = std::move(prior), family = std::move(family)](
               std::span<const std::size_t> data) {
        const PosteriorWeights post = escort_posterior(im, prior, 1.0, data);
        const double mean = posterior_expectation(
            im.grid, post, [&](std::size_t t) { return im.grid.points()[t][0]; });
        if (family) {
            return family(mean);
        }
        std::size_t best = 0;
        for (std::size_t t = 1; t < im.grid.size(); ++t) {
            if (std::abs(im.grid.points()[t][0] - mean) <
                std::abs(im.grid.points()[best][0] - mean)) {
                best = t;
            }
        }
        return im.dists[best];
    };
}

/// The alpha-predictive as a rule.
inline PredictiveRule alpha_predictive_rule(const InducedModel &im, std::vector<double> prior,
                                            double alpha) {
    return [&im, prior = std::move(prior), alpha](std::span<const std::size_t> data) {
        return alpha_predictive(im, prior, alpha, data).probs;
    };
}

/// The beta escort predictive as a rule.
inline PredictiveRule escort_predictive_rule(const InducedModel &im, std::vector<double> prior,
                                             double beta) {
    return [&im, prior = std::move(prior), beta](std::span<const std::size_t> data) {
        return escort_predictive(im, prior, beta, data).probs;
    };
}

/// Wraps `base` with a per-sequence additive perturbation:
/// p_k + magnitude * u_k, u_k ~ U[-1, 1], clipped positive and renormalized.
/// The stream for each sequence derives from (seed, "perturb", sequence code),
/// so the rule is a deterministic function of the data.
inline PredictiveRule perturbed_rule(PredictiveRule base, std::size_t alphabet_size,
                                     double magnitude, std::uint64_t seed) {
    return [base = std::move(base), alphabet_size, magnitude,
            seed](std::span<const std::size_t> data) {
        std::uint64_t code = 1;
        for (std::size_t x : data) {
            code = code * alphabet_size + x;
        }
        std::mt19937_64 rng(derive_seed(seed, "perturb", code));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const ClassicalDistribution p = base(data);
        std::vector<double> out(p.size());
        double total = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            out[k] = std::max(p[k] + magnitude * u(rng), 1e-12);
            total += out[k];
        }
        for (double &v : out) {
            v /= total;
        }
        return ClassicalDistribution(std::move(out));
    };
}

} // namespace qlab
