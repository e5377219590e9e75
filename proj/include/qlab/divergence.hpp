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
 * @file divergence.hpp
 * Classical and quantum relative entropies, alpha-divergences, the overlap
 * F_t and Chernoff exponents. All logarithms are natural (nats).
 *
 * Alpha convention: D^(alpha)(mu || nu) with mu <-> first argument. The
 * alpha = -1 branch is KL(mu || nu), the alpha = +1 branch is KL(nu || mu),
 * and |alpha| < 1 uses the overlap sum p^{(1-alpha)/2} q^{(1+alpha)/2}.
 */
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "extended_real.hpp"
#include "matcore.hpp"

namespace qlab {

namespace detail {

inline void require_same_alphabet(const ClassicalDistribution &p, const ClassicalDistribution &q,
                                  const char *op) {
    if (p.size() != q.size()) {
        throw ValidationError(std::string(op) + ": alphabet sizes " + std::to_string(p.size()) +
                              " and " + std::to_string(q.size()) + " differ");
    }
}

inline void require_same_dim(const DensityMatrix &rho, const DensityMatrix &sigma, const char *op) {
    if (rho.dim() != sigma.dim()) {
        throw ValidationError(std::string(op) + ": dimensions " + std::to_string(rho.dim()) +
                              " and " + std::to_string(sigma.dim()) + " differ");
    }
}

inline void require_alpha(double alpha, const char *op) {
    if (!(alpha >= -1.0 && alpha <= 1.0)) {
        throw ValidationError(std::string(op) + ": alpha must lie in [-1, 1]");
    }
}

inline void require_t(double t, const char *op) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ValidationError(std::string(op) + ": t must lie in [0, 1]");
    }
}

/// Overlap above 1 + 1e-10 is an error; the rest is clipped to [0, 1].
inline double clip_overlap(double overlap, const char *op) {
    if (overlap > 1.0 + kStateTol) {
        throw NumericalError(std::string(op) + ": overlap " + std::to_string(overlap) +
                             " exceeds 1");
    }
    return std::clamp(overlap, 0.0, 1.0);
}

inline ExtendedReal alpha_from_overlap(double overlap, double alpha) {
    return ExtendedReal::finite(4.0 / (1.0 - alpha * alpha) * (1.0 - overlap));
}

} // namespace detail

/// True iff supp p is contained in supp q.
inline bool absolutely_continuous(const ClassicalDistribution &p, const ClassicalDistribution &q) {
    detail::require_same_alphabet(p, q, "absolutely_continuous");
    for (std::size_t k : p.support()) {
        if (!q.in_support(k)) {
            return false;
        }
    }
    return true;
}

/// Kullback-Leibler divergence sum_{k in supp p} p_k ln(p_k / q_k).
inline ExtendedReal kl(const ClassicalDistribution &p, const ClassicalDistribution &q) {
    detail::require_same_alphabet(p, q, "kl");
    double sum = 0.0;
    for (std::size_t k : p.support()) {
        if (!q.in_support(k)) {
            return ExtendedReal::infinity();
        }
        sum += p[k] * std::log(p[k] / q[k]);
    }
    return ExtendedReal::finite(sum);
}

inline ExtendedReal classical_alpha_div(const ClassicalDistribution &p,
                                        const ClassicalDistribution &q, double alpha) {
    detail::require_same_alphabet(p, q, "classical_alpha_div");
    detail::require_alpha(alpha, "classical_alpha_div");
    if (alpha == -1.0) {
        return kl(p, q);
    }
    if (alpha == 1.0) {
        return kl(q, p);
    }
    const double a = (1.0 - alpha) / 2.0;
    const double b = (1.0 + alpha) / 2.0;
    double overlap = 0.0;
    for (std::size_t k : p.support()) {
        if (q.in_support(k)) {
            overlap += std::pow(p[k], a) * std::pow(q[k], b);
        }
    }
    return detail::alpha_from_overlap(detail::clip_overlap(overlap, "classical_alpha_div"), alpha);
}

/// sum_k p_k^{1-t} q_k^t over supp p and supp q jointly (0^0 counts as 0), so
/// F_0 is the p-mass on supp q and F_1 the q-mass on supp p.
inline double classical_f_t(const ClassicalDistribution &p, const ClassicalDistribution &q,
                            double t) {
    detail::require_same_alphabet(p, q, "classical_f_t");
    detail::require_t(t, "classical_f_t");
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!p.in_support(k) || !q.in_support(k)) {
            continue;
        }
        sum += std::pow(p[k], 1.0 - t) * std::pow(q[k], t);
    }
    return sum;
}

/// True iff supp rho is contained in supp sigma, i.e. rho puts no weight on
/// the kernel of sigma.
inline bool support_contained(const DensityMatrix &rho, const DensityMatrix &sigma) {
    detail::require_same_dim(rho, sigma, "support_contained");
    const CMatrix ker = kernel_projector(sigma.spectrum());
    return (rho.matrix() * ker).trace().real() <= kSupportTol;
}

/// tr(rho ln rho) - tr(rho ln sigma), INFINITY when supp rho is not inside
/// supp sigma. Logarithms act on supports only.
inline ExtendedReal quantum_relative_entropy(const DensityMatrix &rho, const DensityMatrix &sigma) {
    detail::require_same_dim(rho, sigma, "quantum_relative_entropy");
    if (!support_contained(rho, sigma)) {
        return ExtendedReal::infinity();
    }
    double entropy_term = 0.0;
    for (Eigen::Index k = 0; k < rho.spectrum().eigenvalues.size(); ++k) {
        const double lambda = rho.spectrum().eigenvalues(k);
        if (lambda > kSupportTol) {
            entropy_term += lambda * std::log(lambda);
        }
    }
    const CMatrix log_sigma =
        support_function(sigma.spectrum(), [](double x) { return std::log(x); });
    const double cross_term = (rho.matrix() * log_sigma).trace().real();
    return ExtendedReal::finite(entropy_term - cross_term);
}

/// tr(rho^{1-t} sigma^t) with support-restricted powers.
inline double quantum_f_t(const DensityMatrix &rho, const DensityMatrix &sigma, double t) {
    detail::require_same_dim(rho, sigma, "quantum_f_t");
    detail::require_t(t, "quantum_f_t");
    const CMatrix a = support_function(rho.spectrum(), [t](double x) { return std::pow(x, 1.0 - t); });
    const CMatrix b = support_function(sigma.spectrum(), [t](double x) { return std::pow(x, t); });
    return detail::clip_overlap((a * b).trace().real(), "quantum_f_t");
}

inline ExtendedReal quantum_alpha_div(const DensityMatrix &rho, const DensityMatrix &sigma,
                                      double alpha) {
    detail::require_same_dim(rho, sigma, "quantum_alpha_div");
    detail::require_alpha(alpha, "quantum_alpha_div");
    if (alpha == -1.0) {
        return quantum_relative_entropy(rho, sigma);
    }
    if (alpha == 1.0) {
        return quantum_relative_entropy(sigma, rho);
    }
    // tr(rho^{(1-alpha)/2} sigma^{(1+alpha)/2}) = F_t at t = (1+alpha)/2.
    return detail::alpha_from_overlap(quantum_f_t(rho, sigma, (1.0 + alpha) / 2.0), alpha);
}

struct ChernoffResult {
    double t_star;
    double exponent; // inf_t log F_t, <= 0 (may be -inf)
};

/// Minimizes log F(t) over [0, 1] by golden-section search down to a bracket
/// of width tol, then compares against both endpoints. Ties between equal
/// probes shrink the bracket from both sides; endpoint ties go to smaller t.
inline ChernoffResult chernoff_exponent(const std::function<double(double)> &f_t,
                                        double tol = 1e-10) {
    const auto log_f = [&](double t) {
        const double v = f_t(t);
        if (!(v > 0.0)) {
            throw NumericalError("chernoff_exponent: F_t is not positive at t = " +
                                 std::to_string(t));
        }
        return std::log(v);
    };
    if (!(f_t(0.5) > 0.0)) {
        // Disjoint supports: F_t vanishes on (0, 1) and the exponent is -inf.
        return {0.5, -std::numeric_limits<double>::infinity()};
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = 1.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = log_f(c);
    double fd = log_f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = log_f(c);
        } else if (fc > fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = log_f(d);
        } else {
            a = c;
            b = d;
            c = b - inv_phi * (b - a);
            d = a + inv_phi * (b - a);
            fc = log_f(c);
            fd = log_f(d);
        }
    }
    ChernoffResult best{(a + b) / 2.0, 0.0};
    best.exponent = log_f(best.t_star);

    const auto endpoint = [&](double t) {
        const double v = f_t(t);
        return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    };
    const double f0 = endpoint(0.0);
    const double f1 = endpoint(1.0);
    if (f1 < best.exponent && f1 < f0) {
        best = {1.0, f1};
    }
    if (f0 < best.exponent && f0 <= f1) {
        best = {0.0, f0};
    }
    return best;
}

/// Quantum vs measured divergence for one measurement.
struct HotReport {
    ExtendedReal quantum;
    ExtendedReal measured;
    DivergenceGap gap; // quantum - measured
};

/// alpha = -1 uses the relative entropy S(rho || sigma); other alphas use the
/// quantum alpha-divergence. The measured side is the classical divergence of
/// the two Born distributions.
inline HotReport hot_report(const DensityMatrix &rho, const DensityMatrix &sigma,
                            const Measurement &m, double alpha) {
    detail::require_same_dim(rho, sigma, "hot_report");
    const ExtendedReal quantum =
        alpha == -1.0 ? quantum_relative_entropy(rho, sigma) : quantum_alpha_div(rho, sigma, alpha);
    const ExtendedReal measured =
        classical_alpha_div(born_distribution(rho, m), born_distribution(sigma, m), alpha);
    return {quantum, measured, DivergenceGap::between(quantum, measured)};
}

} // namespace qlab
