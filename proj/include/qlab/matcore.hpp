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
 * @file matcore.hpp
 * Hermitian matrices, density matrices, measurements and the Born rule.
 *
 * All types validate their invariants on construction and are immutable
 * afterwards. Matrices are stored as dense Eigen complex matrices; the
 * eigendecomposition is a cyclic complex Jacobi sweep, which is accurate to
 * roundoff for the small dimensions (<= 16) this library targets.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace qlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Eigenvalues and probabilities at or below this are exact zeros.
inline constexpr double kSupportTol = 1e-12;
/// Elementwise Hermiticity tolerance.
inline constexpr double kHermitianTol = 1e-12;
/// Positivity and normalization tolerance for states, effects, distributions.
inline constexpr double kStateTol = 1e-10;

class HermitianMatrix {
  public:
    /// Validates squareness and Hermiticity (within kHermitianTol elementwise)
    /// and stores the exactly symmetrized matrix.
    explicit HermitianMatrix(const CMatrix &m) {
        if (m.rows() == 0 || m.rows() != m.cols()) {
            throw ValidationError("HermitianMatrix: matrix must be square and nonempty");
        }
        const double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (err > kHermitianTol) {
            throw ValidationError("HermitianMatrix: not Hermitian (max |H - H^dagger| = " +
                                  std::to_string(err) + ")");
        }
        m_ = (m + m.adjoint()) * 0.5;
    }

    static HermitianMatrix identity(std::size_t dim) {
        return HermitianMatrix(CMatrix::Identity(static_cast<Eigen::Index>(dim),
                                                 static_cast<Eigen::Index>(dim)));
    }
    static HermitianMatrix diagonal(std::span<const double> entries) {
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(entries.size()),
                                  static_cast<Eigen::Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
        }
        return HermitianMatrix(m);
    }
    static HermitianMatrix diagonal(std::initializer_list<double> entries) {
        return diagonal(std::span<const double>(entries.begin(), entries.size()));
    }
    /// Outer product |v><v| (v is not normalized).
    static HermitianMatrix projector(const CVector &v) { return HermitianMatrix(v * v.adjoint()); }

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    [[nodiscard]] double trace() const { return m_.trace().real(); }
    [[nodiscard]] double frobenius_norm() const { return m_.norm(); }

  private:
    CMatrix m_;
};

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
struct SpectralDecomposition {
    RVector eigenvalues;
    CMatrix eigenvectors;

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(eigenvalues.size());
    }
    [[nodiscard]] CMatrix reconstruct() const {
        return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
    }
};

namespace detail {

inline double off_diagonal_norm(const CMatrix &a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

} // namespace detail

/// Cyclic Jacobi eigendecomposition. Stops when the off-diagonal Frobenius
/// norm falls to 1e-13 * ||H||_F.
inline SpectralDecomposition eigh(const HermitianMatrix &h) {
    const Eigen::Index n = static_cast<Eigen::Index>(h.dim());
    CMatrix a = h.matrix();
    CMatrix v = CMatrix::Identity(n, n);
    const double target = 1e-13 * a.norm();
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) <= target) {
            break;
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0) {
                    continue;
                }
                // Phase e^{i phi} of a_pq; rotating column q by e^{-i phi} makes a_pq real.
                const Complex phase = a(p, q) / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex ph_conj = std::conj(phase);

                // A <- A G with G_pp = c, G_pq = s, G_qp = -s e^{-i phi}, G_qq = c e^{-i phi}
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s * ph_conj * akq;
                    a(k, q) = s * akp + c * ph_conj * akq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - s * ph_conj * vkq;
                    v(k, q) = s * vkp + c * ph_conj * vkq;
                }
                // A <- G^dagger A
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (detail::off_diagonal_norm(a) > std::max(target, 1e-10 * std::max(1.0, h.frobenius_norm()))) {
        throw NumericalError("eigh: Jacobi iteration did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() < a(j, j).real();
    });
    SpectralDecomposition out{RVector(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = a(src, src).real();
        out.eigenvectors.col(k) = v.col(src);
    }
    return out;
}

/// Sum of f(lambda_k) v_k v_k^dagger over the spectrum. Eigenvalues with
/// |lambda| <= support_tol are exact zeros: they contribute f(0) when that is
/// finite and nothing otherwise. A non-finite f at a retained eigenvalue is a
/// DomainError.
inline HermitianMatrix matrix_function(const SpectralDecomposition &sd,
                                       const std::function<double(double)> &f,
                                       double support_tol = kSupportTol) {
    const auto n = static_cast<Eigen::Index>(sd.dim());
    RVector values(n);
    std::optional<double> f_zero;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double lambda = sd.eigenvalues(k);
        if (std::abs(lambda) <= support_tol) {
            if (!f_zero) {
                const double z = f(0.0);
                f_zero = std::isfinite(z) ? z : 0.0;
            }
            values(k) = *f_zero;
            continue;
        }
        const double fx = f(lambda);
        if (!std::isfinite(fx)) {
            throw DomainError("matrix_function: f undefined at eigenvalue " +
                              std::to_string(lambda));
        }
        values(k) = fx;
    }
    const CMatrix m =
        sd.eigenvectors * values.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
    return HermitianMatrix((m + m.adjoint()) * 0.5);
}

inline HermitianMatrix matrix_function(const HermitianMatrix &h,
                                       const std::function<double(double)> &f,
                                       double support_tol = kSupportTol) {
    return matrix_function(eigh(h), f, support_tol);
}

/// f applied on the support only (eigenvalues > support_tol); kernel maps to 0.
/// With f = x^t this is the support-restricted power used by the divergences,
/// so that x^0 yields the support projector.
inline CMatrix support_function(const SpectralDecomposition &sd,
                                const std::function<double(double)> &f,
                                double support_tol = kSupportTol) {
    const auto n = static_cast<Eigen::Index>(sd.dim());
    RVector values = RVector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (sd.eigenvalues(k) > support_tol) {
            values(k) = f(sd.eigenvalues(k));
        }
    }
    return sd.eigenvectors * values.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
}

/// Projector onto the kernel (eigenvalues <= support_tol).
inline CMatrix kernel_projector(const SpectralDecomposition &sd,
                                double support_tol = kSupportTol) {
    const auto n = static_cast<Eigen::Index>(sd.dim());
    CMatrix p = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (sd.eigenvalues(k) <= support_tol) {
            p += sd.eigenvectors.col(k) * sd.eigenvectors.col(k).adjoint();
        }
    }
    return p;
}

/// Hermitian, PSD (eigenvalues >= -1e-10) and unit trace (within 1e-10).
/// Keeps its spectral decomposition.
class DensityMatrix {
  public:
    explicit DensityMatrix(HermitianMatrix m) : m_(std::move(m)), spec_(eigh(m_)) {
        if (spec_.eigenvalues(0) < -kStateTol) {
            throw ValidationError("DensityMatrix: negative eigenvalue " +
                                  std::to_string(spec_.eigenvalues(0)));
        }
        if (std::abs(m_.trace() - 1.0) > kStateTol) {
            throw ValidationError("DensityMatrix: trace " + std::to_string(m_.trace()) +
                                  " differs from 1");
        }
    }
    explicit DensityMatrix(const CMatrix &m) : DensityMatrix(HermitianMatrix(m)) {}

    static DensityMatrix maximally_mixed(std::size_t dim) {
        const auto n = static_cast<Eigen::Index>(dim);
        return DensityMatrix(CMatrix(CMatrix::Identity(n, n) / static_cast<double>(dim)));
    }
    /// |psi><psi| / <psi|psi>.
    static DensityMatrix pure(const CVector &psi) {
        const double nrm = psi.squaredNorm();
        if (nrm <= 0.0) {
            throw ValidationError("DensityMatrix::pure: zero vector");
        }
        return DensityMatrix(CMatrix(psi * psi.adjoint() / nrm));
    }
    static DensityMatrix diagonal(std::span<const double> probs) {
        return DensityMatrix(HermitianMatrix::diagonal(probs));
    }
    static DensityMatrix diagonal(std::initializer_list<double> probs) {
        return DensityMatrix(HermitianMatrix::diagonal(probs));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }
    [[nodiscard]] const HermitianMatrix &hermitian() const noexcept { return m_; }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return m_.matrix(); }
    [[nodiscard]] const SpectralDecomposition &spectrum() const noexcept { return spec_; }
    /// Number of eigenvalues above kSupportTol.
    [[nodiscard]] std::size_t rank() const {
        return static_cast<std::size_t>((spec_.eigenvalues.array() > kSupportTol).count());
    }

  private:
    HermitianMatrix m_;
    SpectralDecomposition spec_;
};

/// Finite list of PSD effects summing to the identity, with outcome labels.
class Measurement {
  public:
    Measurement(std::vector<HermitianMatrix> effects, std::vector<double> labels)
        : effects_(std::move(effects)), labels_(std::move(labels)) {
        if (effects_.empty()) {
            throw ValidationError("Measurement: at least one effect required");
        }
        if (labels_.size() != effects_.size()) {
            throw ValidationError("Measurement: label count differs from effect count");
        }
        const auto n = static_cast<Eigen::Index>(effects_.front().dim());
        CMatrix sum = CMatrix::Zero(n, n);
        for (std::size_t k = 0; k < effects_.size(); ++k) {
            if (static_cast<Eigen::Index>(effects_[k].dim()) != n) {
                throw ValidationError("Measurement: effects have different dimensions");
            }
            if (eigh(effects_[k]).eigenvalues(0) < -kStateTol) {
                throw ValidationError("Measurement: effect " + std::to_string(k) +
                                      " is not positive semidefinite");
            }
            sum += effects_[k].matrix();
        }
        const double err = (sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
        if (err > kStateTol) {
            throw ValidationError("Measurement: effects do not sum to identity (error " +
                                  std::to_string(err) + ")");
        }
    }
    /// Labels default to 0, 1, ..., K-1.
    explicit Measurement(std::vector<HermitianMatrix> effects)
        : Measurement(effects, default_labels(effects.size())) {}

    /// Rank-one PVM onto the columns of a unitary.
    static Measurement from_basis(const CMatrix &unitary) {
        std::vector<HermitianMatrix> effects;
        for (Eigen::Index k = 0; k < unitary.cols(); ++k) {
            effects.push_back(HermitianMatrix::projector(unitary.col(k)));
        }
        return Measurement(std::move(effects));
    }
    static Measurement computational_basis(std::size_t dim) {
        const auto n = static_cast<Eigen::Index>(dim);
        return from_basis(CMatrix::Identity(n, n));
    }

    [[nodiscard]] std::size_t size() const noexcept { return effects_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return effects_.front().dim(); }
    [[nodiscard]] const std::vector<HermitianMatrix> &effects() const noexcept { return effects_; }
    [[nodiscard]] const std::vector<double> &labels() const noexcept { return labels_; }

  private:
    static std::vector<double> default_labels(std::size_t k) {
        std::vector<double> l(k);
        std::iota(l.begin(), l.end(), 0.0);
        return l;
    }
    std::vector<HermitianMatrix> effects_;
    std::vector<double> labels_;
};

/// Probability vector over a finite alphabet. Entries must be >= 0 and sum to
/// 1 within 1e-10; the support is {k : probs[k] > kSupportTol}.
class ClassicalDistribution {
  public:
    explicit ClassicalDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) {
            throw ValidationError("ClassicalDistribution: empty alphabet");
        }
        double sum = 0.0;
        for (std::size_t k = 0; k < probs_.size(); ++k) {
            if (!std::isfinite(probs_[k]) || probs_[k] < 0.0) {
                throw ValidationError("ClassicalDistribution: entry " + std::to_string(k) +
                                      " is negative or not finite");
            }
            sum += probs_[k];
        }
        if (std::abs(sum - 1.0) > kStateTol) {
            throw ValidationError("ClassicalDistribution: probabilities sum to " +
                                  std::to_string(sum));
        }
        for (std::size_t k = 0; k < probs_.size(); ++k) {
            if (probs_[k] > kSupportTol) {
                support_.push_back(k);
            }
        }
    }
    ClassicalDistribution(std::initializer_list<double> probs)
        : ClassicalDistribution(std::vector<double>(probs)) {}

    static ClassicalDistribution uniform(std::size_t k) {
        return ClassicalDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
    }

    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    [[nodiscard]] double operator[](std::size_t k) const { return probs_.at(k); }
    [[nodiscard]] const std::vector<double> &probs() const noexcept { return probs_; }
    [[nodiscard]] const std::vector<std::size_t> &support() const noexcept { return support_; }
    [[nodiscard]] bool in_support(std::size_t k) const { return probs_.at(k) > kSupportTol; }

    friend bool operator==(const ClassicalDistribution &a, const ClassicalDistribution &b) {
        return a.probs_ == b.probs_;
    }

  private:
    std::vector<double> probs_;
    std::vector<std::size_t> support_;
};

/// Conditional (post-measurement) state attached to one outcome.
struct ConditionalState {
    std::size_t outcome;
    DensityMatrix state;
};

/// Outcome distribution plus one conditional state per outcome in the support.
struct PostMeasurementDecomposition {
    ClassicalDistribution distribution;
    std::vector<ConditionalState> conditionals;

    /// Sum_k probs[k] * conditional_k.
    [[nodiscard]] DensityMatrix barycenter() const {
        const auto n = static_cast<Eigen::Index>(conditionals.front().state.dim());
        CMatrix sum = CMatrix::Zero(n, n);
        for (const auto &c : conditionals) {
            sum += distribution[c.outcome] * c.state.matrix();
        }
        return DensityMatrix(sum);
    }
};

/// Projective measurement of an observable. Eigenvalues whose consecutive gap
/// is <= degeneracy_tol merge into one outcome labelled by the cluster mean.
inline Measurement pvm_from_observable(const HermitianMatrix &observable,
                                       double degeneracy_tol = 1e-8) {
    const SpectralDecomposition sd = eigh(observable);
    const auto n = static_cast<Eigen::Index>(sd.dim());
    std::vector<HermitianMatrix> effects;
    std::vector<double> labels;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && sd.eigenvalues(end) - sd.eigenvalues(end - 1) <= degeneracy_tol) {
            ++end;
        }
        CMatrix proj = CMatrix::Zero(n, n);
        double mean = 0.0;
        for (Eigen::Index k = start; k < end; ++k) {
            proj += sd.eigenvectors.col(k) * sd.eigenvectors.col(k).adjoint();
            mean += sd.eigenvalues(k);
        }
        effects.emplace_back(proj);
        labels.push_back(mean / static_cast<double>(end - start));
        start = end;
    }
    return Measurement(std::move(effects), std::move(labels));
}

/// probs[k] = tr(rho E_k). Negative roundoff of at most kSupportTol is clipped,
/// then the vector is renormalized (correction must stay below kStateTol).
inline ClassicalDistribution born_distribution(const DensityMatrix &rho, const Measurement &m) {
    if (rho.dim() != m.dim()) {
        throw ValidationError("born_distribution: state dimension " + std::to_string(rho.dim()) +
                              " differs from measurement dimension " + std::to_string(m.dim()));
    }
    std::vector<double> probs(m.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        double v = (rho.matrix() * m.effects()[k].matrix()).trace().real();
        if (v < 0.0) {
            if (v < -kSupportTol) {
                throw NumericalError("born_distribution: probability " + std::to_string(v) +
                                     " below clipping tolerance");
            }
            v = 0.0;
        }
        probs[k] = v;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kStateTol) {
        throw NumericalError("born_distribution: renormalization correction too large");
    }
    for (double &v : probs) {
        v /= sum;
    }
    return ClassicalDistribution(std::move(probs));
}

/// Lueders conditional states E_k^{1/2} rho E_k^{1/2} / p_k for outcomes in
/// the support. For PVMs this is the usual projective collapse.
inline PostMeasurementDecomposition post_measurement(const DensityMatrix &rho,
                                                     const Measurement &m) {
    ClassicalDistribution dist = born_distribution(rho, m);
    std::vector<ConditionalState> conditionals;
    for (std::size_t k : dist.support()) {
        const CMatrix root =
            support_function(eigh(m.effects()[k]), [](double x) { return std::sqrt(x); });
        CMatrix sandwich = root * rho.matrix() * root;
        sandwich = (sandwich + sandwich.adjoint()) * 0.5;
        const double tr = sandwich.trace().real();
        conditionals.push_back({k, DensityMatrix(CMatrix(sandwich / tr))});
    }
    return {std::move(dist), std::move(conditionals)};
}

} // namespace qlab
