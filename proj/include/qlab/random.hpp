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
 * @file random.hpp
 * Seeded generators for states, unitaries, measurements and distributions.
 *
 * Every generator is a pure function of its seed. Sub-streams are derived
 * from (base seed, task label, index) so that independent work items never
 * share a stream.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "matcore.hpp"

namespace qlab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline CMatrix ginibre(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

} // namespace detail

/// Seed of the index-th stream of the task named label under base.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
    return detail::splitmix64(detail::splitmix64(base ^ detail::fnv1a(label)) + index);
}

/// G G^dagger / tr(G G^dagger) with G a dim x rank complex Gaussian matrix.
inline DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    if (dim == 0 || rank == 0 || rank > dim) {
        throw ValidationError("random_density: need 1 <= rank <= dim");
    }
    std::mt19937_64 rng(seed);
    const CMatrix g = detail::ginibre(dim, rank, rng);
    const CMatrix w = g * g.adjoint();
    return DensityMatrix(CMatrix(w / w.trace().real()));
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
inline CMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const CMatrix g = detail::ginibre(dim, dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const Complex d = r(k, k);
        const double a = std::abs(d);
        if (a > 0.0) {
            q.col(k) *= d / a;
        }
    }
    return q;
}

/// Uniform point on the probability simplex (normalized exponentials).
inline std::vector<double> random_probability_vector(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> v(k);
    double s = 0.0;
    for (double &x : v) {
        x = expo(rng);
        s += x;
    }
    for (double &x : v) {
        x /= s;
    }
    return v;
}

inline ClassicalDistribution random_distribution(std::size_t k, std::uint64_t seed) {
    return ClassicalDistribution(random_probability_vector(k, seed));
}

/// Random Hermitian matrix (G + G^dagger) / 2.
inline HermitianMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const CMatrix g = detail::ginibre(dim, dim, rng);
    return HermitianMatrix(CMatrix((g + g.adjoint()) * 0.5));
}

/// POVM with `outcomes` effects S^{-1/2} A_k S^{-1/2}, A_k random positive,
/// S = sum_k A_k.
inline Measurement random_povm(std::size_t dim, std::size_t outcomes, std::uint64_t seed) {
    if (outcomes == 0) {
        throw ValidationError("random_povm: need at least one outcome");
    }
    std::mt19937_64 rng(seed);
    const auto n = static_cast<Eigen::Index>(dim);
    std::vector<CMatrix> parts;
    CMatrix sum = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < outcomes; ++k) {
        const CMatrix g = detail::ginibre(dim, dim, rng);
        parts.push_back(g * g.adjoint());
        sum += parts.back();
    }
    const CMatrix inv_root = support_function(eigh(HermitianMatrix(CMatrix((sum + sum.adjoint()) * 0.5))),
                                              [](double x) { return 1.0 / std::sqrt(x); });
    std::vector<HermitianMatrix> effects;
    CMatrix acc = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k + 1 < outcomes; ++k) {
        CMatrix e = inv_root * parts[k] * inv_root;
        e = (e + e.adjoint()) * 0.5;
        acc += e;
        effects.emplace_back(e);
    }
    // Last effect closes the sum exactly.
    CMatrix last = CMatrix::Identity(n, n) - acc;
    effects.emplace_back(CMatrix((last + last.adjoint()) * 0.5));
    return Measurement(std::move(effects));
}

/// Two states diagonal in one random basis, plus the PVM onto that basis.
struct CommutingPair {
    DensityMatrix rho;
    DensityMatrix sigma;
    Measurement basis;
};

inline CommutingPair random_commuting_pair(std::size_t dim, std::uint64_t seed) {
    const CMatrix u = random_unitary(dim, derive_seed(seed, "basis", 0));
    const auto make = [&](std::uint64_t s) {
        const std::vector<double> p = random_probability_vector(dim, s);
        RVector d(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < dim; ++k) {
            d(static_cast<Eigen::Index>(k)) = p[k];
        }
        const CMatrix m = u * d.cast<Complex>().asDiagonal() * u.adjoint();
        return DensityMatrix(CMatrix((m + m.adjoint()) * 0.5));
    };
    return {make(derive_seed(seed, "rho", 0)), make(derive_seed(seed, "sigma", 0)),
            Measurement::from_basis(u)};
}

/// U rho U^dagger.
inline DensityMatrix conjugate(const DensityMatrix &rho, const CMatrix &u) {
    const CMatrix m = u * rho.matrix() * u.adjoint();
    return DensityMatrix(CMatrix((m + m.adjoint()) * 0.5));
}

} // namespace qlab
