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

#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace qlab {

/// Nonnegative real or +infinity. Used for every divergence value.
class ExtendedReal {
  public:
    /// Values in [-clip_tol, 0) are clipped to 0; anything below is an error.
    static ExtendedReal finite(double value, double clip_tol = 1e-12) {
        if (std::isnan(value)) {
            throw NumericalError("ExtendedReal: NaN value");
        }
        if (std::isinf(value)) {
            if (value > 0) {
                return infinity();
            }
            throw NumericalError("ExtendedReal: negative infinity");
        }
        if (value < 0.0) {
            if (value < -clip_tol) {
                throw NumericalError("ExtendedReal: negative value " +
                                     std::to_string(value));
            }
            value = 0.0;
        }
        return ExtendedReal(value, false);
    }
    static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

    [[nodiscard]] bool is_infinite() const noexcept { return infinite_; }
    [[nodiscard]] bool is_finite() const noexcept { return !infinite_; }

    /// The finite value, or +inf as a double.
    [[nodiscard]] double value() const noexcept {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        if (a.infinite_ || b.infinite_) {
            return infinity();
        }
        return ExtendedReal(a.value_ + b.value_, false);
    }
    friend bool operator==(const ExtendedReal &, const ExtendedReal &) = default;

  private:
    ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_ = 0.0;
    bool infinite_ = false;
};

/// Difference of two extended reals. INFINITY - INFINITY is not comparable.
struct DivergenceGap {
    enum class Kind { finite, plus_infinity, minus_infinity, not_comparable };
    Kind kind = Kind::finite;
    double value = 0.0; // meaningful only for Kind::finite

    static DivergenceGap between(ExtendedReal lhs, ExtendedReal rhs) {
        if (lhs.is_infinite() && rhs.is_infinite()) {
            return {Kind::not_comparable, 0.0};
        }
        if (lhs.is_infinite()) {
            return {Kind::plus_infinity, 0.0};
        }
        if (rhs.is_infinite()) {
            return {Kind::minus_infinity, 0.0};
        }
        return {Kind::finite, lhs.value() - rhs.value()};
    }

    [[nodiscard]] bool is_finite() const noexcept { return kind == Kind::finite; }

    /// As a double: +-inf for the infinite kinds, NaN when not comparable.
    [[nodiscard]] double as_double() const noexcept {
        switch (kind) {
        case Kind::finite:
            return value;
        case Kind::plus_infinity:
            return std::numeric_limits<double>::infinity();
        case Kind::minus_infinity:
            return -std::numeric_limits<double>::infinity();
        case Kind::not_comparable:
            break;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
};

} // namespace qlab
