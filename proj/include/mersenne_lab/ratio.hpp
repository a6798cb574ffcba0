#pragma once

#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>

#include "bigint.hpp"

namespace mlab {

/// Exact positive rational kept in lowest terms.
template <typename Int>
class BasicRatio {
public:
    BasicRatio() : num_(1), den_(1) {}
    explicit BasicRatio(Int value) : num_(std::move(value)), den_(1) {
        if (num_ <= 0) throw std::invalid_argument("ratio numerator must be positive");
    }
    BasicRatio(Int numerator, Int denominator) : num_(std::move(numerator)), den_(std::move(denominator)) {
        if (num_ <= 0 || den_ <= 0) throw std::invalid_argument("ratio terms must be positive");
        Int g = int_gcd(num_, den_);
        if (g != 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    const Int& numerator() const { return num_; }
    const Int& denominator() const { return den_; }

    double to_double() const { return int_to_double(num_) / int_to_double(den_); }

    std::string to_string() const {
        if (den_ == 1) return int_to_string(num_);
        return int_to_string(num_) + "/" + int_to_string(den_);
    }

    friend bool operator==(const BasicRatio& a, const BasicRatio& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const BasicRatio& a, const BasicRatio& b) {
        if (product_lt(a.num_, b.den_, b.num_, a.den_)) return std::strong_ordering::less;
        if (a == b) return std::strong_ordering::equal;
        return std::strong_ordering::greater;
    }

    friend std::ostream& operator<<(std::ostream& os, const BasicRatio& r) { return os << r.to_string(); }

private:
    Int num_;
    Int den_;
};

using Ratio = BasicRatio<BigInt>;
using SmallRatio = BasicRatio<std::uint64_t>;

}  // namespace mlab
