#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mlab {

using BigInt = mpz_class;

inline BigInt to_big(std::uint64_t v) {
    BigInt r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return r;
}

inline bool fits_u64(const BigInt& v) {
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const BigInt& v) {
    if (!fits_u64(v)) throw std::out_of_range("integer does not fit in 64 bits");
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, -1, sizeof(r), 0, 0, v.get_mpz_t());
    return r;
}

inline std::string to_decimal(const BigInt& v) { return v.get_str(10); }

inline BigInt from_decimal(std::string_view s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
        throw std::invalid_argument("not a non-negative decimal integer: " + std::string(s));
    return BigInt(std::string(s), 10);
}

inline double to_double(const BigInt& v) { return v.get_d(); }

/// 2^n - 1
inline BigInt mersenne_number(std::uint64_t n) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
    return r - 1;
}

inline std::size_t bit_length(const BigInt& v) {
    return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

// Integer helpers shared by the uint64 and BigInt instantiations of the
// generic arithmetic templates.
inline std::uint64_t int_gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }
inline BigInt int_gcd(const BigInt& a, const BigInt& b) { return gcd(a, b); }

/// a*b <= c*d without overflow.
inline bool product_le(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return static_cast<unsigned __int128>(a) * b <= static_cast<unsigned __int128>(c) * d;
}
inline bool product_le(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d) {
    return BigInt(a * b) <= BigInt(c * d);
}
inline bool product_lt(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return static_cast<unsigned __int128>(a) * b < static_cast<unsigned __int128>(c) * d;
}
inline bool product_lt(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d) {
    return BigInt(a * b) < BigInt(c * d);
}

inline double int_to_double(std::uint64_t v) { return static_cast<double>(v); }
inline double int_to_double(const BigInt& v) { return v.get_d(); }

inline std::string int_to_string(std::uint64_t v) { return std::to_string(v); }
inline std::string int_to_string(const BigInt& v) { return v.get_str(10); }

}  // namespace mlab
