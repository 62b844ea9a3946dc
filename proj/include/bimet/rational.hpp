#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bimet {

// Base class for every error the library reports.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

// Exact rational with 64-bit numerator and denominator, always normalized
// (gcd 1, positive denominator). Arithmetic goes through 128-bit intermediates and
// throws OverflowError if a result does not fit.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n) {} // NOLINT: implicit from integers
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return make(static_cast<__int128>(a.num_) + b.num_, a.den_);
        std::int64_t g = std::gcd(a.den_, b.den_);
        __int128 n = static_cast<__int128>(a.num_) * (b.den_ / g) + static_cast<__int128>(b.num_) * (a.den_ / g);
        __int128 d = static_cast<__int128>(a.den_ / g) * b.den_;
        return make(n, d);
    }
    friend Rational operator-(const Rational& a) { return make(-static_cast<__int128>(a.num_), a.den_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error("division by zero");
        return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

private:
    static Rational make(__int128 n, __int128 d);
    void assign(std::int64_t n, std::int64_t d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Always "p/q", including integers ("3/1").
std::string to_string(const Rational& r);

// Accepts "p/q", "p" and "-p/q". Throws Error on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

inline Rational rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational rabs(const Rational& a) { return a < 0 ? -a : a; }

// Smallest integer >= r.
std::int64_t ceil(const Rational& r);
// Largest integer <= r.
std::int64_t floor(const Rational& r);

struct RationalHash {
    std::size_t operator()(const Rational& r) const noexcept {
        return std::hash<std::int64_t>()(r.numerator()) * 31 + std::hash<std::int64_t>()(r.denominator());
    }
};

} // namespace bimet
