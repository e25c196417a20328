#pragma once

#include "treefiber/errors.hpp"

#include <cstdint>
#include <numeric>
#include <string>

namespace treefiber {

using Int = std::int64_t;

// Overflow-checked int64 arithmetic. All exact group/lattice computations route
// through these; a trip means the desk-scale bounds were exceeded, so we fail
// loudly as a resource guard instead of corrupting a result.
inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw ResourceGuard("int64 overflow in add");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw ResourceGuard("int64 overflow in sub");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw ResourceGuard("int64 overflow in mul");
    return r;
}

inline Int checked_neg(Int a) {
    if (a == INT64_MIN) throw ResourceGuard("int64 overflow in neg");
    return -a;
}

// Floor division/modulo (round toward -inf), the convention every lattice
// residue computation in this project relies on.
inline Int floor_div(Int a, Int b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int floor_mod(Int a, Int b) { return checked_sub(a, checked_mul(floor_div(a, b), b)); }

inline Int gcd_int(Int a, Int b) {
    if (a < 0) a = checked_neg(a);
    if (b < 0) b = checked_neg(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Exact rational on checked int64. Always normalized: den > 0, gcd(num, den) = 1.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(Int n) : num_(n), den_(1) {}
    Rational(Int n, Int d) : num_(n), den_(d) { normalize(); }

    Int num() const { return num_; }
    Int den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const { return Rational(checked_neg(num_), den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        Int g = gcd_int(a.den_, b.den_);
        Int lhs = checked_mul(a.num_, b.den_ / g);
        Int rhs = checked_mul(b.num_, a.den_ / g);
        return Rational(checked_add(lhs, rhs), checked_mul(a.den_ / g, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        Int g1 = gcd_int(a.num_, b.den_);
        Int g2 = gcd_int(b.num_, a.den_);
        return Rational(checked_mul(a.num_ / g1, b.num_ / g2),
                        checked_mul(a.den_ / g2, b.den_ / g1));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw InvalidInput("rational division by zero");
        return a * Rational(b.den_, b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        // Compare via 128-bit cross products; exact.
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Parses "p" or "p/q" (decimal strings per the wire format).
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(std::stoll(s));
            return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        } catch (const std::exception&) {
            throw ParseError("bad rational literal: " + s);
        }
    }

  private:
    void normalize() {
        if (den_ == 0) throw InvalidInput("rational with zero denominator");
        if (den_ < 0) {
            num_ = checked_neg(num_);
            den_ = checked_neg(den_);
        }
        Int g = gcd_int(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    Int num_;
    Int den_;
};

} // namespace treefiber
