#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace auxwave {

// Exact rational arithmetic on 64-bit integers. Every operation checks the
// 128-bit intermediate against the 64-bit range and throws std::overflow_error
// instead of wrapping; callers treat that as "too big for exact arithmetic".
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n) {}
    Rational(long long n, long long d) : num_(n), den_(d) { reduce(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    // b^e for integer e; e < 0 inverts (throws on 0^negative).
    Rational pow_int(long long e) const {
        if (e == 0) return Rational(1);
        Rational base = *this;
        if (e < 0) {
            if (num_ == 0) throw std::domain_error("0 raised to negative power");
            base = Rational(den_, num_);
            e = -e;
        }
        Rational acc(1);
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = (e > 1) ? base * base : base;
            e >>= 1;
        }
        return acc;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

private:
    using I128 = __int128;
    static I128 i128(long long v) { return static_cast<I128>(v); }

    static Rational make(I128 n, I128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        I128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr I128 lo = std::numeric_limits<long long>::min();
        constexpr I128 hi = std::numeric_limits<long long>::max();
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static I128 gcd128(I128 a, I128 b) {
        while (b != 0) { I128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void reduce() {
        *this = make(num_, den_);
    }

    long long num_ = 0;
    long long den_ = 1;
};

} // namespace auxwave
