#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace siegel {

// All exact arithmetic in this project runs on checked 64-bit integers with
// __int128 intermediates.  Desk-scale inputs stay far below the limits; if a
// computation ever leaves them we want a loud error, not a wrong count.

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 add overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 mul overflow");
    return r;
}

inline std::int64_t narrow128(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("int128 narrow overflow");
    return static_cast<std::int64_t>(v);
}

class Rat64 {
  public:
    Rat64() : num_(0), den_(1) {}
    Rat64(std::int64_t n) : num_(n), den_(1) {}
    Rat64(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    static Rat64 parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat64(std::stoll(s));
            return Rat64(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("bad rational literal: '" + s + "'");
        }
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rat64 operator+(const Rat64& a, const Rat64& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        return make_reduced(n, (__int128)a.den_ * b.den_);
    }
    friend Rat64 operator-(const Rat64& a, const Rat64& b) { return a + Rat64(-b.num_, b.den_); }
    friend Rat64 operator-(const Rat64& a) { return Rat64(-a.num_, a.den_); }
    friend Rat64 operator*(const Rat64& a, const Rat64& b) {
        return make_reduced((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat64 operator/(const Rat64& a, const Rat64& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        __int128 n = (__int128)a.num_ * b.den_;
        __int128 d = (__int128)a.den_ * b.num_;
        return make_reduced(n, d);
    }
    Rat64& operator+=(const Rat64& o) { return *this = *this + o; }
    Rat64& operator-=(const Rat64& o) { return *this = *this - o; }
    Rat64& operator*=(const Rat64& o) { return *this = *this * o; }
    Rat64& operator/=(const Rat64& o) { return *this = *this / o; }

    friend bool operator==(const Rat64& a, const Rat64& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat64& a, const Rat64& b) { return !(a == b); }
    friend bool operator<(const Rat64& a, const Rat64& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }
    friend bool operator>(const Rat64& a, const Rat64& b) { return b < a; }
    friend bool operator>=(const Rat64& a, const Rat64& b) { return !(a < b); }

  private:
    static Rat64 make_reduced(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat64 r;
        r.num_ = narrow128(n);
        r.den_ = narrow128(d);
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) { num_ = checked_mul(num_, -1); den_ = checked_mul(den_, -1); }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_;
    std::int64_t den_;  // > 0, gcd(|num|, den) == 1
};

}  // namespace siegel
