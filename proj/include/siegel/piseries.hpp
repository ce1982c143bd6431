#pragma once

#include <cmath>
#include <map>
#include <string>

#include "siegel/rational.hpp"

namespace siegel {

// Finite sum  c_0 + c_1 pi^-1 + c_2 pi^-2 + ...  with exact rational
// coefficients.  The powers of pi are linearly independent over Q, so
// coefficient-wise equality is the right exact equality for these values.
class PiSeries {
  public:
    PiSeries() = default;
    explicit PiSeries(const Rat64& constant) { set(0, constant); }

    static PiSeries pi_power(int k, const Rat64& coeff) {
        PiSeries s;
        s.set(k, coeff);
        return s;
    }

    void set(int k, const Rat64& coeff) {
        if (coeff.is_zero())
            c_.erase(k);
        else
            c_[k] = coeff;
    }
    Rat64 coeff(int k) const {
        auto it = c_.find(k);
        return it == c_.end() ? Rat64(0) : it->second;
    }
    const std::map<int, Rat64>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0); }

    PiSeries& operator+=(const PiSeries& o) {
        for (auto& [k, v] : o.c_) set(k, coeff(k) + v);
        return *this;
    }
    friend PiSeries operator+(PiSeries a, const PiSeries& b) { return a += b; }
    friend PiSeries operator*(const Rat64& s, const PiSeries& p) {
        PiSeries r;
        for (auto& [k, v] : p.c_) r.set(k, s * v);
        return r;
    }

    friend bool operator==(const PiSeries& a, const PiSeries& b) { return a.c_ == b.c_; }
    friend bool operator!=(const PiSeries& a, const PiSeries& b) { return !(a == b); }
    friend bool operator<(const PiSeries& a, const PiSeries& b) {  // canonical sort key
        auto ai = a.c_.begin(), bi = b.c_.begin();
        for (; ai != a.c_.end() && bi != b.c_.end(); ++ai, ++bi) {
            if (ai->first != bi->first) return ai->first < bi->first;
            if (ai->second != bi->second) return ai->second < bi->second;
        }
        return bi != b.c_.end();
    }

    double value() const {
        double v = 0;
        for (auto& [k, r] : c_) v += r.to_double() * std::pow(M_PI, -k);
        return v;
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (auto& [k, r] : c_) {
            if (!s.empty()) s += " + ";
            if (k == 0)
                s += r.str();
            else
                s += r.str() + "*pi^-" + std::to_string(k);
        }
        return s;
    }

  private:
    std::map<int, Rat64> c_;  // exponent k (>= 0) -> nonzero coefficient
};

}  // namespace siegel
