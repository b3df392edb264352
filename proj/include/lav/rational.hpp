#ifndef LAV_RATIONAL_HPP
#define LAV_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <string>
#include <vector>

#include "lav/errors.hpp"

namespace lav {

using Int = mpz_class;
using Rat = mpq_class;

// Prints den == 1 as a bare integer, otherwise "num/den".
std::string rat_str(const Rat& q);

// Accepts "n" and "n/d" with optional sign; rejects everything else.
Rat rat_parse(const std::string& s);

// A rational extended with +infinity, ordered the usual way.
// Used for valuations, where +infinity is the valuation of zero.
class ExtVal {
public:
    ExtVal() : inf_(true) {}
    static ExtVal infinity() { return ExtVal(); }
    static ExtVal of(Rat q) {
        ExtVal v;
        v.inf_ = false;
        v.q_ = std::move(q);
        return v;
    }

    bool is_inf() const { return inf_; }
    const Rat& finite() const {
        if (inf_) throw DomainError("ExtVal: +infinity has no finite value");
        return q_;
    }

    friend bool operator==(const ExtVal& a, const ExtVal& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.q_ == b.q_;
    }
    friend bool operator<(const ExtVal& a, const ExtVal& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.q_ < b.q_;
    }
    friend bool operator<=(const ExtVal& a, const ExtVal& b) { return a < b || a == b; }
    friend bool operator>(const ExtVal& a, const ExtVal& b) { return b < a; }
    friend bool operator>=(const ExtVal& a, const ExtVal& b) { return b <= a; }

    friend ExtVal operator+(const ExtVal& a, const ExtVal& b) {
        if (a.inf_ || b.inf_) return infinity();
        return of(a.q_ + b.q_);
    }
    friend ExtVal min(const ExtVal& a, const ExtVal& b) { return a <= b ? a : b; }

    std::string str() const { return inf_ ? "inf" : rat_str(q_); }
    static ExtVal parse(const std::string& s);

private:
    bool inf_;
    Rat q_;
};

// An element of Q[t]/(t^D - p) with t = p^(1/D), kept exact so that
// comparisons against quantities of the form p^(k/D) never rely on
// floating point.  t^D - p is irreducible (Eisenstein), so an element
// is zero exactly when every coordinate is zero, and the sign of a
// nonzero element is decided by refining a rational enclosure of t.
class PRootExpr {
public:
    // Zero, in the field generated by p^(1/den).
    PRootExpr(unsigned long p, unsigned long den);

    static PRootExpr from_rat(unsigned long p, const Rat& q);
    // p^(num/den), num may be negative.
    static PRootExpr ppow(unsigned long p, long num, unsigned long den);

    unsigned long prime() const { return p_; }

    PRootExpr& operator+=(const PRootExpr& o);
    PRootExpr& operator-=(const PRootExpr& o);
    friend PRootExpr operator+(PRootExpr a, const PRootExpr& b) { return a += b; }
    friend PRootExpr operator-(PRootExpr a, const PRootExpr& b) { return a -= b; }
    PRootExpr& scale(const Rat& c);
    PRootExpr& add_rat(const Rat& c);

    bool is_zero() const;
    bool is_rational() const;
    // Exact sign: -1, 0, +1.
    int sign() const;
    // floor of the exact real value.
    Int floor() const;

    std::string str() const;

private:
    void align_to(unsigned long den);

    unsigned long p_;
    unsigned long den_;
    std::vector<Rat> c_; // value = sum c_[i] * p^(i/den_)
};

// floor(p^lambda * n) computed exactly, n >= 0.
Int floor_ppow_times(unsigned long p, const Rat& lambda, const Int& n);

} // namespace lav

#endif
