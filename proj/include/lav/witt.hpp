#ifndef LAV_WITT_HPP
#define LAV_WITT_HPP

#include <array>
#include <cstdint>

#include "lav/perflaurent.hpp"

namespace lav {

// The universal mod-p carry polynomials for length-n Witt vectors:
// stage k of the sum, product, and negation laws in the variables
// a_0..a_{n-1}, b_0..b_{n-1} (slots 0..3 and 4..7).  Solved once per
// (p, n) from the ghost components and cached.
struct CarryLaw {
    struct Term {
        std::array<std::uint16_t, 8> e;
        unsigned long c;
    };
    unsigned long p;
    int n;
    std::vector<std::vector<Term>> sum, prod, neg;

    static const CarryLaw& get(unsigned long p, int n);
};

// A truncated Witt vector over the fractional-exponent series ring,
// stored digitwise.
class WittElem {
public:
    WittElem(Prime p, std::vector<PerfLaurent> digits);

    static WittElem zero(unsigned long p, int n);
    static WittElem from_int(unsigned long p, int n, const Int& c);
    static WittElem teichmuller(const PerfLaurent& f, int n);
    // [1 + X] - 1 with every digit capped as given.
    static WittElem element_T(unsigned long p, int n, const Rat& cap);

    unsigned long prime() const { return p_; }
    int len() const { return static_cast<int>(x_.size()); }
    const PerfLaurent& digit(int i) const;
    const std::vector<PerfLaurent>& digits() const { return x_; }

    friend WittElem operator+(const WittElem& a, const WittElem& b);
    friend WittElem operator-(const WittElem& a, const WittElem& b);
    friend WittElem operator*(const WittElem& a, const WittElem& b);
    WittElem operator-() const;
    friend bool operator==(const WittElem& a, const WittElem& b);

    // Multiplication by p, as the composite of the two shift maps.
    WittElem p_times() const;
    WittElem vshift() const;
    WittElem phi() const;
    WittElem phi_inv() const;
    WittElem reduce_len(int k) const;

    // True when no digit has a known term (zero to working caps).
    bool negligible() const;

    // min_i ( i/r + val(x_i)/p^i ), the digitwise radius-r valuation.
    ExtVal val_r(const Rat& r) const;

    std::string str() const;
    static WittElem parse(const std::string& s);

private:
    unsigned long p_;
    std::vector<PerfLaurent> x_;
    static void check_compat(const WittElem& a, const WittElem& b);
};

WittElem gamma_act_witt(const PadicInt& a, const WittElem& u);

} // namespace lav

#endif
