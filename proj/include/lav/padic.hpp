#ifndef LAV_PADIC_HPP
#define LAV_PADIC_HPP

#include <vector>

#include "lav/rational.hpp"

namespace lav {

struct Prime {
    unsigned long v;
    explicit Prime(unsigned long p);
};

Int int_pow(unsigned long b, unsigned long e);

// p-adic valuation of a nonzero integer.
long val_p(const Int& n, unsigned long p);

// Exact binomial coefficient, z may be negative.
Int binom_int(const Int& z, unsigned long k);

// val_p(binom(n, k)) for 0 <= k <= n, by counting base-p carries.
long binom_val_p(unsigned long p, const Int& n, const Int& k);

// binom(n, k) mod p by digitwise products, n >= 0 given as a residue.
unsigned long binom_mod_p(unsigned long p, const Int& n, const Int& k);

// An element of Z/p^N regarded as a p-adic integer known to absolute
// precision N.  Arithmetic tracks the weakest operand precision.
class PadicInt {
public:
    PadicInt(Prime p, const Int& value, long prec);

    unsigned long prime() const { return p_; }
    long precision() const { return n_; }
    const Int& residue() const { return r_; }
    const Int& modulus() const { return mod_; }

    // Valuation, saturated at the precision: val() == precision()
    // means only "zero to working precision".
    long val() const;
    bool val_saturated() const { return r_ == 0; }
    bool is_unit() const { return r_ % p_ != 0; }

    PadicInt reduce(long prec) const;
    PadicInt unit_inverse() const;
    // Divide by p^e; costs e digits of precision.
    PadicInt div_p(long e) const;
    PadicInt pow(const Int& e) const;

    friend PadicInt operator+(const PadicInt& a, const PadicInt& b);
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b);
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b);
    PadicInt operator-() const;
    friend PadicInt operator+(const PadicInt& a, long b);
    friend PadicInt operator-(const PadicInt& a, long b);
    friend PadicInt operator*(const PadicInt& a, long b);
    friend bool operator==(const PadicInt& a, const PadicInt& b);

    unsigned long digit(long i) const;
    std::string str() const;

private:
    unsigned long p_;
    long n_;
    Int r_;
    Int mod_;
    void check_compat(const PadicInt& o) const;
};

// binom(x, n) for a p-adic integer x.  Needs x known to precision
// > val_p(n!); the result carries precision(x) - val_p(n!).
PadicInt binom_padic(const PadicInt& x, unsigned long n);

// binom(x, n) mod p via digitwise products; needs only the base-p
// digits of x up to position floor(log_p n).
unsigned long binom_padic_mod_p(const PadicInt& x, const Int& n);

long val_p_factorial(unsigned long p, unsigned long n);

using MultiIndex = std::vector<long>;

long mi_abs_max(const MultiIndex& n);
// L with p^L <= max(|n|_inf, 1) < p^(L+1).
long log_level(unsigned long p, const MultiIndex& n);
// sum_i floor(p^lambda * n_i), entries nonnegative.
Int floor_weighted(unsigned long p, const Rat& lambda, const MultiIndex& n);
// Odometer step through [0, N]^d; false when the box is exhausted.
bool next_in_box(MultiIndex& n, long N);

} // namespace lav

#endif
