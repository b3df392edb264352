#include "lav/padic.hpp"

#include <sstream>

namespace lav {

Prime::Prime(unsigned long p) : v(p) {
    mpz_class z(static_cast<long>(p));
    if (p < 2 || mpz_probab_prime_p(z.get_mpz_t(), 40) == 0)
        throw DomainError("not a prime: " + std::to_string(p));
}

Int int_pow(unsigned long b, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    return r;
}

long val_p(const Int& n, unsigned long p) {
    if (n == 0) throw DomainError("val_p of zero");
    Int m = n;
    long v = 0;
    Int q, r;
    while (true) {
        mpz_tdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p);
        if (r != 0) return v;
        ++v;
        m = q;
    }
}

Int binom_int(const Int& z, unsigned long k) {
    Int r;
    mpz_bin_ui(r.get_mpz_t(), z.get_mpz_t(), k);
    return r;
}

namespace {

// Base-p digit sum.
Int digit_sum(unsigned long p, const Int& n) {
    Int s = 0, m = n, q, r;
    while (m > 0) {
        mpz_tdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p);
        s += r;
        m = q;
    }
    return s;
}

} // namespace

long binom_val_p(unsigned long p, const Int& n, const Int& k) {
    if (k < 0 || k > n) throw DomainError("binom_val_p: need 0 <= k <= n");
    Int carries = (digit_sum(p, k) + digit_sum(p, n - k) - digit_sum(p, n));
    Int v = carries / static_cast<long>(p - 1);
    return v.get_si();
}

unsigned long binom_mod_p(unsigned long p, const Int& n, const Int& k) {
    if (n < 0 || k < 0) throw DomainError("binom_mod_p: need n, k >= 0");
    Int a = n, b = k, qa, ra, qb, rb;
    unsigned long acc = 1;
    while (b > 0) {
        mpz_tdiv_qr_ui(qa.get_mpz_t(), ra.get_mpz_t(), a.get_mpz_t(), p);
        mpz_tdiv_qr_ui(qb.get_mpz_t(), rb.get_mpz_t(), b.get_mpz_t(), p);
        unsigned long da = ra.get_ui(), db = rb.get_ui();
        if (db > da) return 0;
        Int c;
        mpz_bin_uiui(c.get_mpz_t(), da, db);
        acc = (acc * mpz_fdiv_ui(c.get_mpz_t(), p)) % p;
        a = qa;
        b = qb;
    }
    return acc;
}

PadicInt::PadicInt(Prime p, const Int& value, long prec) : p_(p.v), n_(prec) {
    if (prec < 1) throw DomainError("PadicInt: precision must be >= 1");
    mod_ = int_pow(p_, static_cast<unsigned long>(prec));
    mpz_fdiv_r(r_.get_mpz_t(), value.get_mpz_t(), mod_.get_mpz_t());
}

long PadicInt::val() const {
    if (r_ == 0) return n_;
    return val_p(r_, p_);
}

PadicInt PadicInt::reduce(long prec) const {
    if (prec > n_) throw InsufficientPrecision("reduce: cannot raise precision");
    return PadicInt(Prime(p_), r_, prec);
}

PadicInt PadicInt::unit_inverse() const {
    if (!is_unit()) throw NotInvertible("PadicInt: not a unit");
    PadicInt out = *this;
    if (mpz_invert(out.r_.get_mpz_t(), r_.get_mpz_t(), mod_.get_mpz_t()) == 0)
        throw NotInvertible("PadicInt: no inverse");
    return out;
}

PadicInt PadicInt::div_p(long e) const {
    if (e < 0) throw DomainError("div_p: negative exponent");
    if (e == 0) return *this;
    if (n_ - e < 1)
        throw InsufficientPrecision("div_p: precision exhausted");
    Int pe = int_pow(p_, static_cast<unsigned long>(e));
    if (r_ % pe != 0) throw DomainError("div_p: residue not divisible");
    return PadicInt(Prime(p_), r_ / pe, n_ - e);
}

PadicInt PadicInt::pow(const Int& e) const {
    if (e < 0) throw DomainError("PadicInt::pow: negative exponent");
    PadicInt out = *this;
    mpz_powm(out.r_.get_mpz_t(), r_.get_mpz_t(), e.get_mpz_t(), mod_.get_mpz_t());
    return out;
}

void PadicInt::check_compat(const PadicInt& o) const {
    if (p_ != o.p_) throw DomainError("PadicInt: mixed primes");
}

namespace {

PadicInt combine(const PadicInt& a, const PadicInt& b, char op) {
    long n = std::min(a.precision(), b.precision());
    const Int& x = a.residue();
    const Int& y = b.residue();
    Int r;
    if (op == '+')
        r = x + y;
    else if (op == '-')
        r = x - y;
    else
        r = x * y;
    return PadicInt(Prime(a.prime()), r, n);
}

} // namespace

PadicInt operator+(const PadicInt& a, const PadicInt& b) {
    a.check_compat(b);
    return combine(a, b, '+');
}
PadicInt operator-(const PadicInt& a, const PadicInt& b) {
    a.check_compat(b);
    return combine(a, b, '-');
}
PadicInt operator*(const PadicInt& a, const PadicInt& b) {
    a.check_compat(b);
    return combine(a, b, '*');
}
PadicInt PadicInt::operator-() const { return PadicInt(Prime(p_), -r_, n_); }
PadicInt operator+(const PadicInt& a, long b) {
    return PadicInt(Prime(a.prime()), a.residue() + b, a.precision());
}
PadicInt operator-(const PadicInt& a, long b) {
    return PadicInt(Prime(a.prime()), a.residue() - b, a.precision());
}
PadicInt operator*(const PadicInt& a, long b) {
    return PadicInt(Prime(a.prime()), a.residue() * b, a.precision());
}
bool operator==(const PadicInt& a, const PadicInt& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.r_ == b.r_;
}

unsigned long PadicInt::digit(long i) const {
    if (i < 0 || i >= n_) throw DomainError("PadicInt::digit: out of range");
    Int q = r_ / int_pow(p_, static_cast<unsigned long>(i));
    return mpz_fdiv_ui(q.get_mpz_t(), p_);
}

std::string PadicInt::str() const {
    std::ostringstream os;
    os << r_.get_str() << " mod " << p_ << "^" << n_;
    return os.str();
}

long val_p_factorial(unsigned long p, unsigned long n) {
    long v = 0;
    unsigned long q = n;
    while (q >= p) {
        q /= p;
        v += static_cast<long>(q);
    }
    return v;
}

PadicInt binom_padic(const PadicInt& x, unsigned long n) {
    if (x.precision() <= val_p_factorial(x.prime(), n))
        throw InsufficientPrecision("binom_padic: precision <= val_p(n!)");
    PadicInt b(Prime(x.prime()), 1, x.precision());
    for (unsigned long j = 1; j <= n; ++j) {
        b = b * (x - static_cast<long>(j - 1));
        Int jj(static_cast<long>(j));
        long e = val_p(jj, x.prime());
        if (e > 0) b = b.div_p(e);
        Int ju = jj / int_pow(x.prime(), static_cast<unsigned long>(e));
        PadicInt u(Prime(x.prime()), ju, b.precision());
        b = b * u.unit_inverse();
    }
    return b;
}

unsigned long binom_padic_mod_p(const PadicInt& x, const Int& n) {
    if (n < 0) throw DomainError("binom_padic_mod_p: n >= 0 required");
    if (n == 0) return 1;
    long digits = 1;
    Int t = n;
    while (t >= static_cast<long>(x.prime())) {
        t /= static_cast<long>(x.prime());
        ++digits;
    }
    if (x.precision() < digits)
        throw InsufficientPrecision("binom_padic_mod_p: too few digits");
    return binom_mod_p(x.prime(), x.residue(), n);
}

long mi_abs_max(const MultiIndex& n) {
    long m = 0;
    for (long e : n) m = std::max(m, e < 0 ? -e : e);
    return m;
}

long log_level(unsigned long p, const MultiIndex& n) {
    long m = mi_abs_max(n);
    long L = 0;
    long q = m;
    while (q >= static_cast<long>(p)) {
        q /= static_cast<long>(p);
        ++L;
    }
    return L;
}

Int floor_weighted(unsigned long p, const Rat& lambda, const MultiIndex& n) {
    Int s = 0;
    for (long e : n) {
        if (e < 0) throw DomainError("floor_weighted: negative index");
        s += floor_ppow_times(p, lambda, Int(e));
    }
    return s;
}

bool next_in_box(MultiIndex& n, long N) {
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] < N) {
            ++n[i];
            for (std::size_t j = 0; j < i; ++j) n[j] = 0;
            return true;
        }
    }
    return false;
}

} // namespace lav
