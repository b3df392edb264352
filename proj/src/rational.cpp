#include "lav/rational.hpp"

#include <numeric>
#include <sstream>

namespace lav {

std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat rat_parse(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational");
    std::size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') pos = 1;
    if (pos >= s.size()) throw ParseError("bad rational: " + s);
    bool seen_slash = false;
    for (std::size_t i = pos; i < s.size(); ++i) {
        if (s[i] == '/') {
            if (seen_slash || i == pos || i + 1 == s.size())
                throw ParseError("bad rational: " + s);
            seen_slash = true;
        } else if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw ParseError("bad rational: " + s);
        }
    }
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw ParseError("bad rational: " + s);
    q.canonicalize();
    if (q.get_den() <= 0) throw ParseError("bad rational: " + s);
    return q;
}

ExtVal ExtVal::parse(const std::string& s) {
    if (s == "inf") return infinity();
    return of(rat_parse(s));
}

namespace {

Int rat_floor(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

Rat rat_pow_ui(const Rat& q, unsigned long e) {
    Rat r;
    mpz_pow_ui(r.get_num().get_mpz_t(), q.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den().get_mpz_t(), q.get_den().get_mpz_t(), e);
    r.canonicalize();
    return r;
}

Int int_pow_ui(unsigned long b, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    return r;
}

} // namespace

PRootExpr::PRootExpr(unsigned long p, unsigned long den) : p_(p), den_(den) {
    if (p < 2) throw DomainError("PRootExpr: p must be >= 2");
    if (den < 1) throw DomainError("PRootExpr: denominator must be >= 1");
    c_.assign(den_, Rat(0));
}

PRootExpr PRootExpr::from_rat(unsigned long p, const Rat& q) {
    PRootExpr e(p, 1);
    e.c_[0] = q;
    return e;
}

PRootExpr PRootExpr::ppow(unsigned long p, long num, unsigned long den) {
    if (den < 1) throw DomainError("PRootExpr::ppow: denominator must be >= 1");
    unsigned long g = std::gcd(static_cast<unsigned long>(num < 0 ? -num : num), den);
    if (g == 0) g = den; // num == 0
    long n = num / static_cast<long>(g);
    unsigned long d = den / g;
    PRootExpr e(p, d);
    long q = n >= 0 ? n / static_cast<long>(d)
                    : -((-n + static_cast<long>(d) - 1) / static_cast<long>(d));
    long r = n - q * static_cast<long>(d);
    Rat coeff;
    if (q >= 0) {
        coeff = Rat(int_pow_ui(p, static_cast<unsigned long>(q)));
    } else {
        coeff = Rat(1) / Rat(int_pow_ui(p, static_cast<unsigned long>(-q)));
    }
    e.c_[static_cast<std::size_t>(r)] = coeff;
    return e;
}

void PRootExpr::align_to(unsigned long den) {
    if (den == den_) return;
    if (den % den_ != 0) throw DomainError("PRootExpr: incompatible denominators");
    unsigned long f = den / den_;
    std::vector<Rat> nc(den, Rat(0));
    for (unsigned long i = 0; i < den_; ++i) nc[i * f] = c_[i];
    c_ = std::move(nc);
    den_ = den;
}

PRootExpr& PRootExpr::operator+=(const PRootExpr& o) {
    if (p_ != o.p_) throw DomainError("PRootExpr: mixed primes");
    unsigned long d = std::lcm(den_, o.den_);
    align_to(d);
    PRootExpr tmp = o;
    tmp.align_to(d);
    for (unsigned long i = 0; i < d; ++i) c_[i] += tmp.c_[i];
    return *this;
}

PRootExpr& PRootExpr::operator-=(const PRootExpr& o) {
    PRootExpr neg = o;
    neg.scale(Rat(-1));
    return *this += neg;
}

PRootExpr& PRootExpr::scale(const Rat& c) {
    for (auto& x : c_) x *= c;
    return *this;
}

PRootExpr& PRootExpr::add_rat(const Rat& c) {
    c_[0] += c;
    return *this;
}

bool PRootExpr::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool PRootExpr::is_rational() const {
    for (unsigned long i = 1; i < den_; ++i)
        if (c_[i] != 0) return false;
    return true;
}

int PRootExpr::sign() const {
    if (is_rational()) return sgn(c_[0]);
    // Enclose t = p^(1/den_) in (lo, hi) and refine until the induced
    // enclosure of the value excludes zero.  Termination: the value is
    // nonzero because 1, t, ..., t^(den_-1) are independent over Q.
    Rat lo(1), hi(static_cast<long>(p_));
    const Rat pq(static_cast<long>(p_));
    while (true) {
        Rat blo(0), bhi(0);
        Rat plo(1), phi(1);
        for (unsigned long i = 0; i < den_; ++i) {
            if (i > 0) {
                plo *= lo;
                phi *= hi;
            }
            if (c_[i] > 0) {
                blo += c_[i] * plo;
                bhi += c_[i] * phi;
            } else if (c_[i] < 0) {
                blo += c_[i] * phi;
                bhi += c_[i] * plo;
            }
        }
        if (blo > 0) return 1;
        if (bhi < 0) return -1;
        Rat mid = (lo + hi) / 2;
        if (rat_pow_ui(mid, den_) < pq)
            lo = mid;
        else
            hi = mid;
    }
}

Int PRootExpr::floor() const {
    if (is_rational()) return rat_floor(c_[0]);
    Rat lo(1), hi(static_cast<long>(p_));
    const Rat pq(static_cast<long>(p_));
    while (true) {
        Rat blo(0), bhi(0);
        Rat plo(1), phi(1);
        for (unsigned long i = 0; i < den_; ++i) {
            if (i > 0) {
                plo *= lo;
                phi *= hi;
            }
            if (c_[i] > 0) {
                blo += c_[i] * plo;
                bhi += c_[i] * phi;
            } else if (c_[i] < 0) {
                blo += c_[i] * phi;
                bhi += c_[i] * plo;
            }
        }
        Int flo = rat_floor(blo), fhi = rat_floor(bhi);
        // The value is irrational, so the enclosure eventually avoids
        // every integer and the two floors agree.
        if (flo == fhi) return flo;
        Rat mid = (lo + hi) / 2;
        if (rat_pow_ui(mid, den_) < pq)
            lo = mid;
        else
            hi = mid;
    }
}

std::string PRootExpr::str() const {
    std::ostringstream os;
    bool first = true;
    for (unsigned long i = 0; i < den_; ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        os << rat_str(c_[i]);
        if (i > 0) os << "*p^(" << i << "/" << den_ << ")";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

Int floor_ppow_times(unsigned long p, const Rat& lambda, const Int& n) {
    if (n < 0) throw DomainError("floor_ppow_times: n must be >= 0");
    if (n == 0) return Int(0);
    const Int& a = lambda.get_num();
    const Int& b = lambda.get_den();
    if (b == 1) {
        if (!a.fits_slong_p()) throw DomainError("floor_ppow_times: exponent too large");
        long e = a.get_si();
        Int r;
        if (e >= 0) {
            mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
            return r * n;
        }
        Int d;
        mpz_ui_pow_ui(d.get_mpz_t(), p, static_cast<unsigned long>(-e));
        mpz_fdiv_q(r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        return r;
    }
    if (!a.fits_slong_p() || !b.fits_ulong_p())
        throw DomainError("floor_ppow_times: exponent too large");
    PRootExpr x = PRootExpr::ppow(p, a.get_si(), b.get_ui());
    x.scale(Rat(n));
    return x.floor();
}

} // namespace lav
