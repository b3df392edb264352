#ifndef LAV_MODULES_HPP
#define LAV_MODULES_HPP

#include <concepts>
#include <string>

#include "lav/padic.hpp"
#include "lav/perflaurent.hpp"
#include "lav/witt.hpp"

namespace lav {

// A coefficient module for function expansions: an abelian group with
// a valuation, an exact scalar action by integers, and an approximate
// scalar action by p-adic integers at their stated precision.
template <class H>
concept ValuedModule = requires(const H& h, const typename H::Elem& x,
                                const typename H::Elem& y, const PadicInt& c,
                                const Int& k) {
    { h.prime() } -> std::convertible_to<unsigned long>;
    { h.zero() } -> std::same_as<typename H::Elem>;
    { h.add(x, y) } -> std::same_as<typename H::Elem>;
    { h.neg(x) } -> std::same_as<typename H::Elem>;
    { h.smul(c, x) } -> std::same_as<typename H::Elem>;
    { h.smul_int(k, x) } -> std::same_as<typename H::Elem>;
    { h.val(x) } -> std::same_as<ExtVal>;
    { h.negligible(x) } -> std::same_as<bool>;
    { h.eq(x, y) } -> std::same_as<bool>;
    { h.str(x) } -> std::same_as<std::string>;
};

// A ValuedModule together with an action of the unit group, the unit
// given as a PadicInt carrying its own working precision.
template <class H>
concept GammaModule = ValuedModule<H> && requires(const H& h, const PadicInt& a,
                                                  const typename H::Elem& x) {
    { h.gamma(a, x) } -> std::same_as<typename H::Elem>;
};

// Z/p^N as p-adic integers at fixed absolute precision; a unit a acts
// by multiplication with a^twist.
class PadicModule {
public:
    using Elem = PadicInt;

    PadicModule(Prime p, long prec, long twist = 0)
        : p_(p.v), prec_(prec), twist_(twist) {
        if (prec <= 0) throw DomainError("PadicModule: precision must be positive");
    }

    unsigned long prime() const { return p_; }
    long precision() const { return prec_; }
    long twist() const { return twist_; }

    Elem zero() const { return PadicInt(Prime(p_), Int(0), prec_); }
    Elem from_int(const Int& v) const { return PadicInt(Prime(p_), v, prec_); }
    Elem add(const Elem& x, const Elem& y) const { return x + y; }
    Elem neg(const Elem& x) const { return -x; }
    Elem smul(const PadicInt& c, const Elem& x) const { return c * x; }
    Elem smul_int(const Int& k, const Elem& x) const {
        return PadicInt(Prime(p_), k, x.precision()) * x;
    }
    ExtVal val(const Elem& x) const { return ExtVal::of(Rat(x.val())); }
    bool negligible(const Elem& x) const { return x.val_saturated(); }
    bool eq(const Elem& x, const Elem& y) const { return x == y; }
    std::string str(const Elem& x) const { return x.str(); }

    Elem gamma(const PadicInt& a, const Elem& x) const {
        if (!a.is_unit()) throw DomainError("PadicModule: group element must be a unit");
        if (twist_ == 0) return x;
        PadicInt base = twist_ > 0 ? a : a.unit_inverse();
        long e = twist_ > 0 ? twist_ : -twist_;
        return base.pow(Int(e)) * x;
    }

private:
    unsigned long p_;
    long prec_;
    long twist_;
};

// Fractional-exponent Laurent series over F_p known below a fixed cap;
// p-adic scalars act through their mod-p digit, units act by the
// exponent-scaling group action.
class SeriesModule {
public:
    using Elem = PerfLaurent;

    SeriesModule(Prime p, Rat cap) : p_(p.v), cap_(std::move(cap)) {}

    unsigned long prime() const { return p_; }
    const Rat& cap() const { return cap_; }

    Elem zero() const { return PerfLaurent::zero_cap(p_, cap_); }
    Elem add(const Elem& x, const Elem& y) const { return x + y; }
    Elem neg(const Elem& x) const { return -x; }
    Elem smul(const PadicInt& c, const Elem& x) const {
        if (c.prime() != p_) throw DomainError("SeriesModule: prime mismatch");
        return x.scal_mul(c.digit(0));
    }
    Elem smul_int(const Int& k, const Elem& x) const {
        Int r;
        mpz_fdiv_r_ui(r.get_mpz_t(), k.get_mpz_t(), p_);
        return x.scal_mul(r.get_ui());
    }
    ExtVal val(const Elem& x) const { return x.val(); }
    bool negligible(const Elem& x) const { return !x.has_terms(); }
    bool eq(const Elem& x, const Elem& y) const { return x == y; }
    std::string str(const Elem& x) const { return x.str(); }

    Elem gamma(const PadicInt& a, const Elem& x) const { return gamma_act(a, x); }

private:
    unsigned long p_;
    Rat cap_;
};

// Truncated Witt vectors over the series ring, valued by val_r at a
// fixed radius; p-adic scalars act through their residue mod p^len.
class WittModule {
public:
    using Elem = WittElem;

    WittModule(Prime p, int len, Rat r) : p_(p.v), len_(len), r_(std::move(r)) {
        if (len_ < 1 || len_ > 4) throw DomainError("WittModule: length out of range");
        if (r_ <= 0) throw DomainError("WittModule: radius must be positive");
    }

    unsigned long prime() const { return p_; }
    int len() const { return len_; }
    const Rat& radius() const { return r_; }

    Elem zero() const { return WittElem::zero(p_, len_); }
    Elem add(const Elem& x, const Elem& y) const { return x + y; }
    Elem neg(const Elem& x) const { return -x; }
    Elem smul(const PadicInt& c, const Elem& x) const {
        if (c.prime() != p_) throw DomainError("WittModule: prime mismatch");
        if (c.precision() < len_)
            throw InsufficientPrecision("WittModule: scalar needs precision >= length");
        return smul_int(c.residue(), x);
    }
    Elem smul_int(const Int& k, const Elem& x) const {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), k.get_mpz_t(),
                   int_pow(p_, static_cast<unsigned long>(len_)).get_mpz_t());
        return WittElem::from_int(p_, len_, r) * x;
    }
    ExtVal val(const Elem& x) const { return x.val_r(r_); }
    bool negligible(const Elem& x) const { return x.negligible(); }
    bool eq(const Elem& x, const Elem& y) const { return x == y; }
    std::string str(const Elem& x) const { return x.str(); }

    Elem gamma(const PadicInt& a, const Elem& x) const { return gamma_act_witt(a, x); }

private:
    unsigned long p_;
    int len_;
    Rat r_;
};

static_assert(GammaModule<PadicModule>);
static_assert(GammaModule<SeriesModule>);
static_assert(GammaModule<WittModule>);

} // namespace lav

#endif
