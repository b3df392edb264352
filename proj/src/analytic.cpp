#include "lav/analytic.hpp"

#include <algorithm>

namespace lav {

namespace {

long long pow_ll(unsigned long b, long e) {
    long long out = 1;
    for (long i = 0; i < e; ++i) {
        if (out > (1LL << 56) / static_cast<long long>(b))
            throw DomainError("exponent lattice too deep");
        out *= static_cast<long long>(b);
    }
    return out;
}

unsigned long inv_mod_p(unsigned long c, unsigned long p) {
    c %= p;
    for (unsigned long i = 1; i < p; ++i)
        if ((c * i) % p == 1) return i;
    throw DomainError("no inverse mod p");
}

bool series_common_eq(const PerfLaurent& a, const PerfLaurent& b) {
    std::optional<Rat> c;
    if (a.is_capped()) c = a.cap();
    if (b.is_capped()) c = c ? std::min(*c, b.cap()) : b.cap();
    if (!c) return a == b;
    return a.truncate(*c) == b.truncate(*c);
}

bool witt_common_eq(const WittElem& a, const WittElem& b) {
    if (a.len() != b.len() || a.prime() != b.prime()) return false;
    for (int i = 0; i < a.len(); ++i)
        if (!series_common_eq(a.digit(i), b.digit(i))) return false;
    return true;
}

WittElem witt_pow(const WittElem& base, long k) {
    WittElem acc = base;
    for (long i = 1; i < k; ++i) acc = acc * base;
    return acc;
}

} // namespace

GroupContext::GroupContext(Prime p_, long level_, long prec_)
    : p(p_), level(level_), prec(prec_), generator(p_, Int(0), 1) {
    if (level < 0) throw DomainError("level must be nonnegative");
    if (prec < 4) throw DomainError("context precision too small");
    Int base = p.v == 2 ? Int(5) : Int(static_cast<long>(p.v) + 1);
    Int e = int_pow(p.v == 2 ? 2 : p.v, static_cast<unsigned long>(level));
    generator = PadicInt(p, base, prec).pow(e);
}

long GroupContext::depth() const { return level + (p.v == 2 ? 2 : 1); }

PadicInt GroupContext::chart(const Int& x) const {
    if (x < 0) throw DomainError("chart argument must be nonnegative");
    return generator.pow(x);
}

long unit_depth(const PadicInt& a) {
    if (!a.is_unit()) throw DomainError("group element must be a unit");
    PadicInt d = a - 1;
    if (d.val_saturated())
        throw DomainError("unit depth undefined: the element is 1 to precision");
    return d.val();
}

Rat quantize_down(const Rat& v, unsigned long Q) {
    if (Q == 0) throw DomainError("grid must be positive");
    Rat t = v * static_cast<long>(Q);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    Rat out(q, Int(static_cast<long>(Q)));
    out.canonicalize();
    return out;
}

bool radius_clears(unsigned long p, const Rat& lambda, const Rat& c) {
    auto [n, d] = mahler_detail::rat_parts(lambda);
    PRootExpr e = PRootExpr::ppow(p, n, d);
    e.add_rat(-(c + 1));
    return e.sign() > 0;
}

TraceUnitWitness ts1_witness(long n1, long n2, bool trivial_subgroup) {
    if (!trivial_subgroup)
        throw Unsupported("almost-trace witnesses cover the trivial subgroup only");
    if (n1 > n2) throw DomainError("tower indices must be ordered");
    return TraceUnitWitness{Int(1), Rat(0)};
}

TS3Solution ts3_invert(const PerfLaurent& x, long n, const PadicInt& a, long max_steps) {
    if (n < 0) throw DomainError("projection depth must be nonnegative");
    unsigned long p = x.prime();
    if (a.prime() != p) throw DomainError("prime mismatch");
    TS3Solution out(p);
    out.x_val = x.val();
    if (!x.has_terms()) {
        out.y = x.is_capped() ? PerfLaurent::zero_cap(p, x.cap()) : PerfLaurent::zero(p);
        out.residual = x;
        out.saturated = true;
        out.y_val = out.y.val();
        out.loss = Rat(0);
        return out;
    }
    if (x.monomial_projection(n).has_terms())
        throw DomainError("target must vanish under the depth-n projection");
    if (!x.is_capped()) throw DomainError("the solve needs a capped target");
    long s = unit_depth(a);
    unsigned long u = (a - 1).div_p(s).digit(0);
    long long ps = pow_ll(p, s);

    PerfLaurent y = PerfLaurent::zero_cap(p, x.cap());
    PerfLaurent r = x;
    std::optional<Rat> last;
    while (r.has_terms()) {
        if (++out.steps > max_steps)
            throw SolveStalled("inversion exceeded the step budget");
        auto [e, c] = r.lowest();
        if (last && !(e > *last)) throw SolveStalled("inversion made no progress");
        last = e;
        FracExp fe = fracexp_of(p, e);
        long long k = 0;
        int dm = 0;
        for (;; ++dm) {
            if (dm > 62) throw SolveStalled("no candidate on the exponent lattice");
            k = fe.k * pow_ll(p, dm) - ps + 1;
            bool unit = ((k % static_cast<long long>(p)) + static_cast<long long>(p)) %
                            static_cast<long long>(p) !=
                        0;
            if (unit && (fe.k <= 0 || k >= 1)) break;
        }
        unsigned long kU = static_cast<unsigned long>(
            ((k % static_cast<long long>(p)) + static_cast<long long>(p)) %
            static_cast<long long>(p));
        unsigned long pivot = (kU * u) % p;
        unsigned long cy = (c * inv_mod_p(pivot, p)) % p;
        Rat ce(Int(static_cast<long>(k)), int_pow(p, static_cast<unsigned long>(fe.m + dm)));
        ce.canonicalize();
        PerfLaurent cand = PerfLaurent::monomial_cap(p, ce, cy, r.cap());
        PerfLaurent image = gamma_act(a, cand) - cand;
        r = r - image;
        y = y + cand;
    }
    out.y = y;
    PerfLaurent back = gamma_act(a, y) - y;
    out.residual = x - back;
    out.saturated = !out.residual.has_terms();
    out.y_val = y.val();
    out.loss = (!out.x_val.is_inf() && !out.y_val.is_inf())
                   ? Rat(out.x_val.finite() - out.y_val.finite())
                   : Rat(0);
    return out;
}

TS4Report ts4_check(const PadicInt& a, long n, long k, int length, const Rat& cap,
                    const Rat& radius) {
    unsigned long p = a.prime();
    if (n < 0 || k < 1) throw DomainError("need n >= 0 and k >= 1");
    if (a.digit(0) != 1)
        throw DomainError("group element must be congruent to 1 mod p");
    TS4Report rep;
    rep.trivial = (a - 1).val_saturated();

    Int mtop;
    mpz_cdiv_q(mtop.get_mpz_t(), cap.get_num_mpz_t(), cap.get_den_mpz_t());
    if (!mtop.fits_slong_p()) throw DomainError("cap too large");
    long M = mtop.get_si();

    {
        PerfLaurent t = PerfLaurent::monomial_cap(p, Rat(1), 1, cap);
        PerfLaurent tn = t;
        for (long i = 0; i < n; ++i) tn = tn.pth_root();
        PerfLaurent tnk = tn.pow(k);
        PerfLaurent lhs = gamma_act(a, tnk) - tnk;
        rep.lhs_val_mod_p = lhs.val();

        PerfLaurent A = PerfLaurent::zero_cap(p, cap);
        for (long m = 0; m <= M; ++m) {
            unsigned long c = binom_padic_mod_p(a, Int(m + 1));
            if (c == 0) continue;
            A = A + PerfLaurent::monomial_cap(p, Rat(m), c, cap);
        }
        PerfLaurent inner = A.pow(k) - PerfLaurent::one(p);
        for (long i = 0; i < n; ++i) inner = inner.pth_root();
        PerfLaurent rhs = tnk * inner;
        rep.match_mod_p = series_common_eq(lhs, rhs);

        Rat need(Int(k + 1), int_pow(p, static_cast<unsigned long>(n)));
        need.canonicalize();
        bool modp_gain = !lhs.has_terms() || !(lhs.val() < ExtVal::of(need));
        rep.gain_ok = modp_gain;
    }

    {
        WittElem T = WittElem::element_T(p, length, cap);
        WittElem Tn = T;
        for (long i = 0; i < n; ++i) Tn = Tn.phi_inv();
        WittElem Tnk = witt_pow(Tn, k);
        WittElem lhs = gamma_act_witt(a, Tnk) - Tnk;
        rep.lhs_val_witt = lhs.val_r(radius);
        rep.base_val = Tnk.val_r(radius);

        WittElem one = WittElem::from_int(p, length, Int(1));
        WittElem A = WittElem::zero(p, length);
        WittElem Tpow = one;
        for (long m = 0; m <= M; ++m) {
            PadicInt c = binom_padic(a, static_cast<unsigned long>(m + 1));
            if (c.precision() < length)
                throw InsufficientPrecision("binomial coefficient too shallow for the Witt length");
            if (!c.val_saturated())
                A = A + WittElem::from_int(p, length, c.residue()) * Tpow;
            if (m < M) Tpow = Tpow * T;
        }
        WittElem inner = witt_pow(A, k) - one;
        for (long i = 0; i < n; ++i) inner = inner.phi_inv();
        WittElem rhs = Tnk * inner;
        rep.match_witt = witt_common_eq(lhs, rhs);

        ExtVal punit = WittElem::from_int(p, length, Int(static_cast<long>(p))).val_r(radius);
        rep.gain_floor = min(punit, Tn.val_r(radius));
        bool witt_gain = lhs.negligible() ||
                         !(rep.lhs_val_witt < rep.base_val + rep.gain_floor);
        rep.gain_ok = rep.gain_ok && witt_gain;
    }
    return rep;
}

SharpSmoothReport sharp_smooth_check(unsigned long p, long j, const PadicInt& a,
                                     const Rat& cap) {
    if (j < 0) throw DomainError("root depth must be nonnegative");
    SharpSmoothReport r;
    r.j = j;
    Rat e(Int(1), int_pow(p, static_cast<unsigned long>(j)));
    e.canonicalize();
    PerfLaurent x = PerfLaurent::monomial_cap(p, e, 1, cap);
    PerfLaurent d = gamma_act(a, x) - x;
    r.measured = d.val();
    PadicInt am1 = a - 1;
    if (am1.val_saturated()) {
        r.m = -1;
        r.expected = Rat(0);
        r.ok = !d.has_terms();
        return r;
    }
    r.m = am1.val();
    r.expected = Rat(int_pow(p, static_cast<unsigned long>(r.m)),
                     int_pow(p, static_cast<unsigned long>(j)));
    r.expected.canonicalize();
    r.ok = d.has_terms() && r.measured == ExtVal::of(r.expected);
    return r;
}

} // namespace lav
