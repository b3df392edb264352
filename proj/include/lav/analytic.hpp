#ifndef LAV_ANALYTIC_HPP
#define LAV_ANALYTIC_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lav/mahler.hpp"

namespace lav {

// One-parameter subgroup of the principal units at a chosen level:
// the generator is (1+p)^(p^l) for odd p and 5^(2^l) for p = 2, so
// deeper levels sit further inside the unit group.
struct GroupContext {
    Prime p;
    long level;
    long prec;
    PadicInt generator;

    GroupContext(Prime p, long level, long prec = 64);

    // val_p(generator - 1): l+1 for odd p, l+2 for p = 2.
    long depth() const;

    // The coordinate chart x -> generator^x for integer x >= 0.
    PadicInt chart(const Int& x) const;
};

// val_p(a - 1) for a unit a; DomainError when a - 1 vanishes to the
// working precision.
long unit_depth(const PadicInt& a);

// floor(v Q) / Q, the largest point of the (1/Q)-grid not above v.
Rat quantize_down(const Rat& v, unsigned long Q);

// Mahler data of the orbit x -> g^x(m): coefficient n is (g-1)^n(m),
// computed by iterating the action.  The tail bound is read off the
// last coefficient, hence heuristic.
template <GammaModule H>
MahlerFn<H> orbit_mahler(const H& mod, const typename H::Elem& m, const PadicInt& g,
                         long N) {
    if (N < 0) throw DomainError("orbit length must be nonnegative");
    MahlerFn<H> f{mod, 1, N, {}, ExtVal::infinity(), true};
    f.coef.reserve(static_cast<std::size_t>(N) + 1);
    typename H::Elem cur = m;
    f.coef.push_back(cur);
    for (long n = 1; n <= N; ++n) {
        cur = mod.add(mod.gamma(g, cur), mod.neg(cur));
        f.coef.push_back(cur);
    }
    f.tail = mod.val(f.coef.back());
    return f;
}

template <GammaModule H>
MahlerFn<H> orbit_mahler(const H& mod, const typename H::Elem& m,
                         const GroupContext& ctx, long N) {
    return orbit_mahler(mod, m, ctx.generator, N);
}

struct LaWitness {
    long level = 0;
    AnalyticityWitness w;
};

struct WitnessProbe {
    long level = 0;
    Rat lambda;
    Rat mu;
    bool accepted = false;
};

// Scan levels in the given order and, within each level, the lambda
// grid in the given order; accept the first (level, lambda) whose best
// mu on the quantization grid does not fall below val(m).  The floor
// keeps the certificate tied to the size of m itself; without it any
// sufficiently negative mu would certify everything.  Orbit growth is
// demanded of the coefficients n >= 1 only.
template <GammaModule H>
std::optional<LaWitness> witness_search(const H& mod, const typename H::Elem& m,
                                        const std::vector<long>& levels,
                                        const std::vector<Rat>& lambdas, long N,
                                        long prec = 64,
                                        std::vector<WitnessProbe>* probes = nullptr) {
    unsigned long p = mod.prime();
    ExtVal vm = mod.val(m);
    bool floored = !vm.is_inf() && !mod.negligible(m);
    unsigned long p8 = 1;
    for (int i = 0; i < 8; ++i) p8 *= p;
    for (long l : levels) {
        GroupContext ctx(Prime(p), l, prec);
        MahlerFn<H> f = orbit_mahler(mod, m, ctx, N);
        f.coef[0] = mod.zero();
        for (const Rat& lam : lambdas) {
            if (!lam.get_den().fits_ulong_p())
                throw DomainError("lambda denominator too large");
            unsigned long Q = lam.get_den().get_ui() * p8;
            AnalyticityWitness w = analyticity_witness(f, lam, Q);
            bool ok = !floored || w.mu >= quantize_down(vm.finite(), Q);
            if (probes) probes->push_back({l, lam, w.mu, ok});
            if (ok) return LaWitness{l, w};
        }
    }
    return std::nullopt;
}

struct CSmallReport {
    Rat c;
    long level = -1;
    Rat lambda;
    bool uniformizer_ok = false;
    bool basis_ok = false;
    bool lambda_ok = false;
    bool c_small = false;
    ExtVal uniformizer_gap;
    std::vector<ExtVal> basis_gaps;
};

// Exact test that p^lambda exceeds c + 1.
bool radius_clears(unsigned long p, const Rat& lambda, const Rat& c);

// val((g-1) pi) > c, val((g-1) m_i) >= c for the listed elements, and
// p^lambda > c + 1 (all three strict or non-strict exactly as stated).
template <GammaModule H>
CSmallReport c_small_check(const H& mod, const PadicInt& g, long level, const Rat& lambda,
                           const Rat& c, const typename H::Elem& pi,
                           const std::vector<typename H::Elem>& basis) {
    CSmallReport r;
    r.c = c;
    r.level = level;
    r.lambda = lambda;
    auto moved = [&](const typename H::Elem& x) {
        return mod.val(mod.add(mod.gamma(g, x), mod.neg(x)));
    };
    r.uniformizer_gap = moved(pi);
    r.uniformizer_ok = r.uniformizer_gap > ExtVal::of(c);
    r.basis_ok = true;
    for (const auto& x : basis) {
        ExtVal v = moved(x);
        r.basis_gaps.push_back(v);
        if (!(v >= ExtVal::of(c))) r.basis_ok = false;
    }
    r.lambda_ok = radius_clears(mod.prime(), lambda, c);
    r.c_small = r.uniformizer_ok && r.basis_ok && r.lambda_ok;
    return r;
}

template <GammaModule H>
CSmallReport c_small_check(const H& mod, const GroupContext& ctx, const Rat& lambda,
                           const Rat& c, const typename H::Elem& pi,
                           const std::vector<typename H::Elem>& basis) {
    return c_small_check(mod, ctx.generator, ctx.level, lambda, c, pi, basis);
}

// Almost-trace witness for the trivial-subgroup case: the element 1,
// whose trace sum is 1 and whose valuation 0 beats every -c with c > 0.
struct TraceUnitWitness {
    Int alpha;
    Rat c1;
};

TraceUnitWitness ts1_witness(long n1, long n2, bool trivial_subgroup = true);

// Triangular inversion of gamma_act(a,.) - 1 on series with no
// monomials of depth <= n.
struct TS3Solution {
    PerfLaurent y;
    PerfLaurent residual;   // x - (gamma_act(a, y) - y), recomputed from scratch
    bool saturated = false; // residual has no terms below its cap
    ExtVal x_val;
    ExtVal y_val;
    Rat loss;               // val(x) - val(y) when both are finite
    long steps = 0;

    explicit TS3Solution(unsigned long p)
        : y(PerfLaurent::zero(p)), residual(PerfLaurent::zero(p)) {}
};

TS3Solution ts3_invert(const PerfLaurent& x, long n, const PadicInt& a,
                       long max_steps = 20000);

// Both sides of (a-1)(phiinv^n(T^k)) = phiinv^n(T^k) phiinv^n(A^k - 1)
// with A = sum_{m>=0} binom(a, m+1) T^m, checked mod p and in Witt
// length `length`, plus the valuation gain of a-1 on that monomial.
struct TS4Report {
    bool match_mod_p = false;
    bool match_witt = false;
    ExtVal lhs_val_mod_p;
    ExtVal lhs_val_witt;
    ExtVal base_val;     // val_r(phiinv^n(T^k))
    ExtVal gain_floor;   // min(val_r(p), val_r(phiinv^n(T)))
    bool gain_ok = false;
    bool trivial = false; // a = 1 to working precision: both sides vanish
};

TS4Report ts4_check(const PadicInt& a, long n, long k, int length, const Rat& cap,
                    const Rat& radius);

// The twisted difference F -> (x -> gamma(F(x+1)) - F(x)) on Mahler
// coefficients: entry m becomes (gamma - 1)(F_m) + gamma(F_{m+1}).
// The top entry uses a zero beyond the stored degree, so the result
// carries a heuristic tail.
template <GammaModule H>
MahlerFn<H> coboundary_apply(const H& mod, const PadicInt& g, const MahlerFn<H>& F) {
    if (F.d != 1) throw Unsupported("coboundary calculus is one-dimensional");
    MahlerFn<H> out{mod, 1, F.bound, {}, F.tail, true};
    out.coef.reserve(F.coef.size());
    for (long m = 0; m <= F.bound; ++m) {
        const auto& cur = F.coef[static_cast<std::size_t>(m)];
        auto v = mod.add(mod.gamma(g, cur), mod.neg(cur));
        if (m < F.bound)
            v = mod.add(v, mod.gamma(g, F.coef[static_cast<std::size_t>(m) + 1]));
        out.coef.push_back(std::move(v));
    }
    return out;
}

template <GammaModule H>
struct CoboundarySolution {
    MahlerFn<H> F;          // degree f.bound + K + 1
    MahlerFn<H> residual;   // coboundary_apply(F) - f
    long K = 0;
    Rat lambda_prime;
    ExtVal gain;            // measured minimal step of (gamma-1) along the chains
    ExtVal mu;              // min_n (val(m_n) - floor(p^lambda' n))
    ExtVal residual_weighted; // same weighting applied to the residual
    Rat defect;             // quantized amount by which the residual misses
                            // K(gain - p^lambda') + mu; <= 0 means the bound held
};

// Alternating series F(x) = sum_k (-1)^k sum_n b_{k,n} binom(x, n+k+1)
// with b_{0,n} = gamma^{-1}(m_n) and gamma(b_{k,n}) = (gamma-1)(b_{k-1,n}),
// which telescopes against the twisted difference to reproduce f up to
// the k = K boundary layer.
template <GammaModule H>
CoboundarySolution<H> coboundary_solve(const H& mod, const MahlerFn<H>& f,
                                       const PadicInt& g, const Rat& lambda_prime,
                                       long K) {
    if (f.d != 1) throw Unsupported("coboundary calculus is one-dimensional");
    if (K < 0) throw DomainError("truncation order must be nonnegative");
    unsigned long p = mod.prime();
    PadicInt ginv = g.unit_inverse();
    long N = f.bound;
    std::vector<std::vector<typename H::Elem>> b;
    b.reserve(static_cast<std::size_t>(K) + 1);
    std::vector<typename H::Elem> row;
    for (const auto& mn : f.coef) row.push_back(mod.gamma(ginv, mn));
    b.push_back(std::move(row));
    ExtVal gain = ExtVal::infinity();
    for (long k = 1; k <= K; ++k) {
        std::vector<typename H::Elem> next;
        next.reserve(b.back().size());
        for (const auto& prev : b.back()) {
            auto stepped = mod.add(mod.gamma(g, prev), mod.neg(prev));
            next.push_back(mod.gamma(ginv, stepped));
        }
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (mod.negligible(b.back()[i])) continue;
            ExtVal va = mod.val(b.back()[i]);
            ExtVal vb = mod.val(next[i]);
            if (!va.is_inf() && !vb.is_inf())
                gain = min(gain, ExtVal::of(vb.finite() - va.finite()));
        }
        b.push_back(std::move(next));
    }
    if (!gain.is_inf()) {
        PRootExpr margin = PRootExpr::from_rat(p, gain.finite());
        auto [ln, ld] = mahler_detail::rat_parts(lambda_prime);
        margin -= PRootExpr::ppow(p, ln, ld);
        if (margin.sign() <= 0)
            throw GainTooSmall("measured contraction does not beat p^lambda'");
    }

    CoboundarySolution<H> out{MahlerFn<H>{mod, 1, N + K + 1, {}, ExtVal::infinity(), true},
                              MahlerFn<H>{mod, 1, N + K + 1, {}, ExtVal::infinity(), true},
                              K,
                              lambda_prime,
                              gain,
                              ExtVal::infinity(),
                              ExtVal::infinity(),
                              Rat(0)};
    for (long j = 0; j <= N + K + 1; ++j) {
        std::optional<typename H::Elem> acc;
        long kmax = std::min<long>(K, j - 1);
        for (long k = 0; k <= kmax; ++k) {
            long n = j - k - 1;
            if (n > N) continue;
            const auto& term = b[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)];
            auto signed_term = (k % 2 == 0) ? term : mod.neg(term);
            acc = acc ? mod.add(*acc, signed_term) : signed_term;
        }
        out.F.coef.push_back(acc ? *acc : mod.zero());
    }

    MahlerFn<H> applied = coboundary_apply(mod, g, out.F);
    MahlerFn<H> fx{mod, 1, N + K + 1, f.coef, f.tail, true};
    fx.coef.resize(out.F.coef.size(), mod.zero());
    out.residual = mahler_sub(applied, fx);

    for (long n = 0; n <= N; ++n) {
        ExtVal v = mod.val(f.coef[static_cast<std::size_t>(n)]);
        if (v.is_inf()) continue;
        Rat w = v.finite() - Rat(floor_ppow_times(p, lambda_prime, Int(n)));
        out.mu = min(out.mu, ExtVal::of(w));
    }
    for (long n = 0; n <= N + K + 1; ++n) {
        ExtVal v = mod.val(out.residual.coef[static_cast<std::size_t>(n)]);
        if (v.is_inf()) continue;
        Rat w = v.finite() - Rat(floor_ppow_times(p, lambda_prime, Int(n)));
        out.residual_weighted = min(out.residual_weighted, ExtVal::of(w));
    }
    if (!out.residual_weighted.is_inf() && !gain.is_inf() && !out.mu.is_inf()) {
        PRootExpr pred = PRootExpr::from_rat(p, gain.finite());
        auto [ln, ld] = mahler_detail::rat_parts(lambda_prime);
        pred -= PRootExpr::ppow(p, ln, ld);
        pred.scale(Rat(K));
        pred.add_rat(out.mu.finite() - out.residual_weighted.finite());
        PRootExpr scaled = pred;
        unsigned long Q = 64 * static_cast<unsigned long>(ld);
        scaled.scale(Rat(static_cast<long>(Q)));
        Int num = scaled.floor() + 1;
        Rat d(num, Int(static_cast<long>(Q)));
        d.canonicalize();
        out.defect = d; // smallest grid point strictly above the exact defect
    } else {
        out.defect = Rat(0);
    }
    return out;
}

// Measured valuation of gamma_act(a, X^(1/p^j)) - X^(1/p^j) against the
// expected p^(depth(a) - j).
struct SharpSmoothReport {
    long j = 0;
    long m = -1;           // unit_depth(a); -1 when a = 1 to precision
    ExtVal measured;
    Rat expected;
    bool ok = false;
};

SharpSmoothReport sharp_smooth_check(unsigned long p, long j, const PadicInt& a,
                                     const Rat& cap);

} // namespace lav

#endif
