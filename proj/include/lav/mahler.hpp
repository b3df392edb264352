#ifndef LAV_MAHLER_HPP
#define LAV_MAHLER_HPP

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lav/modules.hpp"

namespace lav {

namespace mahler_detail {

inline std::size_t box_size(int d, long N) {
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) {
        s *= static_cast<std::size_t>(N + 1);
        if (s > (1u << 24)) throw BudgetExceeded("grid too large");
    }
    return s;
}

// Layout follows next_in_box: the first coordinate varies fastest.
inline std::size_t box_index(const MultiIndex& n, long N) {
    std::size_t idx = 0;
    for (std::size_t i = n.size(); i-- > 0;)
        idx = idx * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(n[i]);
    return idx;
}

inline std::size_t axis_stride(int d, int axis, long N) {
    (void)d;
    std::size_t s = 1;
    for (int i = 0; i < axis; ++i) s *= static_cast<std::size_t>(N + 1);
    return s;
}

// Base offsets of all lines parallel to the given axis.
inline std::vector<std::size_t> line_bases(int d, int axis, long N) {
    std::vector<std::size_t> out;
    MultiIndex n(static_cast<std::size_t>(d), 0);
    do {
        if (n[static_cast<std::size_t>(axis)] != 0) continue;
        out.push_back(box_index(n, N));
    } while (next_in_box(n, N));
    return out;
}

inline std::pair<long, unsigned long> rat_parts(const Rat& q) {
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_ulong_p())
        throw DomainError("rational parameter too large");
    return {q.get_num().get_si(), static_cast<unsigned long>(q.get_den().get_ui())};
}

// p^(lam + L) as an exact root expression.
inline PRootExpr ppow_shifted(unsigned long p, const Rat& lam, long L) {
    auto [a, b] = rat_parts(lam);
    return PRootExpr::ppow(p, a + L * static_cast<long>(b), b);
}

} // namespace mahler_detail

// A function Z_p^d -> M recorded by its values on the grid [0, N]^d,
// enough to recover every Mahler coefficient with |n|_inf <= N.
template <ValuedModule H>
struct GridFn {
    H mod;
    int d;
    long bound;
    std::vector<typename H::Elem> vals;
};

// A function Z_p^d -> M recorded by its Mahler coefficients a_n for
// |n|_inf <= bound, plus a valuation lower bound for everything beyond.
// heuristic marks data whose tail bound was measured, not certified.
template <ValuedModule H>
struct MahlerFn {
    H mod;
    int d;
    long bound;
    std::vector<typename H::Elem> coef;
    ExtVal tail = ExtVal::infinity();
    bool heuristic = false;

    const typename H::Elem& at(const MultiIndex& n) const {
        return coef[mahler_detail::box_index(n, bound)];
    }
};

template <ValuedModule H, class F>
GridFn<H> grid_sample(const H& mod, int d, long N, F&& f) {
    GridFn<H> g{mod, d, N, {}};
    g.vals.reserve(mahler_detail::box_size(d, N));
    MultiIndex n(static_cast<std::size_t>(d), 0);
    do {
        g.vals.push_back(f(n));
    } while (next_in_box(n, N));
    return g;
}

template <ValuedModule H>
MahlerFn<H> make_mahler(const H& mod, int d, long N,
                        const std::vector<std::pair<MultiIndex, typename H::Elem>>& entries,
                        ExtVal tail = ExtVal::infinity(), bool heuristic = false) {
    MahlerFn<H> f{mod, d, N, {}, tail, heuristic};
    f.coef.assign(mahler_detail::box_size(d, N), mod.zero());
    for (const auto& [n, e] : entries) {
        if (static_cast<int>(n.size()) != d) throw DomainError("index dimension mismatch");
        if (mi_abs_max(n) > N) throw DomainError("index outside the box");
        f.coef[mahler_detail::box_index(n, N)] = e;
    }
    return f;
}

// Coefficients a_n = (iterated forward differences of f)(0); the tail
// bound is read off the outermost shell, hence heuristic.
template <ValuedModule H>
MahlerFn<H> mahler_coeffs(const GridFn<H>& g) {
    MahlerFn<H> f{g.mod, g.d, g.bound, g.vals, ExtVal::infinity(), true};
    long N = g.bound;
    for (int axis = 0; axis < g.d; ++axis) {
        std::size_t stride = mahler_detail::axis_stride(g.d, axis, N);
        for (std::size_t base : mahler_detail::line_bases(g.d, axis, N)) {
            for (long step = 1; step <= N; ++step)
                for (long k = N; k >= step; --k) {
                    auto& hi = f.coef[base + static_cast<std::size_t>(k) * stride];
                    const auto& lo = f.coef[base + static_cast<std::size_t>(k - 1) * stride];
                    hi = g.mod.add(hi, g.mod.neg(lo));
                }
        }
    }
    ExtVal shell = ExtVal::infinity();
    MultiIndex n(static_cast<std::size_t>(g.d), 0);
    do {
        if (mi_abs_max(n) == N || N == 0)
            shell = min(shell, g.mod.val(f.coef[mahler_detail::box_index(n, N)]));
    } while (next_in_box(n, N));
    f.tail = shell;
    return f;
}

// Values on the grid [0, N]^d, by running the difference tables backwards.
template <ValuedModule H>
GridFn<H> grid_of(const MahlerFn<H>& f) {
    GridFn<H> g{f.mod, f.d, f.bound, f.coef};
    long N = f.bound;
    for (int axis = 0; axis < f.d; ++axis) {
        std::size_t stride = mahler_detail::axis_stride(f.d, axis, N);
        for (std::size_t base : mahler_detail::line_bases(f.d, axis, N)) {
            for (long step = N; step >= 1; --step)
                for (long k = step; k <= N; ++k) {
                    auto& hi = g.vals[base + static_cast<std::size_t>(k) * stride];
                    const auto& lo = g.vals[base + static_cast<std::size_t>(k - 1) * stride];
                    hi = f.mod.add(hi, lo);
                }
        }
    }
    return g;
}

template <ValuedModule H>
typename H::Elem eval_at_ints(const MahlerFn<H>& f, const std::vector<Int>& x) {
    if (static_cast<int>(x.size()) != f.d) throw DomainError("point dimension mismatch");
    long N = f.bound;
    std::vector<std::vector<Int>> binoms(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (long k = 0; k <= N; ++k) binoms[i].push_back(binom_int(x[i], static_cast<unsigned long>(k)));
    std::optional<typename H::Elem> acc;
    MultiIndex n(static_cast<std::size_t>(f.d), 0);
    do {
        Int c = 1;
        for (std::size_t i = 0; i < x.size(); ++i)
            c *= binoms[i][static_cast<std::size_t>(n[i])];
        if (c == 0) continue;
        auto term = f.mod.smul_int(c, f.at(n));
        acc = acc ? f.mod.add(*acc, term) : term;
    } while (next_in_box(n, N));
    return acc ? *acc : f.mod.zero();
}

template <ValuedModule H>
typename H::Elem eval_at(const MahlerFn<H>& f, const std::vector<PadicInt>& x) {
    if (static_cast<int>(x.size()) != f.d) throw DomainError("point dimension mismatch");
    long N = f.bound;
    std::vector<std::vector<PadicInt>> binoms(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (long k = 0; k <= N; ++k)
            binoms[i].push_back(binom_padic(x[i], static_cast<unsigned long>(k)));
    auto acc = f.mod.zero();
    MultiIndex n(static_cast<std::size_t>(f.d), 0);
    do {
        PadicInt c = binoms[0][static_cast<std::size_t>(n[0])];
        for (std::size_t i = 1; i < x.size(); ++i)
            c = c * binoms[i][static_cast<std::size_t>(n[i])];
        acc = f.mod.add(acc, f.mod.smul(c, f.at(n)));
    } while (next_in_box(n, N));
    return acc;
}

// Coefficient shift a_n -> a_{n+k}; stored entries pushed outside the
// shrunken box fold into the tail bound.
template <ValuedModule H>
MahlerFn<H> delta_multi(const MahlerFn<H>& f, const MultiIndex& k) {
    if (static_cast<int>(k.size()) != f.d) throw DomainError("index dimension mismatch");
    for (long c : k)
        if (c < 0) throw DomainError("difference order must be nonnegative");
    long drop = mi_abs_max(k);
    if (drop > f.bound) throw BudgetExceeded("difference order exceeds stored degree");
    long N = f.bound - drop;
    MahlerFn<H> out{f.mod, f.d, N, {}, f.tail, f.heuristic};
    out.coef.reserve(mahler_detail::box_size(f.d, N));
    MultiIndex n(static_cast<std::size_t>(f.d), 0);
    do {
        MultiIndex m = n;
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += k[i];
        out.coef.push_back(f.at(m));
    } while (next_in_box(n, N));
    ExtVal dropped = f.tail;
    MultiIndex m(static_cast<std::size_t>(f.d), 0);
    do {
        bool copied = true;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] < k[i] || m[i] - k[i] > N) copied = false;
        if (!copied) dropped = min(dropped, f.mod.val(f.at(m)));
    } while (next_in_box(m, f.bound));
    out.tail = dropped;
    return out;
}

// k-fold unit difference of grid data along each axis; the usable box
// shrinks by the largest order.
template <ValuedModule H>
GridFn<H> delta_grid(const GridFn<H>& g, const MultiIndex& k) {
    if (static_cast<int>(k.size()) != g.d) throw DomainError("index dimension mismatch");
    long drop = mi_abs_max(k);
    if (drop > g.bound) throw BudgetExceeded("difference order exceeds grid extent");
    std::vector<typename H::Elem> work = g.vals;
    long N = g.bound;
    for (int axis = 0; axis < g.d; ++axis) {
        std::size_t stride = mahler_detail::axis_stride(g.d, axis, N);
        long limit = N;
        for (long rep = 0; rep < k[static_cast<std::size_t>(axis)]; ++rep) {
            --limit;
            for (std::size_t base : mahler_detail::line_bases(g.d, axis, N))
                for (long j = 0; j <= limit; ++j) {
                    auto& lo = work[base + static_cast<std::size_t>(j) * stride];
                    const auto& hi = work[base + static_cast<std::size_t>(j + 1) * stride];
                    lo = g.mod.add(hi, g.mod.neg(lo));
                }
        }
    }
    long M = g.bound - drop;
    GridFn<H> out{g.mod, g.d, M, {}};
    out.vals.reserve(mahler_detail::box_size(g.d, M));
    MultiIndex n(static_cast<std::size_t>(g.d), 0);
    do {
        out.vals.push_back(work[mahler_detail::box_index(n, N)]);
    } while (next_in_box(n, M));
    return out;
}

// Difference by the integer step b along one axis, on coefficients:
// a_n picks up sum_{j>=1} binom(b, j) a_{n + j e_axis}.
template <ValuedModule H>
MahlerFn<H> delta_step_int(const MahlerFn<H>& f, const Int& b, int axis) {
    if (axis < 0 || axis >= f.d) throw DomainError("axis out of range");
    long N = f.bound;
    std::vector<Int> binoms;
    for (long j = 0; j <= N; ++j) binoms.push_back(binom_int(b, static_cast<unsigned long>(j)));
    MahlerFn<H> out{f.mod, f.d, N, f.coef, f.tail, f.heuristic || !f.tail.is_inf()};
    std::size_t stride = mahler_detail::axis_stride(f.d, axis, N);
    for (std::size_t base : mahler_detail::line_bases(f.d, axis, N)) {
        for (long k = 0; k <= N; ++k) {
            std::optional<typename H::Elem> acc;
            for (long j = 1; k + j <= N; ++j) {
                if (binoms[static_cast<std::size_t>(j)] == 0) continue;
                auto term = f.mod.smul_int(binoms[static_cast<std::size_t>(j)],
                                           f.coef[base + static_cast<std::size_t>(k + j) * stride]);
                acc = acc ? f.mod.add(*acc, term) : term;
            }
            out.coef[base + static_cast<std::size_t>(k) * stride] = acc ? *acc : f.mod.zero();
        }
    }
    return out;
}

// Shift by an integer vector: per axis, a_n -> sum_{j>=0} binom(z, j) a_{n+j}.
template <ValuedModule H>
MahlerFn<H> shift_int(const MahlerFn<H>& f, const std::vector<Int>& z) {
    if (static_cast<int>(z.size()) != f.d) throw DomainError("point dimension mismatch");
    long N = f.bound;
    MahlerFn<H> out = f;
    out.heuristic = f.heuristic || !f.tail.is_inf();
    for (int axis = 0; axis < f.d; ++axis) {
        if (z[static_cast<std::size_t>(axis)] == 0) continue;
        std::vector<Int> binoms;
        for (long j = 0; j <= N; ++j)
            binoms.push_back(binom_int(z[static_cast<std::size_t>(axis)], static_cast<unsigned long>(j)));
        std::vector<typename H::Elem> next = out.coef;
        std::size_t stride = mahler_detail::axis_stride(f.d, axis, N);
        for (std::size_t base : mahler_detail::line_bases(f.d, axis, N))
            for (long k = 0; k <= N; ++k) {
                std::optional<typename H::Elem> acc;
                for (long j = 0; k + j <= N; ++j) {
                    if (binoms[static_cast<std::size_t>(j)] == 0) continue;
                    auto term = f.mod.smul_int(binoms[static_cast<std::size_t>(j)],
                                               out.coef[base + static_cast<std::size_t>(k + j) * stride]);
                    acc = acc ? f.mod.add(*acc, term) : term;
                }
                next[base + static_cast<std::size_t>(k) * stride] = acc ? *acc : f.mod.zero();
            }
        out.coef = std::move(next);
    }
    return out;
}

// Shift by a p-adic vector, through binom(z, j) at the precision of z.
template <ValuedModule H>
MahlerFn<H> shift(const MahlerFn<H>& f, const std::vector<PadicInt>& z) {
    if (static_cast<int>(z.size()) != f.d) throw DomainError("point dimension mismatch");
    long N = f.bound;
    MahlerFn<H> out = f;
    out.heuristic = f.heuristic || !f.tail.is_inf();
    for (int axis = 0; axis < f.d; ++axis) {
        std::vector<PadicInt> binoms;
        for (long j = 0; j <= N; ++j)
            binoms.push_back(binom_padic(z[static_cast<std::size_t>(axis)], static_cast<unsigned long>(j)));
        std::vector<typename H::Elem> next = out.coef;
        std::size_t stride = mahler_detail::axis_stride(f.d, axis, N);
        for (std::size_t base : mahler_detail::line_bases(f.d, axis, N))
            for (long k = 0; k <= N; ++k) {
                auto acc = f.mod.smul(binoms[0], out.coef[base + static_cast<std::size_t>(k) * stride]);
                for (long j = 1; k + j <= N; ++j)
                    acc = f.mod.add(acc, f.mod.smul(binoms[static_cast<std::size_t>(j)],
                                                    out.coef[base + static_cast<std::size_t>(k + j) * stride]));
                next[base + static_cast<std::size_t>(k) * stride] = acc;
            }
        out.coef = std::move(next);
    }
    return out;
}

template <ValuedModule H>
MahlerFn<H> mahler_sub(const MahlerFn<H>& a, const MahlerFn<H>& b) {
    if (a.d != b.d || a.bound != b.bound) throw DomainError("shape mismatch");
    MahlerFn<H> out = a;
    for (std::size_t i = 0; i < out.coef.size(); ++i)
        out.coef[i] = a.mod.add(a.coef[i], a.mod.neg(b.coef[i]));
    out.tail = min(a.tail, b.tail);
    out.heuristic = a.heuristic || b.heuristic;
    return out;
}

// k-fold difference along the direction y.
template <ValuedModule H>
MahlerFn<H> delta_dir(const MahlerFn<H>& f, const std::vector<PadicInt>& y, long k) {
    MahlerFn<H> out = f;
    for (long i = 0; i < k; ++i) out = mahler_sub(shift(out, y), out);
    return out;
}

template <ValuedModule H>
ExtVal val_op(const MahlerFn<H>& f) {
    ExtVal v = f.tail;
    for (const auto& c : f.coef) v = min(v, f.mod.val(c));
    return v;
}

template <ValuedModule H>
ExtVal grid_min_val(const GridFn<H>& g) {
    ExtVal v = ExtVal::infinity();
    for (const auto& c : g.vals) v = min(v, g.mod.val(c));
    return v;
}

// min_n (val(a_n) - sum_i floor(p^lam n_i)); only meaningful when the
// tail vanishes, since the weight grows without bound.
template <ValuedModule H>
ExtVal val_lambda(const MahlerFn<H>& f, const Rat& lam) {
    if (!f.tail.is_inf())
        throw TailUnbounded("weighted valuation needs an exact (zero) tail");
    unsigned long p = f.mod.prime();
    ExtVal best = ExtVal::infinity();
    MultiIndex n(static_cast<std::size_t>(f.d), 0);
    do {
        ExtVal v = f.mod.val(f.at(n));
        if (v.is_inf()) continue;
        Rat w = v.finite() - Rat(floor_weighted(p, lam, n));
        best = min(best, ExtVal::of(w));
    } while (next_in_box(n, f.bound));
    return best;
}

// val(a_n) >= p^lam p^{floor log_p |n|_inf} + mu for every stored n,
// the n = 0 entry checked against p^lam + mu.
template <ValuedModule H>
bool check_cond1(const MahlerFn<H>& f, const Rat& lam, const Rat& mu) {
    unsigned long p = f.mod.prime();
    MultiIndex n(static_cast<std::size_t>(f.d), 0);
    do {
        ExtVal v = f.mod.val(f.at(n));
        if (v.is_inf()) continue;
        PRootExpr lhs = PRootExpr::from_rat(p, v.finite() - mu);
        lhs -= mahler_detail::ppow_shifted(p, lam, log_level(p, n));
        if (lhs.sign() < 0) return false;
    } while (next_in_box(n, f.bound));
    return true;
}

// val^op(Delta_i^n f) >= p^lam p^{floor log_p n} + mu for every axis i
// and 0 <= n <= bound, evaluated on the stored grid.
template <ValuedModule H>
bool check_cond2(const GridFn<H>& g, const Rat& lam, const Rat& mu) {
    unsigned long p = g.mod.prime();
    long N = g.bound;
    for (int axis = 0; axis < g.d; ++axis) {
        std::vector<typename H::Elem> work = g.vals;
        std::size_t stride = mahler_detail::axis_stride(g.d, axis, N);
        auto bases = mahler_detail::line_bases(g.d, axis, N);
        for (long n = 0; n <= N; ++n) {
            ExtVal v = ExtVal::infinity();
            MultiIndex m(static_cast<std::size_t>(g.d), 0);
            do {
                if (m[static_cast<std::size_t>(axis)] > N - n) continue;
                v = min(v, g.mod.val(work[mahler_detail::box_index(m, N)]));
            } while (next_in_box(m, N));
            if (!v.is_inf()) {
                PRootExpr lhs = PRootExpr::from_rat(p, v.finite() - mu);
                lhs -= mahler_detail::ppow_shifted(p, lam, log_level(p, MultiIndex{n}));
                if (lhs.sign() < 0) return false;
            }
            if (n == N) break;
            long limit = N - n - 1;
            for (std::size_t base : bases)
                for (long j = 0; j <= limit; ++j) {
                    auto& lo = work[base + static_cast<std::size_t>(j) * stride];
                    const auto& hi = work[base + static_cast<std::size_t>(j + 1) * stride];
                    lo = g.mod.add(hi, g.mod.neg(lo));
                }
        }
    }
    return true;
}

struct AnalyticityWitness {
    Rat lambda;
    Rat mu;
    long checked_up_to = 0;
};

// For a fixed lambda, the best mu on the grid (1/Q)Z such that every
// stored coefficient satisfies the growth bound.
template <ValuedModule H>
AnalyticityWitness analyticity_witness(const MahlerFn<H>& f, const Rat& lam,
                                       unsigned long Q) {
    if (Q == 0) throw DomainError("witness grid must be positive");
    unsigned long p = f.mod.prime();
    std::optional<PRootExpr> best;
    MultiIndex n(static_cast<std::size_t>(f.d), 0);
    do {
        ExtVal v = f.mod.val(f.at(n));
        if (v.is_inf()) continue;
        PRootExpr e = PRootExpr::from_rat(p, v.finite());
        e -= mahler_detail::ppow_shifted(p, lam, log_level(p, n));
        if (!best || (*best - e).sign() > 0) best = e;
    } while (next_in_box(n, f.bound));
    Rat mu(0);
    if (best) {
        PRootExpr scaled = *best;
        scaled.scale(Rat(static_cast<long>(Q)));
        mu = Rat(scaled.floor(), Int(static_cast<long>(Q)));
        mu.canonicalize();
    }
    return AnalyticityWitness{lam, mu, f.bound};
}

// Largest lambda from the list (scanned in the given order) whose best
// mu clears mu_min; ties resolve to the earliest hit.
template <ValuedModule H>
std::optional<AnalyticityWitness> witness_scan(const MahlerFn<H>& f,
                                               const std::vector<Rat>& lambdas,
                                               const Rat& mu_min, unsigned long Q) {
    for (const Rat& lam : lambdas) {
        AnalyticityWitness w = analyticity_witness(f, lam, Q);
        if (w.mu >= mu_min) return w;
    }
    return std::nullopt;
}

// True when inf_{j>=1} (p^lam j - 1 + val_p binom(p^l, j)) > c.  The
// scan stops once p^lam j - 1 alone clears c, which bounds every later
// term from below.
inline bool gain_exceeds(unsigned long p, const Rat& lam, long l, const Rat& c) {
    auto [a, b] = mahler_detail::rat_parts(lam);
    Int P = int_pow(p, static_cast<unsigned long>(l));
    for (long j = 1;; ++j) {
        if (j > 10000000L) throw BudgetExceeded("gain scan did not close");
        PRootExpr head = PRootExpr::ppow(p, a, b);
        head.scale(Rat(j));
        head.add_rat(-1 - c);
        if (head.sign() > 0) return true;
        if (Int(j) > P) continue;
        long vb = binom_val_p(p, P, Int(j));
        PRootExpr term = PRootExpr::ppow(p, a, b);
        term.scale(Rat(j));
        term.add_rat(Rat(vb) - 1 - c);
        if (term.sign() <= 0) return false;
    }
}

// Least l >= 0 whose difference step by p^l gains more than c in the
// lambda-weighted valuation.
inline long gain_level(unsigned long p, const Rat& lam, const Rat& c) {
    if (c <= 0) throw DomainError("gain must be positive");
    for (long l = 0; l <= 64; ++l)
        if (gain_exceeds(p, lam, l, c)) return l;
    throw BudgetExceeded("no level up to 64 certifies the gain");
}

// Largest lambda' = k/Q with inf_j (p^lam j - 1 + val_p binom(p^l, j))
// strictly above p^{lambda'} + 1, i.e. the class certified for the
// restriction to p^l Z_p^d.
inline Rat restricted_lambda(unsigned long p, const Rat& lam, long l, unsigned long Q) {
    if (Q == 0) throw DomainError("grid must be positive");
    auto [a, b] = mahler_detail::rat_parts(lam);
    Int P = int_pow(p, static_cast<unsigned long>(l));
    auto certifies = [&](long k) {
        PRootExpr target = PRootExpr::ppow(p, k, Q);
        for (long j = 1;; ++j) {
            if (j > 10000000L) throw BudgetExceeded("gain scan did not close");
            PRootExpr head = PRootExpr::ppow(p, a, b);
            head.scale(Rat(j));
            head.add_rat(-2);
            head -= target;
            if (head.sign() > 0) return true;
            if (Int(j) > P) continue;
            long vb = binom_val_p(p, P, Int(j));
            PRootExpr term = PRootExpr::ppow(p, a, b);
            term.scale(Rat(j));
            term.add_rat(Rat(vb) - 2);
            term -= target;
            if (term.sign() <= 0) return false;
        }
    };
    auto floor_times_q = [&](const Rat& r) {
        Rat t = r * static_cast<long>(Q);
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
        return q.get_si();
    };
    long k = floor_times_q(lam + l + 2) + 1;
    long kmin = floor_times_q(lam - 64);
    for (; k >= kmin; --k)
        if (certifies(k)) {
            Rat out(k, static_cast<long>(Q));
            out.canonicalize();
            return out;
        }
    throw DomainError("level certifies no restricted class");
}

// Coefficients of y -> f(p^l y): per axis, b_m reads off the m-fold
// difference by p^l at zero.
template <ValuedModule H>
MahlerFn<H> restrict_to_level(const MahlerFn<H>& f, long l) {
    unsigned long p = f.mod.prime();
    long N = f.bound;
    Int P = int_pow(p, static_cast<unsigned long>(l));
    std::vector<Int> binoms;
    for (long j = 0; j <= N; ++j) binoms.push_back(binom_int(P, static_cast<unsigned long>(j)));
    MahlerFn<H> out = f;
    out.heuristic = f.heuristic || !f.tail.is_inf();
    for (int axis = 0; axis < f.d; ++axis) {
        std::vector<typename H::Elem> next = out.coef;
        std::size_t stride = mahler_detail::axis_stride(f.d, axis, N);
        for (std::size_t base : mahler_detail::line_bases(f.d, axis, N)) {
            std::vector<typename H::Elem> cur;
            for (long k = 0; k <= N; ++k)
                cur.push_back(out.coef[base + static_cast<std::size_t>(k) * stride]);
            next[base] = cur[0];
            for (long m = 1; m <= N; ++m) {
                std::vector<typename H::Elem> stepped;
                for (std::size_t k = 0; k + 1 <= cur.size(); ++k) {
                    std::optional<typename H::Elem> acc;
                    for (std::size_t j = 1; k + j < cur.size(); ++j) {
                        if (binoms[j] == 0) continue;
                        auto term = f.mod.smul_int(binoms[j], cur[k + j]);
                        acc = acc ? f.mod.add(*acc, term) : term;
                    }
                    stepped.push_back(acc ? *acc : f.mod.zero());
                }
                cur = std::move(stepped);
                next[base + static_cast<std::size_t>(m) * stride] =
                    cur.empty() ? f.mod.zero() : cur[0];
            }
        }
        out.coef = std::move(next);
    }
    return out;
}

// Right inverse of the unit difference in one variable: b_{n+1} = a_n.
template <ValuedModule H>
MahlerFn<H> antidifference(const MahlerFn<H>& f) {
    if (f.d != 1) throw Unsupported("antidifference is one-dimensional");
    MahlerFn<H> out{f.mod, 1, f.bound + 1, {}, f.tail, f.heuristic};
    out.coef.push_back(f.mod.zero());
    for (const auto& c : f.coef) out.coef.push_back(c);
    return out;
}

template <ValuedModule H>
std::string mahler_str(const MahlerFn<H>& f) {
    std::ostringstream os;
    os << "mahler d=" << f.d << " N=" << f.bound << " tail=" << f.tail.str();
    if (f.heuristic) os << " heuristic";
    os << "\n";
    MultiIndex n(static_cast<std::size_t>(f.d), 0);
    do {
        os << "  (";
        for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
        os << "): " << f.mod.str(f.at(n)) << "\n";
    } while (next_in_box(n, f.bound));
    return os.str();
}

} // namespace lav

#endif
