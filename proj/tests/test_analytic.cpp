#include <doctest.h>

#include "lav/analytic.hpp"

using namespace lav;

namespace {

struct Rng {
    unsigned long long s;
    unsigned long long next() {
        s += 0x9e3779b97f4a7c15ull;
        unsigned long long z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    unsigned long below(unsigned long n) { return next() % n; }
};

PerfLaurent mono(unsigned long p, const Rat& e, unsigned long c, const Rat& cap) {
    return PerfLaurent::monomial_cap(p, e, c, cap);
}

} // namespace

TEST_CASE("group contexts pin the generator and its depth") {
    GroupContext c30(Prime(3), 0, 16);
    CHECK(c30.generator == PadicInt(Prime(3), Int(4), 16));
    CHECK(c30.depth() == 1);
    CHECK(unit_depth(c30.generator) == 1);

    GroupContext c31(Prime(3), 1, 16);
    CHECK(c31.generator == PadicInt(Prime(3), Int(64), 16));
    CHECK(c31.depth() == 2);
    CHECK(unit_depth(c31.generator) == 2);

    GroupContext c20(Prime(2), 0, 16);
    CHECK(c20.generator == PadicInt(Prime(2), Int(5), 16));
    CHECK(c20.depth() == 2);

    GroupContext c21(Prime(2), 1, 16);
    CHECK(c21.generator == PadicInt(Prime(2), Int(25), 16));
    CHECK(c21.depth() == 3);

    CHECK(c30.chart(Int(2)) == c30.generator * c30.generator);
    CHECK(c20.chart(Int(0)) == PadicInt(Prime(2), Int(1), 16));

    CHECK_THROWS_AS(unit_depth(PadicInt(Prime(3), Int(1), 10)), DomainError);
    CHECK_THROWS_AS(unit_depth(PadicInt(Prime(3), Int(3), 10)), DomainError);
}

TEST_CASE("quantization floors onto the grid") {
    CHECK(quantize_down(Rat(7, 3), 6) == Rat(7, 3));
    CHECK(quantize_down(Rat(-1, 3), 2) == Rat(-1, 2));
    CHECK(quantize_down(Rat(5, 8), 4) == Rat(1, 2));
    CHECK(quantize_down(Rat(0), 5) == Rat(0));
}

TEST_CASE("orbit coefficients of a fixed element vanish") {
    PadicModule zp{Prime(3), 12, 0};
    GroupContext ctx(Prime(3), 0, 12);
    PadicInt m(Prime(3), Int(7), 12);
    auto f = orbit_mahler(zp, m, ctx, 4);
    REQUIRE(f.coef.size() == 5);
    CHECK(zp.eq(f.coef[0], m));
    for (std::size_t n = 1; n < f.coef.size(); ++n) CHECK(zp.negligible(f.coef[n]));
    CHECK(f.tail == ExtVal::of(Rat(12)));
}

TEST_CASE("orbit coefficients match a direct difference computation") {
    SeriesModule mod{Prime(2), Rat(20)};
    PerfLaurent m = mono(2, Rat(1), 1, Rat(20));
    PadicInt g(Prime(2), Int(3), 16);
    auto f = orbit_mahler(mod, m, g, 3);
    CHECK(f.coef[1].val() == ExtVal::of(Rat(2)));
    CHECK(f.coef[1].coeff_at(Rat(2)) == 1);
    CHECK(f.coef[1].coeff_at(Rat(3)) == 1);
    CHECK(f.coef[1].coeff_at(Rat(4)) == 0);

    SeriesModule mod3{Prime(3), Rat(20)};
    PerfLaurent m3 = mono(3, Rat(1), 1, Rat(20));
    GroupContext ctx(Prime(3), 0, 16);
    auto f3 = orbit_mahler(mod3, m3, ctx, 2);
    CHECK(f3.coef[1].val() == ExtVal::of(Rat(3)));
    CHECK(f3.coef[1].coeff_at(Rat(3)) == 1);
    CHECK(f3.coef[1].coeff_at(Rat(4)) == 1);
    CHECK(f3.coef[1].coeff_at(Rat(2)) == 0);
}

TEST_CASE("orbit data reproduces the group action at integer points") {
    SeriesModule mod{Prime(2), Rat(24)};
    PerfLaurent m = PerfLaurent::from_terms(2, {{Rat(1), 1}, {Rat(1, 2), 1}}, Rat(24));
    GroupContext ctx(Prime(2), 0, 32);
    auto f = orbit_mahler(mod, m, ctx, 6);
    PerfLaurent cur = m;
    for (long x = 0; x <= 6; ++x) {
        CHECK(mod.eq(eval_at_ints(f, {Int(x)}), cur));
        cur = mod.gamma(ctx.generator, cur);
    }

    SeriesModule mod3{Prime(3), Rat(15)};
    PerfLaurent m3 = PerfLaurent::from_terms(3, {{Rat(1), 2}, {Rat(1, 3), 1}}, Rat(15));
    GroupContext ctx3(Prime(3), 0, 32);
    auto f3 = orbit_mahler(mod3, m3, ctx3, 5);
    PerfLaurent cur3 = m3;
    for (long x = 0; x <= 5; ++x) {
        CHECK(mod3.eq(eval_at_ints(f3, {Int(x)}), cur3));
        cur3 = mod3.gamma(ctx3.generator, cur3);
    }
}

TEST_CASE("witness search accepts a fixed element at the precision floor") {
    PadicModule zp{Prime(3), 12, 0};
    PadicInt m(Prime(3), Int(7), 12);
    auto res = witness_search(zp, m, {0, 1}, {Rat(2), Rat(0)}, 4, 12);
    REQUIRE(res.has_value());
    CHECK(res->level == 0);
    CHECK(res->w.lambda == Rat(0));
    CHECK(res->w.mu == Rat(9));

    auto res0 = witness_search(zp, zp.zero(), {0, 1}, {Rat(2), Rat(0)}, 4, 12);
    REQUIRE(res0.has_value());
    CHECK(res0->level == 0);
    CHECK(res0->w.lambda == Rat(2));
}

TEST_CASE("witness search certifies series elements by depth") {
    SeriesModule mod{Prime(2), Rat(20)};
    std::vector<Rat> grid{Rat(3), Rat(2), Rat(1), Rat(0), Rat(-1)};

    PerfLaurent x = mono(2, Rat(1), 1, Rat(20));
    std::vector<WitnessProbe> probes;
    auto res = witness_search(mod, x, {0, 1, 2}, grid, 8, 32, &probes);
    REQUIRE(res.has_value());
    CHECK(res->level == 0);
    CHECK(res->w.lambda == Rat(1));
    CHECK(res->w.mu == Rat(2));
    CHECK(probes.size() == 3);
    CHECK(probes.back().accepted);
    CHECK_FALSE(probes.front().accepted);

    PerfLaurent deep = mono(2, Rat(1, 4), 1, Rat(20));
    auto res2 = witness_search(mod, deep, {0, 1, 2, 3}, grid, 8, 32);
    REQUIRE(res2.has_value());
    CHECK(res2->level == 0);
    CHECK(res2->w.lambda == Rat(-1));
    CHECK(res2->w.mu == Rat(1, 2));

    auto none = witness_search(mod, deep, {0}, {Rat(9)}, 8, 32);
    CHECK_FALSE(none.has_value());

    auto shifted = witness_search(mod, deep, {2}, grid, 8, 32);
    CHECK(shifted.has_value());
}

TEST_CASE("witness search covers witt vectors") {
    WittModule mod{Prime(2), 2, Rat(1)};
    WittElem m = WittElem::teichmuller(mono(2, Rat(1), 1, Rat(30)), 2);
    auto res = witness_search(mod, m, {0, 1}, {Rat(1), Rat(0), Rat(-1)}, 4, 32);
    CHECK(res.has_value());
}

TEST_CASE("radius comparisons against c + 1 are exact") {
    CHECK(radius_clears(3, Rat(3, 2), Rat(2)));
    CHECK_FALSE(radius_clears(3, Rat(1), Rat(2)));
    CHECK_FALSE(radius_clears(2, Rat(2), Rat(3)));
    CHECK(radius_clears(2, Rat(2), Rat(5, 2)));
}

TEST_CASE("c-smallness demands strict clearance where stated") {
    SeriesModule mod{Prime(3), Rat(30)};
    GroupContext ctx(Prime(3), 0, 32);
    PerfLaurent pi = mono(3, Rat(1), 1, Rat(30));
    PerfLaurent sq = mono(3, Rat(2), 1, Rat(30));
    std::vector<PerfLaurent> basis{pi, sq};

    auto rep = c_small_check(mod, ctx, Rat(3, 2), Rat(2), pi, basis);
    CHECK(rep.uniformizer_gap == ExtVal::of(Rat(3)));
    CHECK(rep.uniformizer_ok);
    CHECK(rep.basis_ok);
    CHECK(rep.lambda_ok);
    CHECK(rep.c_small);

    auto tight = c_small_check(mod, ctx, Rat(1), Rat(2), pi, basis);
    CHECK(tight.uniformizer_ok);
    CHECK_FALSE(tight.lambda_ok);
    CHECK_FALSE(tight.c_small);

    auto border = c_small_check(mod, ctx, Rat(2), Rat(3), pi, basis);
    CHECK_FALSE(border.uniformizer_ok);
    CHECK(border.basis_ok);
    CHECK_FALSE(border.c_small);
}

TEST_CASE("trace witness for the trivial subgroup") {
    auto w = ts1_witness(2, 5);
    CHECK(w.alpha == Int(1));
    CHECK(w.c1 == Rat(0));
    CHECK_THROWS_AS(ts1_witness(5, 2), DomainError);
    CHECK_THROWS_AS(ts1_witness(1, 2, false), Unsupported);
}

TEST_CASE("triangular inversion solves the frozen dyadic example") {
    PadicInt a(Prime(2), Int(3), 16);
    PerfLaurent x = mono(2, Rat(1, 2), 1, Rat(15, 16));
    auto sol = ts3_invert(x, 0, a);
    CHECK(sol.saturated);
    CHECK(sol.steps == 1);
    CHECK(sol.y.num_terms() == 1);
    CHECK(sol.y.lowest().first == Rat(1, 4));
    CHECK(sol.y.lowest().second == 1);
    CHECK(sol.loss == Rat(1, 4));
    CHECK_FALSE(sol.residual.has_terms());
    CHECK(sol.residual.cap() == Rat(35, 64));

    PerfLaurent back = gamma_act(a, sol.y) - sol.y;
    CHECK_FALSE((x - back).has_terms());
}

TEST_CASE("triangular inversion iterates on a shallow dyadic target") {
    PadicInt a(Prime(2), Int(3), 16);
    PerfLaurent x = mono(2, Rat(3, 2), 1, Rat(15, 8));
    auto sol = ts3_invert(x, 0, a);
    CHECK(sol.saturated);
    CHECK(sol.steps == 2);
    CHECK(sol.y.num_terms() == 2);
    CHECK(sol.y.coeff_at(Rat(5, 4)) == 1);
    CHECK(sol.y.coeff_at(Rat(13, 8)) == 1);
    CHECK(sol.loss == Rat(1, 4));
    CHECK_FALSE(sol.residual.has_terms());
}

TEST_CASE("triangular inversion solves a ternary target") {
    PadicInt a(Prime(3), Int(4), 16);
    PerfLaurent x =
        PerfLaurent::from_terms(3, {{Rat(1, 3), 1}, {Rat(2, 3), 1}}, Rat(5, 9));
    auto sol = ts3_invert(x, 0, a);
    CHECK(sol.saturated);
    CHECK(sol.steps == 2);
    CHECK(sol.loss == Rat(2, 9));
    CHECK(sol.y.coeff_at(Rat(1, 9)) == 1);
    CHECK(sol.y.coeff_at(Rat(2, 9)) == 1);
    CHECK_FALSE(sol.residual.has_terms());
    CHECK_FALSE(sol.y.monomial_projection(0).has_terms());

    PerfLaurent deep =
        PerfLaurent::from_terms(3, {{Rat(1, 9), 1}, {Rat(2, 9), 2}}, Rat(5, 27));
    auto ds = ts3_invert(deep, 1, a);
    CHECK(ds.saturated);
    CHECK(ds.steps == 2);
    CHECK(ds.loss == Rat(2, 27));
    CHECK(ds.y.lowest().first == Rat(1, 27));
    CHECK_FALSE(ds.y.monomial_projection(1).has_terms());
}

TEST_CASE("triangular inversion rejects bad targets") {
    PadicInt a(Prime(2), Int(3), 16);
    PerfLaurent shallow =
        PerfLaurent::from_terms(2, {{Rat(1), 1}, {Rat(1, 2), 1}}, Rat(3));
    CHECK_THROWS_AS(ts3_invert(shallow, 0, a), DomainError);

    PerfLaurent x = mono(2, Rat(1, 2), 1, Rat(15, 16));
    CHECK_THROWS_AS(ts3_invert(x, 0, PadicInt(Prime(2), Int(1), 16)), DomainError);
    CHECK_THROWS_AS(ts3_invert(x, -1, a), DomainError);

    PerfLaurent uncapped = PerfLaurent::monomial(2, Rat(1, 2), 1);
    CHECK_THROWS_AS(ts3_invert(uncapped, 0, a), DomainError);
}

TEST_CASE("triangular inversion stalls below an accumulation point") {
    PadicInt a(Prime(2), Int(3), 16);
    PerfLaurent x = mono(2, Rat(1, 2), 1, Rat(3));
    CHECK_THROWS_AS(ts3_invert(x, 0, a, 12), SolveStalled);
}

TEST_CASE("triangular inversion handles an empty target") {
    PadicInt a(Prime(2), Int(3), 16);
    auto sol = ts3_invert(PerfLaurent::zero_cap(2, Rat(2)), 0, a);
    CHECK(sol.saturated);
    CHECK(sol.steps == 0);
    CHECK_FALSE(sol.y.has_terms());
}

TEST_CASE("triangular inversion saturates on random deep monomials") {
    Rng rng{0x715EC0DEull};
    for (int i = 0; i < 16; ++i) {
        unsigned long p = (i % 2 == 0) ? 2 : 3;
        long n = (i / 2) % 2;
        long M = n + 1;
        long den = 1;
        for (long j = 0; j < M; ++j) den *= static_cast<long>(p);
        long K = 1 + static_cast<long>(rng.below(3 * p));
        if (K % static_cast<long>(p) == 0) ++K;
        Rat e0(K, den);
        e0.canonicalize();
        long hden = den;
        for (int j = 0; j < 3; ++j) hden *= static_cast<long>(p);
        Rat cap = e0 + Rat(1, hden);
        cap.canonicalize();
        unsigned long c = 1 + rng.below(p - 1);
        PerfLaurent x = mono(p, e0, c, cap);
        long av = (p == 2) ? ((i % 4 < 2) ? 3 : 5) : ((i / 2 % 3 == 0) ? 4 : (i / 2 % 3 == 1) ? 7 : 10);
        PadicInt a(Prime(p), Int(av), 24);
        auto sol = ts3_invert(x, n, a);
        CHECK(sol.saturated);
        CHECK(sol.steps == 1);
        CHECK_FALSE(sol.residual.has_terms());
        CHECK_FALSE(sol.y.monomial_projection(n).has_terms());
        CHECK(sol.loss > Rat(0));
        CHECK(sol.loss <= Rat(1));
    }
}

TEST_CASE("the twisted monomial identity holds mod p and in witt vectors") {
    PadicInt a(Prime(3), Int(4), 16);
    auto rep = ts4_check(a, 0, 1, 2, Rat(6), Rat(1));
    CHECK(rep.match_mod_p);
    CHECK(rep.match_witt);
    CHECK_FALSE(rep.trivial);
    CHECK(rep.lhs_val_mod_p == ExtVal::of(Rat(3)));
    CHECK(rep.base_val == ExtVal::of(Rat(1)));
    CHECK(rep.gain_floor == ExtVal::of(Rat(1)));
    CHECK(rep.gain_ok);

    auto triv = ts4_check(PadicInt(Prime(3), Int(1), 8), 0, 1, 2, Rat(4), Rat(1));
    CHECK(triv.trivial);
    CHECK(triv.match_mod_p);
    CHECK(triv.match_witt);
    CHECK(triv.gain_ok);

    CHECK_THROWS_AS(ts4_check(PadicInt(Prime(3), Int(2), 8), 0, 1, 2, Rat(4), Rat(1)),
                    DomainError);
    CHECK_THROWS_AS(ts4_check(a, 0, 0, 2, Rat(4), Rat(1)), DomainError);
}

TEST_CASE("the twisted monomial identity holds on random inputs") {
    Rng rng{0x7547C4EEull};
    for (int i = 0; i < 8; ++i) {
        unsigned long p = (i % 2 == 0) ? 2 : 3;
        long av = 1 + static_cast<long>(p) * (1 + static_cast<long>(rng.below(6)));
        PadicInt a(Prime(p), Int(av), 18);
        long n = static_cast<long>(rng.below(2));
        long k = 1 + static_cast<long>(rng.below(3));
        auto rep = ts4_check(a, n, k, 2, Rat(4), Rat(1));
        CHECK(rep.match_mod_p);
        CHECK(rep.match_witt);
        CHECK(rep.gain_ok);
    }
}

TEST_CASE("the twisted difference acts as stated on mahler data") {
    SeriesModule mod{Prime(2), Rat(20)};
    PadicInt g(Prime(2), Int(3), 16);
    PerfLaurent m = mono(2, Rat(1), 1, Rat(20));
    MahlerFn<SeriesModule> F{mod, 1, 1, {mod.zero(), m}, ExtVal::infinity(), true};
    auto out = coboundary_apply(mod, g, F);
    CHECK(mod.eq(out.coef[0], gamma_act(g, m)));
    CHECK(mod.eq(out.coef[1], gamma_act(g, m) - m));
}

TEST_CASE("coboundary solve is exact for a fixed coefficient") {
    PadicModule zp{Prime(2), 12, 0};
    GroupContext ctx(Prime(2), 0, 12);
    PadicInt m(Prime(2), Int(7), 12);
    MahlerFn<PadicModule> f{zp, 1, 0, {m}, ExtVal::infinity(), true};
    auto sol = coboundary_solve(zp, f, ctx.generator, Rat(0), 3);
    CHECK(sol.K == 3);
    CHECK(sol.gain == ExtVal::of(Rat(12)));
    REQUIRE(sol.F.coef.size() == 5);
    CHECK(zp.eq(sol.F.coef[1], m));
    CHECK(zp.negligible(sol.F.coef[0]));
    for (std::size_t j = 2; j < sol.F.coef.size(); ++j)
        CHECK(zp.negligible(sol.F.coef[j]));
    for (const auto& r : sol.residual.coef) CHECK(zp.negligible(r));
}

TEST_CASE("coboundary solve leaves only the top boundary layer") {
    SeriesModule mod{Prime(2), Rat(300)};
    GroupContext ctx(Prime(2), 0, 32);
    PerfLaurent m = mono(2, Rat(1), 1, Rat(300));
    auto f = orbit_mahler(mod, m, ctx, 4);
    auto sol = coboundary_solve(mod, f, ctx.generator, Rat(1), 3);
    CHECK(sol.gain == ExtVal::of(Rat(3)));
    CHECK(sol.mu == ExtVal::of(Rat(1)));
    for (long j = 0; j <= 3; ++j)
        CHECK(mod.negligible(sol.residual.coef[static_cast<std::size_t>(j)]));
    CHECK(sol.residual.coef[4].val() == ExtVal::of(Rat(16)));
    CHECK(sol.residual.coef[5].val() == ExtVal::of(Rat(20)));
    CHECK(sol.defect == Rat(-255, 64));
    CHECK(sol.defect <= Rat(0));

    CHECK_THROWS_AS(coboundary_solve(mod, f, ctx.generator, Rat(2), 3), GainTooSmall);
}

TEST_CASE("coboundary solve is linear in the target") {
    SeriesModule mod{Prime(3), Rat(250)};
    GroupContext ctx(Prime(3), 0, 32);
    PerfLaurent m1 = mono(3, Rat(1), 1, Rat(250));
    PerfLaurent m2 = mono(3, Rat(2), 2, Rat(250));
    auto f1 = orbit_mahler(mod, m1, ctx, 4);
    auto f2 = orbit_mahler(mod, m2, ctx, 4);
    MahlerFn<SeriesModule> fs{mod, 1, 4, {}, min(f1.tail, f2.tail), true};
    for (std::size_t j = 0; j < f1.coef.size(); ++j)
        fs.coef.push_back(mod.add(f1.coef[j], f2.coef[j]));
    auto s1 = coboundary_solve(mod, f1, ctx.generator, Rat(0), 2);
    auto s2 = coboundary_solve(mod, f2, ctx.generator, Rat(0), 2);
    auto ss = coboundary_solve(mod, fs, ctx.generator, Rat(0), 2);
    for (std::size_t j = 0; j < ss.F.coef.size(); ++j)
        CHECK(mod.eq(ss.F.coef[j], mod.add(s1.F.coef[j], s2.F.coef[j])));
    CHECK(ss.defect <= Rat(0));
}

TEST_CASE("sharp elements move by exactly the predicted valuation") {
    auto r1 = sharp_smooth_check(2, 0, PadicInt(Prime(2), Int(3), 16), Rat(5));
    CHECK(r1.m == 1);
    CHECK(r1.measured == ExtVal::of(Rat(2)));
    CHECK(r1.expected == Rat(2));
    CHECK(r1.ok);

    auto r2 = sharp_smooth_check(2, 1, PadicInt(Prime(2), Int(3), 16), Rat(5));
    CHECK(r2.expected == Rat(1));
    CHECK(r2.ok);

    auto r3 = sharp_smooth_check(3, 0, PadicInt(Prime(3), Int(4), 16), Rat(5));
    CHECK(r3.expected == Rat(3));
    CHECK(r3.ok);

    auto r4 = sharp_smooth_check(2, 2, PadicInt(Prime(2), Int(5), 16), Rat(5));
    CHECK(r4.m == 2);
    CHECK(r4.expected == Rat(1));
    CHECK(r4.ok);

    auto fixed = sharp_smooth_check(2, 1, PadicInt(Prime(2), Int(1), 8), Rat(3));
    CHECK(fixed.m == -1);
    CHECK(fixed.ok);
}
