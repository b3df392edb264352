#include <doctest.h>

#include "lav/perflaurent.hpp"

using namespace lav;

namespace {

PerfLaurent PL(unsigned long p, const std::string& s) {
    return PerfLaurent::parse(p, s);
}

} // namespace

TEST_CASE("fractional exponents normalize") {
    FracExp e = fracexp_of(2, Rat(3, 4));
    CHECK(e.k == 3);
    CHECK(e.m == 2);
    CHECK(fracexp_to_rat(2, e) == Rat(3, 4));
    CHECK(fracexp_of(3, Rat(5)).m == 0);
    CHECK(fracexp_of(3, Rat(-2, 9)).k == -2);
    CHECK_THROWS_AS(fracexp_of(2, Rat(1, 6)), DomainError);
    CHECK_THROWS_AS(fracexp_of(3, Rat(1, 2)), DomainError);
}

TEST_CASE("series construction and display") {
    CHECK(PerfLaurent::zero(2).str() == "0");
    CHECK(PerfLaurent::zero_cap(2, Rat(4)).str() == "O(X^(4))");
    CHECK(PerfLaurent::one(3).str() == "1*X^(0)");
    PerfLaurent f = PerfLaurent::monomial(2, Rat(3, 4), 1);
    CHECK(f.depth() == 2);
    CHECK(f.str() == "1*X^(3/4)");
    PerfLaurent g = PerfLaurent::from_terms(
        3, {{Rat(-1, 3), 2}, {Rat(0), 1}, {Rat(2), 5}}, Rat(4));
    CHECK(g.str() == "2*X^(-1/3) + 1*X^(0) + 2*X^(2) + O(X^(4))");
    CHECK(g.depth() == 1);
    CHECK(g.val() == ExtVal::of(Rat(-1, 3)));
    CHECK(g.coeff_at(Rat(2)) == 2);
    CHECK(g.coeff_at(Rat(1)) == 0);
    CHECK_THROWS_AS(g.coeff_at(Rat(5)), CapExhausted);
}

TEST_CASE("serialization round trips bit-exactly") {
    for (const char* s :
         {"0", "O(X^(4))", "O(X^(-3/2))", "1*X^(0)",
          "1*X^(-1/2) + 1*X^(0) + 1*X^(7/4) + O(X^(3))",
          "1*X^(-5) + 1*X^(13/8)"}) {
        CHECK(PL(2, s).str() == s);
    }
    CHECK(PL(3, "2*X^(-2/9) + 1*X^(1/3) + O(X^(2))").str() ==
          "2*X^(-2/9) + 1*X^(1/3) + O(X^(2))");
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(PL(2, ""), ParseError);
    CHECK_THROWS_AS(PL(2, "2*X^(1)"), ParseError);       // coeff >= p
    CHECK_THROWS_AS(PL(2, "0*X^(1)"), ParseError);       // zero coeff
    CHECK_THROWS_AS(PL(2, "1*X^(1) + 1*X^(1)"), ParseError);
    CHECK_THROWS_AS(PL(2, "1*X^(4) + O(X^(3))"), ParseError);
    CHECK_THROWS_AS(PL(2, "O(X^(3)) + 1*X^(1)"), ParseError);
    CHECK_THROWS_AS(PL(2, "1*X^(1/3)"), DomainError);    // bad denominator
    CHECK_THROWS_AS(PL(2, "1*X^(1.5)"), ParseError);
    CHECK_THROWS_AS(PL(5, "x + 1"), ParseError);
}

TEST_CASE("addition cancels and takes the tighter cap") {
    PerfLaurent a = PL(2, "1*X^(1) + 1*X^(2) + O(X^(6))");
    PerfLaurent b = PL(2, "1*X^(2) + 1*X^(3) + O(X^(5))");
    CHECK((a + b).str() == "1*X^(1) + 1*X^(3) + O(X^(5))");
    CHECK((a - a).str() == "O(X^(6))");
    CHECK((a - a).val_saturated());
    PerfLaurent c = PL(3, "1*X^(0) + 2*X^(1)");
    CHECK((c + c).str() == "2*X^(0) + 1*X^(1)");
    CHECK((-c).str() == "2*X^(0) + 1*X^(1)");
    CHECK(c.scal_mul(2).str() == "2*X^(0) + 1*X^(1)");
    CHECK(c.scal_mul(3).is_exact_zero());
}

TEST_CASE("multiplication propagates the sharp cap") {
    PerfLaurent f = PL(2, "1*X^(1) + O(X^(4))");
    PerfLaurent g = PL(2, "1*X^(2) + O(X^(3))");
    CHECK((f * g).str() == "1*X^(3) + O(X^(4))");
    PerfLaurent sat = PerfLaurent::zero_cap(2, Rat(2));
    PerfLaurent h = PL(2, "1*X^(1) + O(X^(5))");
    CHECK((sat * h).str() == "O(X^(3))");
    PerfLaurent e1 = PL(5, "1*X^(0) + 3*X^(1)");
    PerfLaurent e2 = PL(5, "2*X^(0) + 4*X^(2)");
    CHECK((e1 * e2).str() == "2*X^(0) + 1*X^(1) + 4*X^(2) + 2*X^(3)");
    CHECK((e1 * PerfLaurent::zero(5)).is_exact_zero());
}

TEST_CASE("powers stay exact on polynomials") {
    PerfLaurent f = PL(2, "1*X^(0) + 1*X^(1)");
    CHECK(f.pow(4).str() == "1*X^(0) + 1*X^(4)");
    CHECK(f.pow(0).str() == "1*X^(0)");
    PerfLaurent g = PL(3, "1*X^(0) + 1*X^(1)");
    PerfLaurent g13 = g.pow(13);
    for (long k = 0; k <= 13; ++k)
        CHECK(g13.coeff_at(Rat(k)) == binom_mod_p(3, Int(13), Int(k)));
    PerfLaurent m = PerfLaurent::monomial(2, Rat(1, 2), 1);
    CHECK(m.pow(-3).str() == "1*X^(-3/2)");
}

TEST_CASE("inversion matches the hand-computed geometric series") {
    PerfLaurent f = PL(2, "1*X^(1) + 1*X^(2) + 1*X^(3) + O(X^(8))");
    PerfLaurent inv = f.invert();
    CHECK(inv.str() ==
          "1*X^(-1) + 1*X^(0) + 1*X^(2) + 1*X^(3) + 1*X^(5) + O(X^(6))");
    CHECK((f * inv).str() == "1*X^(0) + O(X^(7))");
    CHECK(PerfLaurent::monomial(2, Rat(1, 2), 1).invert().str() == "1*X^(-1/2)");
    CHECK_THROWS_AS(PL(2, "1*X^(0) + 1*X^(1)").invert(), NotInvertible);
    CHECK_THROWS_AS(PerfLaurent::zero_cap(2, Rat(3)).invert(), NotInvertible);
    PerfLaurent g = PL(3, "2*X^(-1) + 1*X^(0) + O(X^(4))");
    CHECK((g * g.invert()).lowest() ==
          std::pair<Rat, unsigned long>{Rat(0), 1ul});
}

TEST_CASE("frobenius and p-th root are mutually inverse") {
    PerfLaurent f = PL(2, "1*X^(-1/2) + 1*X^(3) + O(X^(5))");
    CHECK(f.frobenius().str() == "1*X^(-1) + 1*X^(6) + O(X^(10))");
    CHECK(f.pth_root().str() == "1*X^(-1/4) + 1*X^(3/2) + O(X^(5/2))");
    CHECK(f.pth_root().frobenius() == f);
    CHECK(f.frobenius().pth_root() == f);
    PerfLaurent g = PL(3, "1*X^(1) + 2*X^(2)");
    CHECK(g.frobenius() == g * g * g);

    PerfLaurent deep = PerfLaurent::one(2);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 70; ++i)
                deep = deep.pth_root() + PerfLaurent::monomial(2, Rat(1), 1);
        }(),
        DomainError);
}

TEST_CASE("substitution matches direct expansion") {
    PerfLaurent g = PL(5, "1*X^(1) + 1*X^(2)");
    CHECK(PL(5, "1*X^(2)").substitute(g).str() ==
          "1*X^(2) + 2*X^(3) + 1*X^(4)");
    PerfLaurent h = PL(2, "1*X^(1) + 1*X^(2) + O(X^(5))");
    PerfLaurent f = PL(2, "1*X^(1/2) + 1*X^(3/2)");
    PerfLaurent direct = h.pth_root() + h.pth_root() * h;
    CHECK(f.substitute(h) == direct);
    CHECK_THROWS_AS(PL(2, "1*X^(1/2) + 1*X^(1)").substitute(h), DomainError);
    PerfLaurent c = PL(2, "1*X^(0)");
    CHECK(c.substitute(h) == c);
}

TEST_CASE("monomial projection keeps shallow exponents only") {
    PerfLaurent f = PL(2, "1*X^(1/4) + 1*X^(1/2) + 1*X^(1) + O(X^(2))");
    CHECK(f.monomial_projection(0).str() == "1*X^(1) + O(X^(2))");
    CHECK(f.monomial_projection(1).str() == "1*X^(1/2) + 1*X^(1) + O(X^(2))");
    CHECK(f.monomial_projection(2) == f);
    CHECK(f.monomial_projection(5) == f);
}

TEST_CASE("dense and sparse products agree") {
    auto saved = PerfLaurent::mul_tuning;
    std::vector<std::pair<Rat, unsigned long>> terms2, terms3;
    for (long i = 0; i <= 400; ++i) {
        terms2.emplace_back(Rat(i), 1);
        terms3.emplace_back(Rat(i), static_cast<unsigned long>(i % 2 + 1));
    }
    PerfLaurent f2 = PerfLaurent::from_terms(2, terms2, Rat(900));
    PerfLaurent f3 = PerfLaurent::from_terms(3, terms3, std::nullopt);

    PerfLaurent::mul_tuning.min_ops = 1; // force dense
    PerfLaurent d2 = f2 * f2;
    PerfLaurent d3 = f3 * f3;
    PerfLaurent::mul_tuning.min_ops = ~0ull >> 1; // force sparse
    PerfLaurent s2 = f2 * f2;
    PerfLaurent s3 = f3 * f3;
    PerfLaurent::mul_tuning = saved;
    CHECK(d2 == s2);
    CHECK(d3 == s3);
    for (long i = 0; i <= 400; ++i) {
        CHECK(d2.coeff_at(Rat(2 * i)) == 1);
        if (i > 0) CHECK(d2.coeff_at(Rat(2 * i - 1)) == 0);
    }
}

TEST_CASE("the shift action matches hand expansions at small primes") {
    PadicInt a3(Prime(2), Int(3), 8);
    PerfLaurent x2 = PL(2, "1*X^(1) + O(X^(8))");
    CHECK((gamma_act(a3, x2) - x2).str() == "1*X^(2) + 1*X^(3) + O(X^(8))");

    PadicInt a4(Prime(3), Int(4), 6);
    PerfLaurent x3 = PL(3, "1*X^(1) + O(X^(9))");
    CHECK((gamma_act(a4, x3) - x3).str() == "1*X^(3) + 1*X^(4) + O(X^(9))");

    PadicInt a6(Prime(5), Int(6), 5);
    PerfLaurent x5 = PL(5, "1*X^(1) + O(X^(8))");
    CHECK((gamma_act(a6, x5) - x5).str() == "1*X^(5) + 1*X^(6) + O(X^(8))");
}

TEST_CASE("the shift action respects roots and negative exponents") {
    PadicInt a(Prime(2), Int(3), 10);
    PerfLaurent r = PL(2, "1*X^(1/2) + O(X^(2))");
    CHECK(gamma_act(a, r).str() ==
          "1*X^(1/2) + 1*X^(1) + 1*X^(3/2) + O(X^(2))");
    PerfLaurent n = PL(2, "1*X^(-1) + O(X^(6))");
    CHECK(gamma_act(a, n).str() ==
          "1*X^(-1) + 1*X^(0) + 1*X^(2) + 1*X^(3) + 1*X^(5) + O(X^(6))");
}

TEST_CASE("the shift action is a group action commuting with frobenius") {
    PadicInt a(Prime(2), Int(3), 12);
    PadicInt b(Prime(2), Int(5), 12);
    PadicInt ab(Prime(2), Int(15), 12);
    PerfLaurent f = PL(2, "1*X^(1/2) + 1*X^(1) + 1*X^(3) + O(X^(16))");
    CHECK(gamma_act(a, gamma_act(b, f)) == gamma_act(ab, f));
    CHECK(gamma_act(a, f.frobenius()) == gamma_act(a, f).frobenius());
    CHECK(gamma_act(a, f.pth_root()) == gamma_act(a, f).pth_root());

    PadicInt one_a(Prime(2), Int(1), 8);
    CHECK(gamma_act(one_a, f) == f);
}

TEST_CASE("the shift action needs caps and precision") {
    PadicInt a(Prime(2), Int(3), 2);
    PerfLaurent f = PL(2, "1*X^(1) + O(X^(16))");
    CHECK_THROWS_AS(gamma_act(a, f), InsufficientPrecision);
    PadicInt b(Prime(2), Int(3), 8);
    CHECK_THROWS_AS(gamma_act(b, PL(2, "1*X^(1)")), CapExhausted);
    CHECK(gamma_act(b, PL(2, "1*X^(0)")) == PL(2, "1*X^(0)"));
    CHECK(gamma_act(b, PerfLaurent::zero_cap(2, Rat(4))).str() == "O(X^(4))");
    PadicInt c(Prime(2), Int(4), 8);
    CHECK_THROWS_AS(gamma_act(c, f), DomainError);
}
