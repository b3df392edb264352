#ifndef LAV_EXPRCALC_HPP
#define LAV_EXPRCALC_HPP

#include <string>
#include <variant>
#include <vector>

#include "lav/mahler.hpp"
#include "lav/modules.hpp"
#include "lav/witt.hpp"

namespace lav {

// Expression grammar shared by the ring calculators:
//
//   top      := expr ('mod' 'p')?
//   expr     := term (('+' | '-') term)*
//   term     := factor ('*' factor)*
//   factor   := '-' factor | primary ('^' exponent)?
//   primary  := 'X' | 'T' | integer | '[' expr ']' | '(' expr ')'
//            |  'phi' '(' expr ')' | 'phiinv' '(' expr ')'
//            |  'gamma' '(' integer ',' expr ')'
//   exponent := integer | '(' integer ('/' integer)? ')'
//
// X is the exact series generator; T is the exact Witt vector
// [1+X] - 1 at the configured length; [e] is the Teichmueller lift of
// a series expression.  Integers stand for ring constants and coerce
// to whichever side they meet.  Rational exponents apply to series
// with p-power denominators.  gamma caps an uncapped operand at the
// configured bound first, since the action is an infinite series.
// 'mod p' reduces a Witt vector to its first digit.
struct RingOptions {
    unsigned long prime = 2;
    Rat cap = Rat(64);
    int witt_length = 2;
    long group_prec = 64;
};

using RingValue = std::variant<Int, PerfLaurent, WittElem>;

RingValue ring_eval(const std::string& expr, const RingOptions& opt);

// Reader-facing forms: coefficient 1 and exponent 1 are dropped,
// integer exponents print bare, fractional ones in parens, the cap as
// a final O(X^..) marker.
std::string series_pretty(const PerfLaurent& f);
std::string ring_value_str(const RingValue& v);

// Integer polynomial in the variable x (+, -, *, ^ with nonnegative
// integer exponents) evaluated at a p-adic point.
PadicInt poly_eval_at(const std::string& expr, const PadicInt& x);

// Inverse of mahler_str for series-coefficient tables: a header line
// "mahler d=.. N=.. tail=.." with an optional "heuristic" mark, then
// one "  (i,..): <series>" line per box index.
MahlerFn<SeriesModule> mahler_parse_series(const SeriesModule& mod,
                                           const std::string& text);

// Process exit status for a failed run: 2 for malformed input, 3 for
// exhausted caps or precision or work budgets, 1 otherwise.
int cli_exit_code(const std::exception& e);

} // namespace lav

#endif
