#include "lav/exprcalc.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace lav {

namespace {

struct Token {
    enum Kind { Ident, Integer, Sym, End } kind = End;
    std::string text;
    std::size_t pos = 0;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Integer, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Ident, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (std::string("+-*^()[],/").find(c) != std::string::npos) {
            out.push_back({Token::Sym, std::string(1, c), i});
            ++i;
            continue;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' at " +
                         std::to_string(i));
    }
    out.push_back({Token::End, "", s.size()});
    return out;
}

struct Parser {
    const std::vector<Token>& toks;
    std::size_t at = 0;
    const RingOptions& opt;

    const Token& peek() const { return toks[at]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at " + std::to_string(peek().pos));
    }

    bool eat_sym(const std::string& s) {
        if (peek().kind == Token::Sym && peek().text == s) {
            ++at;
            return true;
        }
        return false;
    }

    void expect_sym(const std::string& s) {
        if (!eat_sym(s)) fail("expected '" + s + "'");
    }

    Int integer() {
        bool neg = eat_sym("-");
        if (peek().kind != Token::Integer) fail("expected an integer");
        Int v(toks[at].text);
        ++at;
        return neg ? Int(-v) : v;
    }

    unsigned long prime() const { return opt.prime; }

    PerfLaurent to_series(const Int& c) const {
        Int r = c % static_cast<long>(prime());
        if (r < 0) r += static_cast<long>(prime());
        unsigned long u = r.get_ui();
        if (u == 0) return PerfLaurent::zero(prime());
        return PerfLaurent::from_terms(prime(), {{Rat(0), u}}, std::nullopt);
    }

    WittElem to_witt(const Int& c, int len) const {
        return WittElem::from_int(prime(), len, c);
    }

    RingValue add(RingValue a, RingValue b, bool sub) {
        if (std::holds_alternative<Int>(a) && std::holds_alternative<Int>(b)) {
            Int r = sub ? Int(std::get<Int>(a) - std::get<Int>(b))
                        : Int(std::get<Int>(a) + std::get<Int>(b));
            return r;
        }
        if (std::holds_alternative<WittElem>(a) || std::holds_alternative<WittElem>(b)) {
            if (std::holds_alternative<PerfLaurent>(a) ||
                std::holds_alternative<PerfLaurent>(b))
                throw DomainError("cannot mix series and Witt vectors; lift with [..]");
            WittElem wa = std::holds_alternative<WittElem>(a)
                              ? std::get<WittElem>(a)
                              : to_witt(std::get<Int>(a), std::get<WittElem>(b).len());
            WittElem wb = std::holds_alternative<WittElem>(b)
                              ? std::get<WittElem>(b)
                              : to_witt(std::get<Int>(b), wa.len());
            return sub ? wa - wb : wa + wb;
        }
        PerfLaurent fa = std::holds_alternative<PerfLaurent>(a)
                             ? std::get<PerfLaurent>(a)
                             : to_series(std::get<Int>(a));
        PerfLaurent fb = std::holds_alternative<PerfLaurent>(b)
                             ? std::get<PerfLaurent>(b)
                             : to_series(std::get<Int>(b));
        return sub ? fa - fb : fa + fb;
    }

    RingValue mul(RingValue a, RingValue b) {
        if (std::holds_alternative<Int>(a) && std::holds_alternative<Int>(b))
            return Int(std::get<Int>(a) * std::get<Int>(b));
        if (std::holds_alternative<WittElem>(a) || std::holds_alternative<WittElem>(b)) {
            if (std::holds_alternative<PerfLaurent>(a) ||
                std::holds_alternative<PerfLaurent>(b))
                throw DomainError("cannot mix series and Witt vectors; lift with [..]");
            WittElem wa = std::holds_alternative<WittElem>(a)
                              ? std::get<WittElem>(a)
                              : to_witt(std::get<Int>(a), std::get<WittElem>(b).len());
            WittElem wb = std::holds_alternative<WittElem>(b)
                              ? std::get<WittElem>(b)
                              : to_witt(std::get<Int>(b), wa.len());
            return wa * wb;
        }
        PerfLaurent fa = std::holds_alternative<PerfLaurent>(a)
                             ? std::get<PerfLaurent>(a)
                             : to_series(std::get<Int>(a));
        PerfLaurent fb = std::holds_alternative<PerfLaurent>(b)
                             ? std::get<PerfLaurent>(b)
                             : to_series(std::get<Int>(b));
        return fa * fb;
    }

    RingValue negate(RingValue a) {
        if (std::holds_alternative<Int>(a)) return Int(-std::get<Int>(a));
        if (std::holds_alternative<PerfLaurent>(a)) return -std::get<PerfLaurent>(a);
        return -std::get<WittElem>(a);
    }

    RingValue power(RingValue base, const Rat& e) {
        if (e.get_den() != 1) {
            if (!std::holds_alternative<PerfLaurent>(base))
                throw DomainError("fractional exponents apply to series only");
            Int den = Int(e.get_den());
            int k = 0;
            while (den > 1) {
                if (den % static_cast<long>(prime()) != 0)
                    throw DomainError("exponent denominator must be a power of " +
                                      std::to_string(prime()));
                den /= static_cast<long>(prime());
                ++k;
            }
            PerfLaurent f = std::get<PerfLaurent>(base);
            for (int i = 0; i < k; ++i) f = f.pth_root();
            if (!e.get_num().fits_slong_p()) throw DomainError("exponent too large");
            return f.pow(e.get_num().get_si());
        }
        Int n = Int(e.get_num());
        if (std::holds_alternative<Int>(base)) {
            if (n < 0) throw DomainError("negative exponent on an integer");
            Int r;
            mpz_pow_ui(r.get_mpz_t(), std::get<Int>(base).get_mpz_t(), n.get_ui());
            return r;
        }
        if (std::holds_alternative<PerfLaurent>(base)) {
            if (!n.fits_slong_p()) throw DomainError("exponent too large");
            return std::get<PerfLaurent>(base).pow(n.get_si());
        }
        if (n < 0) throw DomainError("negative exponent on a Witt vector");
        WittElem w = std::get<WittElem>(base);
        WittElem r = WittElem::from_int(prime(), w.len(), Int(1));
        for (Int i(0); i < n; ++i) r = r * w;
        return r;
    }

    PerfLaurent as_series(RingValue v, const char* who) {
        if (std::holds_alternative<Int>(v)) return to_series(std::get<Int>(v));
        if (std::holds_alternative<PerfLaurent>(v)) return std::get<PerfLaurent>(v);
        throw DomainError(std::string(who) + " needs a series argument");
    }

    RingValue gamma(const Int& a, RingValue v) {
        PadicInt g(Prime(prime()), a, opt.group_prec);
        if (std::holds_alternative<Int>(v)) return v;
        if (std::holds_alternative<PerfLaurent>(v)) {
            PerfLaurent f = std::get<PerfLaurent>(v);
            if (!f.is_capped()) f = f.truncate(opt.cap);
            return gamma_act(g, f);
        }
        const WittElem& w = std::get<WittElem>(v);
        std::vector<PerfLaurent> digs;
        for (const auto& d : w.digits())
            digs.push_back(d.is_capped() ? d : d.truncate(opt.cap));
        return gamma_act_witt(g, WittElem(Prime(prime()), std::move(digs)));
    }

    RingValue phi(RingValue v, bool inverse) {
        if (std::holds_alternative<Int>(v)) return v;
        if (std::holds_alternative<PerfLaurent>(v)) {
            const PerfLaurent& f = std::get<PerfLaurent>(v);
            return inverse ? f.pth_root() : f.frobenius();
        }
        const WittElem& w = std::get<WittElem>(v);
        return inverse ? w.phi_inv() : w.phi();
    }

    Rat exponent() {
        if (eat_sym("(")) {
            Int num = integer();
            Int den(1);
            if (eat_sym("/")) den = integer();
            expect_sym(")");
            if (den <= 0) throw DomainError("exponent denominator must be positive");
            Rat e(num, den);
            e.canonicalize();
            return e;
        }
        return Rat(integer());
    }

    RingValue primary() {
        if (eat_sym("(")) {
            RingValue v = expr();
            expect_sym(")");
            return v;
        }
        if (eat_sym("[")) {
            RingValue inner = expr();
            expect_sym("]");
            return WittElem::teichmuller(as_series(std::move(inner), "[..]"),
                                         opt.witt_length);
        }
        const Token& t = peek();
        if (t.kind == Token::Integer) return integer();
        if (t.kind == Token::Ident) {
            if (t.text == "X") {
                ++at;
                return PerfLaurent::monomial(prime(), Rat(1), 1);
            }
            if (t.text == "T") {
                ++at;
                PerfLaurent onex =
                    PerfLaurent::from_terms(prime(), {{Rat(0), 1}, {Rat(1), 1}},
                                            std::nullopt);
                return WittElem::teichmuller(onex, opt.witt_length) -
                       WittElem::from_int(prime(), opt.witt_length, Int(1));
            }
            if (t.text == "phi" || t.text == "phiinv") {
                bool inv = t.text == "phiinv";
                ++at;
                expect_sym("(");
                RingValue v = expr();
                expect_sym(")");
                return phi(std::move(v), inv);
            }
            if (t.text == "gamma") {
                ++at;
                expect_sym("(");
                Int a = integer();
                expect_sym(",");
                RingValue v = expr();
                expect_sym(")");
                return gamma(a, std::move(v));
            }
            fail("unknown name '" + t.text + "'");
        }
        fail("expected a value");
    }

    RingValue factor() {
        if (eat_sym("-")) return negate(factor());
        RingValue base = primary();
        if (eat_sym("^")) return power(std::move(base), exponent());
        return base;
    }

    RingValue term() {
        RingValue v = factor();
        while (eat_sym("*")) v = mul(std::move(v), factor());
        return v;
    }

    RingValue expr() {
        RingValue v = term();
        while (true) {
            if (eat_sym("+")) {
                v = add(std::move(v), term(), false);
            } else if (eat_sym("-")) {
                v = add(std::move(v), term(), true);
            } else {
                return v;
            }
        }
    }

    RingValue top() {
        RingValue v = expr();
        if (peek().kind == Token::Ident && peek().text == "mod") {
            ++at;
            if (!(peek().kind == Token::Ident && peek().text == "p"))
                fail("expected 'p' after 'mod'");
            ++at;
            if (!std::holds_alternative<WittElem>(v))
                throw DomainError("mod p applies to Witt vectors");
            v = std::get<WittElem>(v).reduce_len(1).digit(0);
        }
        if (peek().kind != Token::End) fail("trailing input");
        return v;
    }
};

std::string exp_pretty(const Rat& e) {
    if (e == 1) return "X";
    if (e.get_den() == 1) return "X^" + e.get_num().get_str();
    return "X^(" + rat_str(e) + ")";
}

} // namespace

RingValue ring_eval(const std::string& expr, const RingOptions& opt) {
    if (opt.witt_length < 1 || opt.witt_length > 4)
        throw DomainError("witt length must be between 1 and 4");
    auto toks = lex(expr);
    Parser ps{toks, 0, opt};
    return ps.top();
}

std::string series_pretty(const PerfLaurent& f) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : f.term_list()) {
        if (!first) os << " + ";
        first = false;
        if (e == 0) {
            os << c;
        } else if (c == 1) {
            os << exp_pretty(e);
        } else {
            os << c << "*" << exp_pretty(e);
        }
    }
    if (f.is_capped()) {
        if (!first) os << " + ";
        first = false;
        Rat b = f.cap();
        os << "O(" << (b == 1 ? std::string("X") : exp_pretty(b)) << ")";
    }
    if (first) os << "0";
    return os.str();
}

std::string ring_value_str(const RingValue& v) {
    if (std::holds_alternative<Int>(v)) return std::get<Int>(v).get_str();
    if (std::holds_alternative<PerfLaurent>(v))
        return series_pretty(std::get<PerfLaurent>(v));
    const WittElem& w = std::get<WittElem>(v);
    std::string s = "W" + std::to_string(w.len()) + "(";
    for (int i = 0; i < w.len(); ++i) {
        if (i) s += "; ";
        s += series_pretty(w.digit(i));
    }
    return s + ")";
}

PadicInt poly_eval_at(const std::string& expr, const PadicInt& x) {
    struct PolyParser {
        std::vector<Token> toks;
        std::size_t at = 0;
        const PadicInt& x;

        const Token& peek() const { return toks[at]; }
        [[noreturn]] void fail(const std::string& what) const {
            throw ParseError(what + " at " + std::to_string(peek().pos));
        }
        bool eat_sym(const std::string& s) {
            if (peek().kind == Token::Sym && peek().text == s) {
                ++at;
                return true;
            }
            return false;
        }

        PadicInt constant(const Int& c) const {
            return PadicInt(Prime(x.prime()), c, x.precision());
        }

        PadicInt primary() {
            if (eat_sym("(")) {
                PadicInt v = expr();
                if (!eat_sym(")")) fail("expected ')'");
                return v;
            }
            if (peek().kind == Token::Integer) {
                Int c(peek().text);
                ++at;
                return constant(c);
            }
            if (peek().kind == Token::Ident && peek().text == "x") {
                ++at;
                return x;
            }
            fail("expected x, an integer, or '('");
        }

        PadicInt factor() {
            PadicInt base = primary();
            if (eat_sym("^")) {
                if (peek().kind != Token::Integer) fail("expected an integer exponent");
                Int e(peek().text);
                ++at;
                return base.pow(e);
            }
            return base;
        }

        PadicInt term() {
            PadicInt v = factor();
            while (eat_sym("*")) v = v * factor();
            return v;
        }

        PadicInt expr() {
            bool neg = eat_sym("-");
            PadicInt v = term();
            if (neg) v = -v;
            while (true) {
                if (eat_sym("+")) {
                    v = v + term();
                } else if (eat_sym("-")) {
                    v = v - term();
                } else {
                    return v;
                }
            }
        }

        PadicInt top() {
            PadicInt v = expr();
            if (peek().kind != Token::End) fail("trailing input");
            return v;
        }
    };
    PolyParser ps{lex(expr), 0, x};
    return ps.top();
}

MahlerFn<SeriesModule> mahler_parse_series(const SeriesModule& mod,
                                           const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty Mahler table");
    std::istringstream hd(line);
    std::string tag, dkv, nkv, tailkv, extra;
    hd >> tag >> dkv >> nkv >> tailkv;
    if (tag != "mahler" || dkv.rfind("d=", 0) != 0 || nkv.rfind("N=", 0) != 0 ||
        tailkv.rfind("tail=", 0) != 0)
        throw ParseError("bad Mahler header: " + line);
    int d = std::stoi(dkv.substr(2));
    long N = std::stol(nkv.substr(2));
    ExtVal tail = ExtVal::parse(tailkv.substr(5));
    bool heuristic = false;
    if (hd >> extra) {
        if (extra != "heuristic") throw ParseError("bad Mahler header: " + line);
        heuristic = true;
    }
    if (d < 1 || d > 3 || N < 0) throw ParseError("bad Mahler dimensions");

    std::vector<std::pair<MultiIndex, PerfLaurent>> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t open = line.find('(');
        std::size_t close = line.find("):", open);
        if (open == std::string::npos || close == std::string::npos)
            throw ParseError("bad Mahler entry: " + line);
        MultiIndex idx;
        std::istringstream ix(line.substr(open + 1, close - open - 1));
        std::string part;
        while (std::getline(ix, part, ',')) idx.push_back(std::stol(part));
        std::size_t body = line.find_first_not_of(' ', close + 2);
        PerfLaurent e = body == std::string::npos
                            ? PerfLaurent::zero(mod.prime())
                            : PerfLaurent::parse(mod.prime(), line.substr(body));
        entries.emplace_back(std::move(idx), std::move(e));
    }
    return make_mahler(mod, d, N, entries, tail, heuristic);
}

int cli_exit_code(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return 2;
    if (dynamic_cast<const CapExhausted*>(&e)) return 3;
    if (dynamic_cast<const InsufficientPrecision*>(&e)) return 3;
    if (dynamic_cast<const BudgetExceeded*>(&e)) return 3;
    return 1;
}

} // namespace lav
