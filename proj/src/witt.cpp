#include "lav/witt.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace lav {

namespace {

using Key = std::array<std::uint16_t, 8>;
using Poly = std::map<Key, unsigned long long>;

Key key_add(const Key& a, const Key& b) {
    Key r;
    for (int i = 0; i < 8; ++i) r[i] = static_cast<std::uint16_t>(a[i] + b[i]);
    return r;
}

void add_into(Poly& f, const Key& k, unsigned long long c, unsigned long long P) {
    c %= P;
    if (c == 0) return;
    auto [it, fresh] = f.try_emplace(k, c);
    if (!fresh) {
        it->second = (it->second + c) % P;
        if (it->second == 0) f.erase(it);
    }
}

Poly poly_mul(const Poly& a, const Poly& b, unsigned long long P) {
    if (a.size() * b.size() > 200000000ull)
        throw BudgetExceeded("carry polynomial product too large");
    Poly r;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) add_into(r, key_add(ka, kb), ca * cb, P);
    return r;
}

Poly poly_scale(const Poly& a, unsigned long long s, unsigned long long P) {
    Poly r;
    for (const auto& [k, c] : a) add_into(r, k, c * (s % P), P);
    return r;
}

Poly poly_sub(Poly a, const Poly& b, unsigned long long P) {
    for (const auto& [k, c] : b) add_into(a, k, P - c, P);
    return a;
}

unsigned long long pow_ull(unsigned long long b, unsigned long e) {
    unsigned long long r = 1;
    for (unsigned long i = 0; i < e; ++i) r *= b;
    return r;
}

// Multinomial expansion of f^e when the composition count is small.
void pow_multinomial_rec(const std::vector<std::pair<Key, unsigned long long>>& t,
                         std::size_t i, unsigned long rem, const Key& key,
                         const Int& coef, unsigned long long P, Poly& out) {
    if (i + 1 == t.size()) {
        Int c = coef;
        for (unsigned long j = 0; j < rem; ++j)
            c = c * static_cast<long>(t[i].second % P);
        Key k = key;
        for (int s = 0; s < 8; ++s)
            k[s] = static_cast<std::uint16_t>(k[s] + rem * t[i].first[s]);
        unsigned long long cc = mpz_fdiv_ui(c.get_mpz_t(), P);
        add_into(out, k, cc, P);
        return;
    }
    Key k = key;
    for (unsigned long e = 0; e <= rem; ++e) {
        Int c = coef * binom_int(Int(static_cast<long>(rem)), e);
        for (unsigned long j = 0; j < e; ++j)
            c = c * static_cast<long>(t[i].second % P);
        pow_multinomial_rec(t, i + 1, rem - e, k, c, P, out);
        for (int s = 0; s < 8; ++s)
            k[s] = static_cast<std::uint16_t>(k[s] + t[i].first[s]);
    }
}

Poly poly_pow(const Poly& a, unsigned long e, unsigned long long P) {
    Poly one{{Key{}, 1 % P}};
    if (e == 0) return one;
    if (a.empty()) return {};
    Int comps = binom_int(Int(static_cast<long>(e + a.size() - 1)),
                          static_cast<unsigned long>(a.size() - 1));
    if (comps <= 3000000) {
        std::vector<std::pair<Key, unsigned long long>> t(a.begin(), a.end());
        Poly out;
        pow_multinomial_rec(t, 0, e, Key{}, Int(1), P, out);
        return out;
    }
    Poly r = one;
    Poly base = a;
    unsigned long ee = e;
    while (ee > 0) {
        if (ee & 1) r = poly_mul(r, base, P);
        ee >>= 1;
        if (ee) base = poly_mul(base, base, P);
    }
    return r;
}

// Ghost component w_k in the variables at slot offset o.
Poly ghost(unsigned long p, int k, int o, unsigned long long P) {
    Poly w;
    for (int i = 0; i <= k; ++i) {
        Key key{};
        key[o + i] = static_cast<std::uint16_t>(
            pow_ull(p, static_cast<unsigned long>(k - i)));
        add_into(w, key, pow_ull(p, static_cast<unsigned long>(i)) % P, P);
    }
    return w;
}

std::vector<CarryLaw::Term> to_terms(const Poly& f) {
    std::vector<CarryLaw::Term> out;
    out.reserve(f.size());
    for (const auto& [k, c] : f)
        out.push_back({k, static_cast<unsigned long>(c)});
    return out;
}

// Solve the stage-k laws from the ghost identities, reducing modulo
// p^(k+1) before each division by p^k; any integer lift of the lower
// stages gives the same answer there, so the mod-p tables suffice.
struct LawSolver {
    unsigned long p;
    int n;
    unsigned long long P;

    std::vector<Poly> solve(const std::vector<Poly>& targets) {
        std::vector<Poly> solved;
        for (int k = 0; k < n; ++k) {
            Poly bracket = targets[static_cast<std::size_t>(k)];
            for (int i = 0; i < k; ++i) {
                Poly pw = poly_pow(solved[static_cast<std::size_t>(i)],
                                   pow_ull(p, static_cast<unsigned long>(k - i)), P);
                bracket = poly_sub(
                    bracket, poly_scale(pw, pow_ull(p, static_cast<unsigned long>(i)), P),
                    P);
            }
            unsigned long long Q = pow_ull(p, static_cast<unsigned long>(k + 1));
            unsigned long long pk = pow_ull(p, static_cast<unsigned long>(k));
            Poly sk;
            for (const auto& [key, c] : bracket) {
                unsigned long long cq = c % Q;
                if (cq % pk != 0)
                    throw Error("carry law: ghost solve inconsistency");
                unsigned long long d = (cq / pk) % p;
                if (d != 0) sk[key] = d;
            }
            solved.push_back(std::move(sk));
        }
        return solved;
    }
};

} // namespace

const CarryLaw& CarryLaw::get(unsigned long p, int n) {
    static std::map<std::pair<unsigned long, int>, CarryLaw> cache;
    auto it = cache.find({p, n});
    if (it != cache.end()) return it->second;
    if (n < 1 || n > 4) throw DomainError("Witt length must be between 1 and 4");
    Prime pr(p);
    unsigned long long P = pow_ull(p, static_cast<unsigned long>(n));
    if (P > (1ull << 40)) throw DomainError("prime too large for Witt laws");
    LawSolver solver{p, n, P};

    std::vector<Poly> ts, tp, tn;
    for (int k = 0; k < n; ++k) {
        Poly wa = ghost(p, k, 0, P);
        Poly wb = ghost(p, k, 4, P);
        Poly s = wa;
        for (const auto& [key, c] : wb) add_into(s, key, c, P);
        ts.push_back(s);
        tp.push_back(poly_mul(wa, wb, P));
        tn.push_back(poly_scale(wa, P - 1, P));
    }
    CarryLaw law;
    law.p = p;
    law.n = n;
    for (const Poly& f : solver.solve(ts)) law.sum.push_back(to_terms(f));
    for (const Poly& f : solver.solve(tp)) law.prod.push_back(to_terms(f));
    for (const Poly& f : solver.solve(tn)) law.neg.push_back(to_terms(f));
    return cache.emplace(std::make_pair(p, n), std::move(law)).first->second;
}

namespace {

// Evaluate one stage polynomial on the 8 digit slots with a shared
// power cache per slot.
struct StageEval {
    unsigned long p;
    const std::vector<PerfLaurent>* slots;
    mutable std::vector<std::map<unsigned long, PerfLaurent>> cache;

    explicit StageEval(unsigned long p_, const std::vector<PerfLaurent>& s)
        : p(p_), slots(&s), cache(8) {}

    const PerfLaurent& pw(int slot, unsigned long e) const {
        auto& m = cache[static_cast<std::size_t>(slot)];
        auto it = m.find(e);
        if (it != m.end()) return it->second;
        PerfLaurent r = PerfLaurent::zero(p);
        if (e == 1) {
            r = (*slots)[static_cast<std::size_t>(slot)];
        } else {
            r = pw(slot, e / 2) * pw(slot, e - e / 2);
        }
        return m.emplace(e, std::move(r)).first->second;
    }

    PerfLaurent run(const std::vector<CarryLaw::Term>& terms) const {
        PerfLaurent acc = PerfLaurent::zero(p);
        for (const auto& t : terms) {
            PerfLaurent prod = PerfLaurent::one(p).scal_mul(t.c);
            bool dead = false;
            for (int s = 0; s < 8 && !dead; ++s) {
                if (t.e[static_cast<std::size_t>(s)] == 0) continue;
                const PerfLaurent& f = (*slots)[static_cast<std::size_t>(s)];
                if (f.is_exact_zero()) {
                    dead = true;
                    break;
                }
                prod = prod * pw(s, t.e[static_cast<std::size_t>(s)]);
            }
            if (!dead) acc = acc + prod;
        }
        return acc;
    }
};

std::vector<PerfLaurent> law_eval(const std::vector<std::vector<CarryLaw::Term>>& law,
                                  unsigned long p,
                                  const std::vector<PerfLaurent>& slots, int n) {
    std::vector<PerfLaurent> out;
    StageEval ev(p, slots);
    for (int k = 0; k < n; ++k)
        out.push_back(ev.run(law[static_cast<std::size_t>(k)]));
    return out;
}

std::vector<PerfLaurent> pad8(const std::vector<PerfLaurent>& a,
                              const std::vector<PerfLaurent>& b, unsigned long p) {
    std::vector<PerfLaurent> s(8, PerfLaurent::zero(p));
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) s[4 + i] = b[i];
    return s;
}

} // namespace

WittElem::WittElem(Prime p, std::vector<PerfLaurent> digits) : p_(p.v), x_(std::move(digits)) {
    if (x_.empty() || x_.size() > 4)
        throw DomainError("Witt length must be between 1 and 4");
    for (const auto& d : x_)
        if (d.prime() != p_) throw DomainError("digit prime mismatch");
}

WittElem WittElem::zero(unsigned long p, int n) {
    if (n < 1 || n > 4) throw DomainError("Witt length must be between 1 and 4");
    return WittElem(Prime(p),
                    std::vector<PerfLaurent>(static_cast<std::size_t>(n),
                                             PerfLaurent::zero(p)));
}

WittElem WittElem::from_int(unsigned long p, int n, const Int& c) {
    WittElem out = zero(p, n);
    Int pn = int_pow(p, static_cast<unsigned long>(n));
    std::vector<Int> lifts;
    for (int k = 0; k < n; ++k) {
        Int Q = int_pow(p, static_cast<unsigned long>(k + 1));
        Int acc = 0;
        for (int i = 0; i < k; ++i) {
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), lifts[static_cast<std::size_t>(i)].get_mpz_t(),
                       pow_ull(p, static_cast<unsigned long>(k - i)));
            acc += int_pow(p, static_cast<unsigned long>(i)) * pw;
        }
        Int rem;
        mpz_fdiv_r(rem.get_mpz_t(), Int(c - acc).get_mpz_t(), Q.get_mpz_t());
        Int pk = int_pow(p, static_cast<unsigned long>(k));
        if (rem % pk != 0) throw Error("integer Witt expansion inconsistency");
        Int d;
        mpz_fdiv_r(d.get_mpz_t(), Int(rem / pk).get_mpz_t(),
                   Int(static_cast<long>(p)).get_mpz_t());
        unsigned long dv = d.get_ui();
        out.x_[static_cast<std::size_t>(k)] = PerfLaurent::monomial(p, Rat(0), dv);
        lifts.push_back(d);
    }
    return out;
}

WittElem WittElem::teichmuller(const PerfLaurent& f, int n) {
    if (n < 1 || n > 4) throw DomainError("Witt length must be between 1 and 4");
    std::vector<PerfLaurent> d(static_cast<std::size_t>(n),
                               PerfLaurent::zero(f.prime()));
    d[0] = f;
    return WittElem(Prime(f.prime()), std::move(d));
}

WittElem WittElem::element_T(unsigned long p, int n, const Rat& cap) {
    PerfLaurent u = PerfLaurent::from_terms(p, {{Rat(0), 1}, {Rat(1), 1}}, cap);
    return teichmuller(u, n) - from_int(p, n, Int(1));
}

const PerfLaurent& WittElem::digit(int i) const {
    if (i < 0 || i >= len()) throw DomainError("Witt digit out of range");
    return x_[static_cast<std::size_t>(i)];
}

void WittElem::check_compat(const WittElem& a, const WittElem& b) {
    if (a.p_ != b.p_) throw DomainError("mixed primes");
    if (a.len() != b.len()) throw DomainError("mixed Witt lengths");
}

WittElem operator+(const WittElem& a, const WittElem& b) {
    WittElem::check_compat(a, b);
    const CarryLaw& law = CarryLaw::get(a.prime(), a.len());
    return WittElem(Prime(a.prime()),
                    law_eval(law.sum, a.prime(), pad8(a.digits(), b.digits(), a.prime()),
                             a.len()));
}

WittElem operator*(const WittElem& a, const WittElem& b) {
    WittElem::check_compat(a, b);
    const CarryLaw& law = CarryLaw::get(a.prime(), a.len());
    return WittElem(Prime(a.prime()),
                    law_eval(law.prod, a.prime(), pad8(a.digits(), b.digits(), a.prime()),
                             a.len()));
}

WittElem WittElem::operator-() const {
    const CarryLaw& law = CarryLaw::get(p_, len());
    return WittElem(Prime(p_),
                    law_eval(law.neg, p_, pad8(x_, {}, p_), len()));
}

WittElem operator-(const WittElem& a, const WittElem& b) { return a + (-b); }

bool operator==(const WittElem& a, const WittElem& b) {
    return a.p_ == b.p_ && a.x_ == b.x_;
}

WittElem WittElem::p_times() const {
    std::vector<PerfLaurent> d;
    d.push_back(PerfLaurent::zero(p_));
    for (int i = 0; i + 1 < len(); ++i)
        d.push_back(x_[static_cast<std::size_t>(i)].frobenius());
    return WittElem(Prime(p_), std::move(d));
}

WittElem WittElem::vshift() const {
    std::vector<PerfLaurent> d;
    d.push_back(PerfLaurent::zero(p_));
    for (int i = 0; i + 1 < len(); ++i) d.push_back(x_[static_cast<std::size_t>(i)]);
    return WittElem(Prime(p_), std::move(d));
}

WittElem WittElem::phi() const {
    std::vector<PerfLaurent> d;
    for (const auto& f : x_) d.push_back(f.frobenius());
    return WittElem(Prime(p_), std::move(d));
}

WittElem WittElem::phi_inv() const {
    std::vector<PerfLaurent> d;
    for (const auto& f : x_) d.push_back(f.pth_root());
    return WittElem(Prime(p_), std::move(d));
}

WittElem WittElem::reduce_len(int k) const {
    if (k < 1 || k > len()) throw DomainError("bad Witt truncation length");
    return WittElem(Prime(p_),
                    std::vector<PerfLaurent>(x_.begin(), x_.begin() + k));
}

bool WittElem::negligible() const {
    for (const auto& f : x_)
        if (f.has_terms()) return false;
    return true;
}

ExtVal WittElem::val_r(const Rat& r) const {
    if (r <= 0) throw DomainError("radius must be positive");
    ExtVal best = ExtVal::infinity();
    for (int i = 0; i < len(); ++i) {
        ExtVal v = x_[static_cast<std::size_t>(i)].val();
        if (v.is_inf()) continue;
        Rat pi(int_pow(p_, static_cast<unsigned long>(i)));
        Rat term = Rat(i) / r + v.finite() / pi;
        best = min(best, ExtVal::of(term));
    }
    return best;
}

std::string WittElem::str() const {
    std::ostringstream os;
    os << "W" << len() << "@p=" << p_ << "[";
    for (int i = 0; i < len(); ++i) {
        if (i) os << "; ";
        os << x_[static_cast<std::size_t>(i)].str();
    }
    os << "]";
    return os.str();
}

WittElem WittElem::parse(const std::string& s) {
    if (s.empty() || s[0] != 'W') throw ParseError("bad Witt element: " + s);
    std::size_t at = s.find("@p=");
    std::size_t lb = s.find('[');
    if (at == std::string::npos || lb == std::string::npos || s.back() != ']' ||
        at >= lb)
        throw ParseError("bad Witt element: " + s);
    int n = 0;
    unsigned long p = 0;
    try {
        n = std::stoi(s.substr(1, at - 1));
        p = std::stoul(s.substr(at + 3, lb - at - 3));
    } catch (const std::exception&) {
        throw ParseError("bad Witt element: " + s);
    }
    std::string inner = s.substr(lb + 1, s.size() - lb - 2);
    std::vector<PerfLaurent> digits;
    std::size_t pos = 0;
    while (true) {
        std::size_t nxt = inner.find("; ", pos);
        std::string piece =
            nxt == std::string::npos ? inner.substr(pos) : inner.substr(pos, nxt - pos);
        digits.push_back(PerfLaurent::parse(p, piece));
        if (nxt == std::string::npos) break;
        pos = nxt + 2;
    }
    if (static_cast<int>(digits.size()) != n)
        throw ParseError("Witt digit count mismatch: " + s);
    return WittElem(Prime(p), std::move(digits));
}

WittElem gamma_act_witt(const PadicInt& a, const WittElem& u) {
    std::vector<PerfLaurent> d;
    for (const auto& f : u.digits()) d.push_back(gamma_act(a, f));
    return WittElem(Prime(u.prime()), std::move(d));
}

} // namespace lav
