#include "lav/perflaurent.hpp"

#include <algorithm>
#include <sstream>

namespace lav {

PerfLaurent::MulTuning PerfLaurent::mul_tuning{};

namespace {

constexpr long long kScaledLimit = 1LL << 58;
constexpr int kDepthLimit = 60;

long long ll_pow(unsigned long p, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > kScaledLimit / static_cast<long long>(p))
            throw DomainError("exponent lattice overflow");
        r *= static_cast<long long>(p);
    }
    return r;
}

int val_p_ll(long long k, unsigned long p) {
    int v = 0;
    while (k % static_cast<long long>(p) == 0) {
        k /= static_cast<long long>(p);
        ++v;
    }
    return v;
}

} // namespace

FracExp fracexp_of(unsigned long p, const Rat& e) {
    const Int& num = e.get_num();
    const Int& den = e.get_den();
    Int d = den;
    int m = 0;
    while (d > 1) {
        if (d % static_cast<long>(p) != 0)
            throw DomainError("exponent denominator is not a power of " +
                              std::to_string(p));
        d /= static_cast<long>(p);
        if (++m > kDepthLimit) throw DomainError("exponent depth too large");
    }
    if (!num.fits_slong_p()) throw DomainError("exponent numerator too large");
    return FracExp{num.get_si(), m};
}

Rat fracexp_to_rat(unsigned long p, const FracExp& e) {
    Rat q(static_cast<long>(e.k));
    q /= Rat(int_pow(p, static_cast<unsigned long>(e.m)));
    return q;
}

PerfLaurent::PerfLaurent(Prime p) : p_(p.v) {}

PerfLaurent PerfLaurent::zero(unsigned long p) { return PerfLaurent(Prime(p)); }

PerfLaurent PerfLaurent::zero_cap(unsigned long p, const Rat& cap) {
    PerfLaurent f{Prime(p)};
    FracExp c = fracexp_of(p, cap);
    f.m_ = c.m;
    f.capped_ = true;
    f.cap_ = c.k;
    f.normalize();
    return f;
}

PerfLaurent PerfLaurent::one(unsigned long p) { return monomial(p, Rat(0), 1); }

PerfLaurent PerfLaurent::monomial(unsigned long p, const Rat& e, unsigned long c) {
    PerfLaurent f{Prime(p)};
    c %= p;
    if (c == 0) return f;
    FracExp fe = fracexp_of(p, e);
    f.m_ = fe.m;
    f.t_[fe.k] = c;
    f.normalize();
    return f;
}

PerfLaurent PerfLaurent::monomial_cap(unsigned long p, const Rat& e, unsigned long c,
                                      const Rat& cap) {
    return monomial(p, e, c).truncate(cap);
}

PerfLaurent PerfLaurent::from_terms(
    unsigned long p, const std::vector<std::pair<Rat, unsigned long>>& terms,
    const std::optional<Rat>& cap) {
    PerfLaurent f{Prime(p)};
    int m = 0;
    for (const auto& [e, c] : terms) m = std::max(m, fracexp_of(p, e).m);
    if (cap) m = std::max(m, fracexp_of(p, *cap).m);
    f.m_ = m;
    if (cap) {
        f.capped_ = true;
        f.cap_ = f.scaled_of(*cap, m);
    }
    for (const auto& [e, c] : terms) {
        unsigned long cc = c % p;
        if (cc == 0) continue;
        long long k = f.scaled_of(e, m);
        if (f.capped_ && k >= f.cap_) continue;
        auto [it, fresh] = f.t_.try_emplace(k, cc);
        if (!fresh) {
            it->second = (it->second + cc) % p;
            if (it->second == 0) f.t_.erase(it);
        }
    }
    f.normalize();
    return f;
}

int PerfLaurent::depth() const { return m_; }

Rat PerfLaurent::cap() const {
    if (!capped_) throw DomainError("series has no cap");
    return rat_of_scaled(cap_);
}

std::optional<Rat> PerfLaurent::cap_opt() const {
    if (!capped_) return std::nullopt;
    return rat_of_scaled(cap_);
}

ExtVal PerfLaurent::val() const {
    if (!t_.empty()) return ExtVal::of(rat_of_scaled(t_.begin()->first));
    if (capped_) return ExtVal::of(rat_of_scaled(cap_));
    return ExtVal::infinity();
}

unsigned long PerfLaurent::coeff_at(const Rat& e) const {
    FracExp fe = fracexp_of(p_, e);
    if (fe.m > m_) {
        if (capped_ && e >= rat_of_scaled(cap_))
            throw CapExhausted("coefficient beyond the cap");
        return 0;
    }
    long long k = fe.k * ll_pow(p_, m_ - fe.m);
    if (capped_ && k >= cap_) throw CapExhausted("coefficient beyond the cap");
    auto it = t_.find(k);
    return it == t_.end() ? 0 : it->second;
}

std::pair<Rat, unsigned long> PerfLaurent::lowest() const {
    if (t_.empty()) throw DomainError("series has no terms");
    return {rat_of_scaled(t_.begin()->first), t_.begin()->second};
}

std::vector<std::pair<Rat, unsigned long>> PerfLaurent::term_list() const {
    std::vector<std::pair<Rat, unsigned long>> out;
    out.reserve(t_.size());
    for (const auto& [k, c] : t_) out.emplace_back(rat_of_scaled(k), c);
    return out;
}

void PerfLaurent::normalize() {
    if (m_ == 0) return;
    int g = m_;
    if (capped_ && cap_ != 0) g = std::min(g, val_p_ll(cap_, p_));
    for (const auto& [k, c] : t_) {
        if (k != 0) g = std::min(g, val_p_ll(k, p_));
        if (g == 0) return;
    }
    if (g == 0) return;
    long long f = ll_pow(p_, g);
    std::map<long long, unsigned long> nt;
    for (const auto& [k, c] : t_) nt[k / f] = c;
    t_ = std::move(nt);
    if (capped_) cap_ /= f;
    m_ -= g;
}

void PerfLaurent::raise_depth(int m) {
    if (m < m_) throw DomainError("raise_depth: cannot lower");
    if (m == m_) return;
    if (m > kDepthLimit) throw DomainError("exponent depth too large");
    long long f = ll_pow(p_, m - m_);
    std::map<long long, unsigned long> nt;
    for (const auto& [k, c] : t_) {
        if (std::llabs(k) > kScaledLimit / f)
            throw DomainError("exponent lattice overflow");
        nt[k * f] = c;
    }
    t_ = std::move(nt);
    if (capped_) {
        if (std::llabs(cap_) > kScaledLimit / f)
            throw DomainError("exponent lattice overflow");
        cap_ *= f;
    }
    m_ = m;
}

long long PerfLaurent::scaled_of(const Rat& e, int m) const {
    FracExp fe = fracexp_of(p_, e);
    if (fe.m > m) throw DomainError("exponent deeper than lattice");
    return fe.k * ll_pow(p_, m - fe.m);
}

Rat PerfLaurent::rat_of_scaled(long long k) const {
    Rat q(static_cast<long>(k));
    q /= Rat(int_pow(p_, static_cast<unsigned long>(m_)));
    return q;
}

void PerfLaurent::check_same_prime(const PerfLaurent& a, const PerfLaurent& b) {
    if (a.p_ != b.p_) throw DomainError("mixed primes");
}

long long PerfLaurent::val_scaled_or(long long fallback) const {
    if (!t_.empty()) return t_.begin()->first;
    if (capped_) return cap_;
    return fallback;
}

PerfLaurent operator+(const PerfLaurent& a, const PerfLaurent& b) {
    PerfLaurent::check_same_prime(a, b);
    PerfLaurent x = a, y = b;
    int m = std::max(x.m_, y.m_);
    x.raise_depth(m);
    y.raise_depth(m);
    for (const auto& [k, c] : y.t_) {
        auto it = x.t_.find(k);
        if (it == x.t_.end()) {
            x.t_[k] = c;
        } else {
            unsigned long s = (it->second + c) % x.p_;
            if (s == 0)
                x.t_.erase(it);
            else
                it->second = s;
        }
    }
    if (y.capped_) {
        x.cap_ = x.capped_ ? std::min(x.cap_, y.cap_) : y.cap_;
        x.capped_ = true;
    }
    if (x.capped_) x.t_.erase(x.t_.lower_bound(x.cap_), x.t_.end());
    x.normalize();
    return x;
}

PerfLaurent PerfLaurent::operator-() const {
    PerfLaurent x = *this;
    for (auto& [k, c] : x.t_) c = p_ - c;
    return x;
}

PerfLaurent operator-(const PerfLaurent& a, const PerfLaurent& b) { return a + (-b); }

PerfLaurent PerfLaurent::scal_mul(unsigned long c) const {
    c %= p_;
    if (c == 0) return zero(p_);
    PerfLaurent x = *this;
    for (auto& [k, v] : x.t_) v = (v * c) % p_;
    return x;
}

PerfLaurent operator*(const PerfLaurent& a, const PerfLaurent& b) {
    PerfLaurent::check_same_prime(a, b);
    unsigned long p = a.p_;
    if (a.is_exact_zero() || b.is_exact_zero()) return PerfLaurent::zero(p);
    PerfLaurent x = a, y = b;
    int m = std::max(x.m_, y.m_);
    x.raise_depth(m);
    y.raise_depth(m);

    PerfLaurent out{Prime(p)};
    out.m_ = m;
    bool capped = false;
    long long cap = 0;
    if (x.capped_) {
        capped = true;
        cap = x.cap_ + y.val_scaled_or(0);
    }
    if (y.capped_) {
        long long c2 = y.cap_ + x.val_scaled_or(0);
        cap = capped ? std::min(cap, c2) : c2;
        capped = true;
    }
    out.capped_ = capped;
    out.cap_ = cap;

    if (!x.t_.empty() && !y.t_.empty()) {
        long long loA = x.t_.begin()->first, hiA = x.t_.rbegin()->first;
        long long loB = y.t_.begin()->first, hiB = y.t_.rbegin()->first;
        long long lo = loA + loB;
        long long hi = hiA + hiB;
        long long span = hi - lo + 1;
        std::size_t ops = x.t_.size() * y.t_.size();
        bool dense = span > 0 && span <= PerfLaurent::mul_tuning.span_limit &&
                     ops >= PerfLaurent::mul_tuning.min_ops;
        if (dense && p == 2) {
            std::size_t words = static_cast<std::size_t>(span / 64 + 2);
            std::vector<std::uint64_t> acc(words, 0), mask(words, 0);
            for (const auto& [k, c] : y.t_) {
                long long off = k - loB;
                mask[static_cast<std::size_t>(off >> 6)] |= 1ULL << (off & 63);
            }
            std::size_t bwords = static_cast<std::size_t>((hiB - loB) / 64 + 1);
            for (const auto& [k, c] : x.t_) {
                long long s = k - loA;
                std::size_t w = static_cast<std::size_t>(s >> 6);
                unsigned bit = static_cast<unsigned>(s & 63);
                if (bit == 0) {
                    for (std::size_t i = 0; i < bwords; ++i) acc[w + i] ^= mask[i];
                } else {
                    for (std::size_t i = 0; i < bwords; ++i) {
                        acc[w + i] ^= mask[i] << bit;
                        acc[w + i + 1] ^= mask[i] >> (64 - bit);
                    }
                }
            }
            for (long long idx = 0; idx < span; ++idx) {
                if (acc[static_cast<std::size_t>(idx >> 6)] >> (idx & 63) & 1) {
                    long long k = lo + idx;
                    if (capped && k >= cap) break;
                    out.t_[k] = 1;
                }
            }
        } else if (dense) {
            std::vector<std::uint64_t> acc(static_cast<std::size_t>(span), 0);
            for (const auto& [ka, ca] : x.t_)
                for (const auto& [kb, cb] : y.t_)
                    acc[static_cast<std::size_t>(ka + kb - lo)] += ca * cb;
            for (long long idx = 0; idx < span; ++idx) {
                unsigned long c = acc[static_cast<std::size_t>(idx)] % p;
                if (c == 0) continue;
                long long k = lo + idx;
                if (capped && k >= cap) break;
                out.t_[k] = c;
            }
        } else {
            if (ops > 200000000ULL)
                throw BudgetExceeded("series product too large");
            for (const auto& [ka, ca] : x.t_) {
                if (capped && ka + loB >= cap) break;
                for (const auto& [kb, cb] : y.t_) {
                    long long k = ka + kb;
                    if (capped && k >= cap) break;
                    unsigned long add = (ca * cb) % p;
                    auto [it, fresh] = out.t_.try_emplace(k, add);
                    if (!fresh) {
                        it->second = (it->second + add) % p;
                        if (it->second == 0) out.t_.erase(it);
                    }
                }
            }
        }
    }
    if (out.capped_) out.t_.erase(out.t_.lower_bound(out.cap_), out.t_.end());
    out.normalize();
    return out;
}

bool operator==(const PerfLaurent& a, const PerfLaurent& b) {
    return a.p_ == b.p_ && a.m_ == b.m_ && a.t_ == b.t_ && a.capped_ == b.capped_ &&
           (!a.capped_ || a.cap_ == b.cap_);
}

PerfLaurent PerfLaurent::pow(long long e) const {
    if (e < 0) return pow(-e).invert();
    if (e == 0) return one(p_);
    int top = 62;
    while (!((e >> top) & 1)) --top;
    PerfLaurent r = *this;
    for (int i = top - 1; i >= 0; --i) {
        r = r * r;
        if ((e >> i) & 1) r = r * *this;
    }
    return r;
}

PerfLaurent PerfLaurent::invert() const {
    if (t_.empty())
        throw NotInvertible("no leading term to invert against");
    auto [kv, cv] = *t_.begin();
    Int cinv_z;
    if (mpz_invert(cinv_z.get_mpz_t(), Int(static_cast<long>(cv)).get_mpz_t(),
                   Int(static_cast<long>(p_)).get_mpz_t()) == 0)
        throw NotInvertible("leading coefficient not a unit");
    unsigned long cinv = cinv_z.get_ui();
    PerfLaurent mono_inv{Prime(p_)};
    mono_inv.m_ = m_;
    mono_inv.t_[-kv] = cinv;
    mono_inv.normalize();
    if (t_.size() == 1 && !capped_) return mono_inv;
    if (!capped_)
        throw NotInvertible("inverse of an uncapped series is an infinite sum");
    PerfLaurent u = *this * mono_inv; // 1 + r with val(r) > 0
    Rat window = u.cap();
    PerfLaurent s = (one(p_) - u).truncate(window);
    PerfLaurent acc = one(p_) + PerfLaurent::zero_cap(p_, window);
    PerfLaurent pw = s;
    while (pw.has_terms()) {
        acc = acc + pw;
        pw = (pw * s).truncate(window);
    }
    return acc * mono_inv;
}

PerfLaurent PerfLaurent::truncate(const Rat& cap) const {
    PerfLaurent x = *this;
    FracExp fe = fracexp_of(p_, cap);
    x.raise_depth(std::max(x.m_, fe.m));
    long long c = x.scaled_of(cap, x.m_);
    x.cap_ = x.capped_ ? std::min(x.cap_, c) : c;
    x.capped_ = true;
    x.t_.erase(x.t_.lower_bound(x.cap_), x.t_.end());
    x.normalize();
    return x;
}

PerfLaurent PerfLaurent::frobenius() const {
    PerfLaurent x = *this;
    if (x.m_ > 0) {
        --x.m_;
        return x;
    }
    std::map<long long, unsigned long> nt;
    long long pp = static_cast<long long>(p_);
    for (const auto& [k, c] : t_) {
        if (std::llabs(k) > kScaledLimit / pp)
            throw DomainError("exponent lattice overflow");
        nt[k * pp] = c;
    }
    x.t_ = std::move(nt);
    if (x.capped_) {
        if (std::llabs(x.cap_) > kScaledLimit / pp)
            throw DomainError("exponent lattice overflow");
        x.cap_ *= pp;
    }
    return x;
}

PerfLaurent PerfLaurent::pth_root() const {
    PerfLaurent x = *this;
    if (x.m_ + 1 > kDepthLimit) throw DomainError("exponent depth too large");
    ++x.m_;
    x.normalize();
    return x;
}

PerfLaurent PerfLaurent::substitute_integral(const PerfLaurent& g) const {
    auto it = t_.rbegin();
    PerfLaurent acc = monomial(p_, Rat(0), it->second);
    long long prev = it->first;
    for (++it; it != t_.rend(); ++it) {
        acc = acc * g.pow(prev - it->first);
        acc = acc + monomial(p_, Rat(0), it->second);
        prev = it->first;
    }
    if (prev != 0) acc = acc * g.pow(prev);
    return acc;
}

PerfLaurent PerfLaurent::substitute(const PerfLaurent& g) const {
    check_same_prime(*this, g);
    ExtVal vg = g.val();
    if (t_.empty()) {
        if (!capped_) return zero(p_);
        if (vg.is_inf()) return zero(p_);
        return zero_cap(p_, cap() * vg.finite());
    }
    if (t_.size() == 1 && t_.begin()->first == 0 && !capped_)
        return monomial(p_, Rat(0), t_.begin()->second);
    if (!g.has_terms())
        throw DomainError("substitute: composition argument has no terms");

    PerfLaurent f = *this;
    f.normalize();
    long long k0 = f.t_.begin()->first;
    long long step = ll_pow(f.p_, f.m_);
    for (const auto& [k, c] : f.t_) {
        long long d = k - k0;
        if (d % step != 0)
            throw DomainError("substitute: exponents must differ by integers");
    }
    PerfLaurent f1{Prime(p_)};
    for (const auto& [k, c] : f.t_) f1.t_[(k - k0) / step] = c;

    PerfLaurent res = f1.substitute_integral(g);
    if (k0 != 0) {
        PerfLaurent gk = g.pow(k0 > 0 ? k0 : -k0);
        if (k0 < 0) gk = gk.invert();
        for (int i = 0; i < f.m_; ++i) gk = gk.pth_root();
        res = res * gk;
    }
    if (f.capped_ && !vg.is_inf()) res = res.truncate(f.cap() * vg.finite());
    return res;
}

PerfLaurent PerfLaurent::monomial_projection(long n) const {
    if (n < 0) throw DomainError("monomial_projection: negative depth");
    PerfLaurent x = *this;
    if (m_ <= n) return x;
    long long f = ll_pow(p_, static_cast<int>(m_ - n));
    for (auto it = x.t_.begin(); it != x.t_.end();) {
        if (it->first % f != 0)
            it = x.t_.erase(it);
        else
            ++it;
    }
    x.normalize();
    return x;
}

std::string PerfLaurent::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : t_) {
        if (!first) os << " + ";
        os << c << "*X^(" << rat_str(rat_of_scaled(k)) << ")";
        first = false;
    }
    if (capped_) {
        if (!first) os << " + ";
        os << "O(X^(" << rat_str(rat_of_scaled(cap_)) << "))";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

PerfLaurent PerfLaurent::parse(unsigned long p, const std::string& s) {
    if (s == "0") return zero(p);
    std::vector<std::string> toks;
    std::size_t pos = 0;
    while (true) {
        std::size_t nxt = s.find(" + ", pos);
        if (nxt == std::string::npos) {
            toks.push_back(s.substr(pos));
            break;
        }
        toks.push_back(s.substr(pos, nxt - pos));
        pos = nxt + 3;
    }
    std::vector<std::pair<Rat, unsigned long>> terms;
    std::optional<Rat> cap;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string& t = toks[i];
        if (t.empty()) throw ParseError("empty term");
        if (t.rfind("O(X^(", 0) == 0) {
            if (i + 1 != toks.size()) throw ParseError("cap term must be last");
            if (t.size() < 8 || t.substr(t.size() - 2) != "))")
                throw ParseError("bad cap term: " + t);
            cap = rat_parse(t.substr(5, t.size() - 7));
            continue;
        }
        std::size_t star = t.find("*X^(");
        if (star == std::string::npos || t.back() != ')')
            throw ParseError("bad term: " + t);
        std::string cs = t.substr(0, star);
        if (cs.empty() ||
            !std::all_of(cs.begin(), cs.end(),
                         [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
            throw ParseError("bad coefficient: " + t);
        unsigned long c = std::stoul(cs);
        if (c == 0 || c >= p) throw ParseError("coefficient out of range: " + t);
        Rat e = rat_parse(t.substr(star + 4, t.size() - star - 5));
        terms.emplace_back(e, c);
    }
    PerfLaurent f{Prime(p)};
    int m = 0;
    for (const auto& [e, c] : terms) m = std::max(m, fracexp_of(p, e).m);
    if (cap) m = std::max(m, fracexp_of(p, *cap).m);
    f.m_ = m;
    for (const auto& [e, c] : terms) {
        long long k = f.scaled_of(e, m);
        if (!f.t_.emplace(k, c).second) throw ParseError("duplicate exponent");
    }
    if (cap) {
        f.capped_ = true;
        f.cap_ = f.scaled_of(*cap, m);
        if (!f.t_.empty() && f.t_.rbegin()->first >= f.cap_)
            throw ParseError("term at or beyond the cap");
    }
    f.normalize();
    return f;
}

PerfLaurent binomial_shift_series(const PadicInt& a, const Rat& cap) {
    unsigned long p = a.prime();
    Int jmax;
    mpz_cdiv_q(jmax.get_mpz_t(), cap.get_num().get_mpz_t(), cap.get_den().get_mpz_t());
    jmax -= 1;
    if (!jmax.fits_slong_p()) throw BudgetExceeded("cap too large");
    long J = jmax.get_si();
    std::vector<std::pair<Rat, unsigned long>> terms;
    for (long j = 1; j <= J; ++j) {
        unsigned long c = binom_padic_mod_p(a, Int(j));
        if (c != 0) terms.emplace_back(Rat(j), c);
    }
    return PerfLaurent::from_terms(p, terms, cap);
}

namespace {

// One-slot cache: orbit computations reuse the same multiplier.
struct ShiftSeriesCache {
    bool valid = false;
    unsigned long p = 0;
    Int residue;
    long prec = 0;
    Rat cap;
    PerfLaurent series{Prime(2)};
};

PerfLaurent binomial_shift_series_cached(const PadicInt& a, const Rat& cap) {
    static thread_local ShiftSeriesCache cache;
    if (cache.valid && cache.p == a.prime() && cache.residue == a.residue() &&
        cache.prec == a.precision() && cache.cap >= cap)
        return cache.series.truncate(cap);
    PerfLaurent s = binomial_shift_series(a, cap);
    cache = ShiftSeriesCache{true, a.prime(), a.residue(), a.precision(), cap, s};
    return s;
}

} // namespace

PerfLaurent gamma_act(const PadicInt& a, const PerfLaurent& f) {
    if (a.prime() != f.prime()) throw DomainError("mixed primes");
    if (!a.is_unit()) throw DomainError("group element must be a unit");
    if (!f.has_terms()) return f;
    if (a.residue() == 1) return f;
    if (!f.is_capped()) {
        auto tl = f.term_list();
        if (tl.size() == 1 && tl[0].first == 0) return f;
        throw CapExhausted("action on an uncapped series needs a cap");
    }
    unsigned long p = f.prime();
    int M = f.depth();
    Rat B = f.cap();

    // Split by exponent denominator, deepest first so the cached
    // multiplier series is built once at the largest cap.
    std::vector<std::vector<std::pair<Rat, unsigned long>>> parts(
        static_cast<std::size_t>(M) + 1);
    for (const auto& [e, c] : f.term_list()) {
        int d = fracexp_of(p, e).m;
        parts[static_cast<std::size_t>(d)].emplace_back(e, c);
    }
    PerfLaurent res = PerfLaurent::zero_cap(p, B);
    for (int d = M; d >= 0; --d) {
        if (parts[static_cast<std::size_t>(d)].empty()) continue;
        PerfLaurent S = PerfLaurent::from_terms(p, parts[static_cast<std::size_t>(d)], B);
        for (int i = 0; i < d; ++i) S = S.frobenius();
        Rat e_neg(0);
        Rat e_min = S.lowest().first;
        if (e_min < 0) e_neg = -e_min;
        Rat target = S.cap();
        PerfLaurent g = binomial_shift_series_cached(a, target + 2 * e_neg + 2);
        PerfLaurent h = S.substitute(g).truncate(target);
        for (int i = 0; i < d; ++i) h = h.pth_root();
        res = res + h;
    }
    return res;
}

} // namespace lav
