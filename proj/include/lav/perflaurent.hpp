#ifndef LAV_PERFLAURENT_HPP
#define LAV_PERFLAURENT_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lav/padic.hpp"

namespace lav {

// Exponent k / p^m in lowest terms (m == 0, or k coprime to p).
struct FracExp {
    long long k = 0;
    int m = 0;
    friend bool operator==(const FracExp&, const FracExp&) = default;
};

FracExp fracexp_of(unsigned long p, const Rat& e);
Rat fracexp_to_rat(unsigned long p, const FracExp& e);

// A Laurent series over F_p in fractional powers X^(k/p^m), sparse,
// with an optional cap: terms with exponent >= cap are unknown, and
// every operation propagates the tightest cap it can certify.
// Internally all exponents are integers on the lattice (1/p^M)Z.
class PerfLaurent {
public:
    explicit PerfLaurent(Prime p);

    static PerfLaurent zero(unsigned long p);
    static PerfLaurent zero_cap(unsigned long p, const Rat& cap);
    static PerfLaurent one(unsigned long p);
    static PerfLaurent monomial(unsigned long p, const Rat& e, unsigned long c);
    static PerfLaurent monomial_cap(unsigned long p, const Rat& e, unsigned long c,
                                    const Rat& cap);
    static PerfLaurent from_terms(unsigned long p,
                                  const std::vector<std::pair<Rat, unsigned long>>& terms,
                                  const std::optional<Rat>& cap);

    unsigned long prime() const { return p_; }
    // Least m with all exponents (and the cap) in (1/p^m)Z.
    int depth() const;
    bool is_capped() const { return capped_; }
    Rat cap() const;
    std::optional<Rat> cap_opt() const;

    bool has_terms() const { return !t_.empty(); }
    bool is_exact_zero() const { return t_.empty() && !capped_; }
    std::size_t num_terms() const { return t_.size(); }

    // Valuation; for a capped series with no terms this saturates at
    // the cap (val_saturated() distinguishes the two readings).
    ExtVal val() const;
    bool val_saturated() const { return t_.empty() && capped_; }
    unsigned long coeff_at(const Rat& e) const;
    std::pair<Rat, unsigned long> lowest() const;
    std::vector<std::pair<Rat, unsigned long>> term_list() const;

    friend PerfLaurent operator+(const PerfLaurent& a, const PerfLaurent& b);
    friend PerfLaurent operator-(const PerfLaurent& a, const PerfLaurent& b);
    friend PerfLaurent operator*(const PerfLaurent& a, const PerfLaurent& b);
    PerfLaurent operator-() const;
    friend bool operator==(const PerfLaurent& a, const PerfLaurent& b);

    PerfLaurent scal_mul(unsigned long c) const;
    PerfLaurent pow(long long e) const;
    PerfLaurent invert() const;
    PerfLaurent truncate(const Rat& cap) const;

    // X^e -> X^(p e) on every term; exact, scales the cap by p.
    PerfLaurent frobenius() const;
    // X^e -> X^(e/p); inverse of frobenius, divides the cap by p.
    PerfLaurent pth_root() const;

    // f(g): needs the exponents of f to differ by integers.
    PerfLaurent substitute(const PerfLaurent& g) const;

    // Drop terms whose exponent needs denominator > p^n.
    PerfLaurent monomial_projection(long n) const;

    std::string str() const;
    static PerfLaurent parse(unsigned long p, const std::string& s);

    struct MulTuning {
        long long span_limit = 1LL << 22;
        std::size_t min_ops = 2048;
    };
    static MulTuning mul_tuning; // test hook

private:
    unsigned long p_;
    int m_ = 0;                       // current lattice depth
    std::map<long long, unsigned long> t_; // scaled exponent -> coeff in [1, p)
    bool capped_ = false;
    long long cap_ = 0;               // scaled, meaningful iff capped_

    void normalize();
    void raise_depth(int m);
    long long scaled_of(const Rat& e, int m) const;
    Rat rat_of_scaled(long long k) const;
    static void check_same_prime(const PerfLaurent& a, const PerfLaurent& b);
    long long val_scaled_or(long long fallback) const;
    PerfLaurent substitute_integral(const PerfLaurent& g) const;
};

// Coefficients of (1+X)^a - 1 up to the cap, exponent 1..cap-1.
PerfLaurent binomial_shift_series(const PadicInt& a, const Rat& cap);

// The action sending X to (1+X)^a - 1, extended to fractional
// exponents through p-th roots; a must be a unit.
PerfLaurent gamma_act(const PadicInt& a, const PerfLaurent& f);

} // namespace lav

#endif
