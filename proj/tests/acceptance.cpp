// Acceptance gate for the library: twelve checks, one line each,
// nonzero exit when any fails.  Sample recipes and tolerances are
// pinned here; changing them changes what the suite certifies.

#include "lav/experiments.hpp"
#include "lav/exprcalc.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

using namespace lav;
using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& note = "") {
    std::printf("%s %2d %s%s%s\n", ok ? "PASS" : "FAIL", idx, name,
                note.empty() ? "" : "  ", note.c_str());
    if (!ok) ++failures;
}

double secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Int int_pow(unsigned long b, long e) {
    Int r = 1;
    for (long i = 0; i < e; ++i) r *= static_cast<long>(b);
    return r;
}

PerfLaurent random_series(SplitMix64& rng, unsigned long p, const Rat& cap) {
    std::vector<std::pair<Rat, unsigned long>> terms;
    long count = 1 + static_cast<long>(rng.below(4));
    for (long t = 0; t < count; ++t) {
        long num = static_cast<long>(rng.below(48)) - 8;
        long den = 1;
        for (unsigned long r = rng.below(3); r > 0; --r) den *= static_cast<long>(p);
        Rat e(num, den);
        e.canonicalize();
        if (e >= cap) continue;
        unsigned long c = 1 + rng.below(p - 1);
        terms.emplace_back(e, c);
    }
    return PerfLaurent::from_terms(p, terms, cap);
}

MahlerFn<SeriesModule> random_series_fn(SplitMix64& rng, unsigned long p, int d,
                                        long N, const Rat& cap) {
    SeriesModule mod{Prime(p), cap};
    std::vector<std::pair<MultiIndex, PerfLaurent>> entries;
    MultiIndex n(static_cast<std::size_t>(d), 0);
    do {
        entries.emplace_back(n, random_series(rng, p, cap));
    } while (next_in_box(n, N));
    return make_mahler(mod, d, N, entries);
}

MahlerFn<PadicModule> random_padic_fn(SplitMix64& rng, unsigned long p, int d,
                                      long N, long prec) {
    PadicModule mod{Prime(p), prec};
    std::vector<std::pair<MultiIndex, PadicInt>> entries;
    MultiIndex n(static_cast<std::size_t>(d), 0);
    do {
        Int v = Int(static_cast<long>(rng.below(1000)) - 500);
        entries.emplace_back(n, PadicInt(Prime(p), v, prec));
    } while (next_in_box(n, N));
    return make_mahler(mod, d, N, entries);
}

// Equality up to the information both sides carry: capped digits
// compare below the smaller cap, since association order moves caps.
bool digit_eq_trunc(const PerfLaurent& a, const PerfLaurent& b) {
    if (a.is_capped() && b.is_capped()) {
        Rat c = std::min(a.cap(), b.cap());
        return a.truncate(c) == b.truncate(c);
    }
    if (a.is_capped()) return b.truncate(a.cap()) == a;
    if (b.is_capped()) return a.truncate(b.cap()) == b;
    return a == b;
}

bool witt_eq_trunc(const WittElem& a, const WittElem& b) {
    if (a.prime() != b.prime() || a.len() != b.len()) return false;
    for (int i = 0; i < a.len(); ++i)
        if (!digit_eq_trunc(a.digit(i), b.digit(i))) return false;
    return true;
}

const ExperimentResult& experiment(const std::string& name, unsigned long p) {
    static std::map<std::pair<std::string, unsigned long>, ExperimentResult> cache;
    auto key = std::make_pair(name, p);
    auto it = cache.find(key);
    if (it == cache.end()) {
        RunConfig cfg;
        cfg.prime = p;
        it = cache.emplace(key, run_experiment(name, cfg)).first;
    }
    return it->second;
}

// ---- 1. Mahler expansion round-trips exactly over series coefficients.

bool c01_mahler_round_trip(std::string& note) {
    auto t0 = Clock::now();
    SplitMix64 rng(101);
    for (int i = 0; i < 200; ++i) {
        unsigned long p = i % 3 == 0 ? 2 : (i % 3 == 1 ? 3 : 5);
        int d = 1 + i % 2;
        long N = d == 1 ? 2 + static_cast<long>(rng.below(31))
                        : 1 + static_cast<long>(rng.below(6));
        auto f = random_series_fn(rng, p, d, N, Rat(64));
        auto g = mahler_coeffs(grid_of(f));
        if (g.coef.size() != f.coef.size()) return false;
        for (std::size_t k = 0; k < f.coef.size(); ++k)
            if (!(g.coef[k] == f.coef[k])) return false;
    }
    double t = secs(t0);
    note = "200 samples in " + std::to_string(t).substr(0, 4) + "s";
    return t < 30.0;
}

// ---- 2. The coefficient and grid growth conditions agree.

bool c02_growth_conditions(std::string&) {
    SplitMix64 rng(202);
    for (unsigned long p : {2UL, 3UL, 5UL}) {
        for (int t = 0; t < 100; ++t) {
            int d = 1 + static_cast<int>(rng.below(2));
            long N = d == 1 ? 9 : 4;
            auto f = random_padic_fn(rng, p, d, N, 18);
            Rat lam(static_cast<long>(rng.below(5)) - 2,
                    1 + static_cast<long>(rng.below(2)));
            lam.canonicalize();
            Rat mu(static_cast<long>(rng.below(9)) - 6);
            if (check_cond1(f, lam, mu) != check_cond2(grid_of(f), lam, mu))
                return false;
        }
    }
    return true;
}

// ---- 3. Shifts are isometries of the weighted valuation.

bool c03_shift_isometry(std::string&) {
    SplitMix64 rng(303);
    const Rat lams[4] = {Rat(1), Rat(1, 2), Rat(0), Rat(-1, 2)};
    for (unsigned long p : {2UL, 3UL, 5UL}) {
        for (int t = 0; t < 34; ++t) {
            auto f = random_padic_fn(rng, p, 1, 8, 20);
            const Rat& lam = lams[rng.below(4)];
            Int zi;
            if (t % 3 == 0) {
                zi = 1;
            } else if (t % 3 == 1) {
                zi = static_cast<long>(p);
            } else {
                zi = 1 + static_cast<long>(rng.below(40));
                if (zi % static_cast<long>(p) == 0) ++zi;
            }
            PadicInt z(Prime(p), zi, 20);
            if (!(val_lambda(shift(f, {z}), lam) == val_lambda(f, lam)))
                return false;
        }
    }
    return true;
}

// ---- 4. Difference steps by p^l gain the certified amount, and the
// closed-form level matches an independent scan of the defining inf.

bool oracle_exceeds(unsigned long p, long lam, long l, const Rat& c) {
    Rat plam(int_pow(p, lam));
    Int P = int_pow(p, l);
    for (long j = 1;; ++j) {
        Rat head = plam * j - 1;
        if (head > c) return true;
        if (Int(j) <= P) {
            Int bin;
            mpz_bin_ui(bin.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(j));
            long vb = 0;
            while (bin % static_cast<long>(p) == 0) {
                bin /= static_cast<long>(p);
                ++vb;
            }
            if (!(head + vb > c)) return false;
        }
    }
}

long oracle_level(unsigned long p, long lam, const Rat& c) {
    for (long l = 0; l <= 16; ++l)
        if (oracle_exceeds(p, lam, l, c)) return l;
    return -1;
}

bool c04_level_gain(std::string& note) {
    if (gain_level(2, Rat(1), Rat(3)) != 3 || oracle_level(2, 1, Rat(3)) != 3) {
        note = "pinned p=2 level mismatch";
        return false;
    }
    if (gain_level(3, Rat(1), Rat(1)) != 0 || oracle_level(3, 1, Rat(1)) != 0) {
        note = "pinned p=3 level mismatch";
        return false;
    }
    SplitMix64 rng(404);
    const Rat lams[3] = {Rat(1), Rat(1, 2), Rat(0)};
    const Rat cs[4] = {Rat(1, 2), Rat(1), Rat(2), Rat(3)};
    for (unsigned long p : {2UL, 3UL}) {
        for (const Rat& lam : lams) {
            for (const Rat& c : cs) {
                long l = gain_level(p, lam, c);
                for (int t = 0; t < 4; ++t) {
                    auto f = random_padic_fn(rng, p, 1, 10, 40);
                    auto df = delta_step_int(f, int_pow(p, l), 0);
                    if (!(val_lambda(df, lam) >= val_lambda(f, lam) + ExtVal::of(c)))
                        return false;
                }
            }
        }
    }
    return true;
}

// ---- 5. The cyclotomic action moves X by exactly p^m for generators
// at depth m.

bool c05_gamma_valuations(std::string&) {
    Rat cap(64);
    PerfLaurent x2 = PerfLaurent::monomial_cap(2, Rat(1), 1, cap);
    if (!((gamma_act(PadicInt(Prime(2), Int(3), 64), x2) - x2).val() ==
          ExtVal::of(Rat(2))))
        return false;
    PerfLaurent x3 = PerfLaurent::monomial_cap(3, Rat(1), 1, cap);
    if (!((gamma_act(PadicInt(Prime(3), Int(4), 64), x3) - x3).val() ==
          ExtVal::of(Rat(3))))
        return false;
    SplitMix64 rng(505);
    for (int i = 0; i < 20; ++i) {
        unsigned long p = i % 2 ? 3 : 2;
        long m = 1 + i % 3;
        Int u = 1 + static_cast<long>(rng.below(8));
        if (u % static_cast<long>(p) == 0) ++u;
        Int a = 1 + int_pow(p, m) * u;
        PerfLaurent x = PerfLaurent::monomial_cap(p, Rat(1), 1, cap);
        PerfLaurent d = gamma_act(PadicInt(Prime(p), a, 64), x) - x;
        if (!(d.val() == ExtVal::of(Rat(int_pow(p, m))))) return false;
    }
    return true;
}

// ---- 6. Every bounded-depth element certifies at level <= depth + 1
// with the full degree-32 table.

bool c06_witness_shallow(std::string& note) {
    auto t0 = Clock::now();
    SplitMix64 rng(606);
    auto grid = default_lambda_grid();
    auto levels = default_levels();
    for (unsigned long p : {2UL, 3UL}) {
        SeriesModule mod{Prime(p), Rat(64)};
        for (long m = 0; m <= 3; ++m) {
            unsigned long pm = 1;
            for (long i = 0; i < m; ++i) pm *= p;
            for (int s = 0; s < 3; ++s) {
                std::vector<std::pair<Rat, unsigned long>> ts;
                ts.emplace_back(Rat(1, static_cast<long>(pm)), 1);
                unsigned long extra = rng.below(3);
                for (unsigned long e = 0; e < extra; ++e) {
                    unsigned long k = 2 + rng.below(3 * pm);
                    Rat ex(static_cast<long>(k), static_cast<long>(pm));
                    ex.canonicalize();
                    ts.emplace_back(ex, 1 + rng.below(p - 1));
                }
                PerfLaurent x = PerfLaurent::from_terms(p, ts, Rat(64));
                auto res = witness_search(mod, x, levels, grid, 32, 64);
                if (!res || res->level > m + 1) return false;
            }
        }
    }
    note = "24 elements in " + std::to_string(secs(t0)).substr(0, 4) + "s";
    return true;
}

// ---- 7. Truncation ladders of completion-only elements show strictly
// worsening rates.

bool c07_deep_degradation(std::string&) {
    for (unsigned long p : {2UL, 3UL}) {
        const auto& res = experiment("decompletion", p);
        Json j = Json::parse(res.json);
        if (!res.ok || j["deep_strictly_decreasing"] != true) return false;
        if (j["deep"].size() != 9) return false;
    }
    return true;
}

// ---- 8. Witt vectors form a ring, Frobenius lifts the p-th power on
// the distinguished element, and mod-p reduction recovers the series.

bool c08_witt_axioms(std::string&) {
    SplitMix64 rng(808);
    for (int i = 0; i < 100; ++i) {
        unsigned long p = i % 2 ? 3 : 2;
        std::vector<PerfLaurent> da, db, dc;
        for (int k = 0; k < 3; ++k) {
            da.push_back(random_series(rng, p, Rat(9)));
            db.push_back(random_series(rng, p, Rat(9)));
            dc.push_back(random_series(rng, p, Rat(9)));
        }
        WittElem a{Prime(p), da}, b{Prime(p), db}, c{Prime(p), dc};
        WittElem zero = WittElem::zero(p, 3);
        WittElem one = WittElem::from_int(p, 3, Int(1));
        if (!witt_eq_trunc(a + b, b + a)) return false;
        if (!witt_eq_trunc((a + b) + c, a + (b + c))) return false;
        if (!witt_eq_trunc(a * b, b * a)) return false;
        if (!witt_eq_trunc((a * b) * c, a * (b * c))) return false;
        if (!witt_eq_trunc(a * (b + c), a * b + a * c)) return false;
        if (!witt_eq_trunc(a + zero, a)) return false;
        if (!witt_eq_trunc(a * one, a)) return false;
        if (!witt_eq_trunc(a + (-a), zero)) return false;
        if (!witt_eq_trunc((a + b).reduce_len(2), a.reduce_len(2) + b.reduce_len(2)))
            return false;
        if (!witt_eq_trunc((a * b).reduce_len(2), a.reduce_len(2) * b.reduce_len(2)))
            return false;
    }
    for (unsigned long p : {2UL, 3UL}) {
        WittElem t = WittElem::element_T(p, 3, Rat(16));
        WittElem one = WittElem::from_int(p, 3, Int(1));
        WittElem pow = t + one;
        WittElem base = pow;
        for (unsigned long k = 1; k < p; ++k) pow = pow * base;
        if (!witt_eq_trunc(t.phi() + one, pow)) return false;

        PerfLaurent x = PerfLaurent::monomial(p, Rat(1), 1);
        if (!digit_eq_trunc(t.reduce_len(1).digit(0), x)) return false;
        PerfLaurent onex =
            PerfLaurent::from_terms(p, {{Rat(0), 1}, {Rat(1), 1}}, std::nullopt);
        WittElem texact = WittElem::teichmuller(onex, 2) - WittElem::from_int(p, 2, Int(1));
        if (!(texact.reduce_len(1).digit(0) == x)) return false;
    }
    return true;
}

// ---- 9. Trace constants: exact projections, saturated triangular
// solves, and the twisted-monomial identity.

bool c09_tatesen(std::string&) {
    for (unsigned long p : {2UL, 3UL}) {
        const auto& res = experiment("tatesen", p);
        if (!res.ok) return false;
        Json j = Json::parse(res.json);
        if (j["c2"] != "0") return false;
        if (j["ts3_all_saturated"] != true) return false;
        if (j["ts3_samples"].size() != 50) return false;
        if (j["ts4_all_ok"] != true) return false;
        if (j["ts4_samples"].size() != 30) return false;
        rat_parse(j["c3"].get<std::string>());
    }
    return true;
}

// ---- 10. Coboundary solves meet the residual bound with the recorded
// constant, and an oversized rate is refused.

bool c10_coboundary(std::string& note) {
    const auto& res = experiment("coboundary", 2);
    if (!res.ok) return false;
    Json j = Json::parse(res.json);
    if (j["solves"].size() != 20) return false;
    for (const auto& row : j["solves"]) {
        if (row["lambda_prime"].is_null()) return false;
        if (rat_parse(row["defect"].get<std::string>()) > Rat(4)) return false;
    }
    if (j["oversized_lambda_rejected"] != true) return false;
    note = "O(1) recorded: " + j["o1_recorded"].get<std::string>();
    return true;
}

// ---- 11. Witt-coefficient witnesses all certify; the partial-sum
// ladder has strictly decreasing rates.

bool c11_witt_la_counterexample(std::string&) {
    for (unsigned long p : {2UL, 3UL}) {
        if (!experiment("witt-la", p).ok) return false;
        const auto& ce = experiment("counterexample", p);
        if (!ce.ok) return false;
        Json j = Json::parse(ce.json);
        if (j["lambda_strictly_decreasing"] != true) return false;
    }
    return true;
}

// ---- 12. Reports are byte-identical across reruns.

bool c12_determinism(std::string&) {
    RunConfig cfg;
    for (const auto& name : experiment_names()) {
        const auto& first = experiment(name, 2);
        ExperimentResult second = run_experiment(name, cfg);
        if (second.json != first.json || second.csv != first.csv) return false;
    }
    return true;
}

template <class F>
void run(int idx, const char* name, F&& f) {
    std::string note;
    bool ok = false;
    try {
        ok = f(note);
    } catch (const std::exception& e) {
        note = std::string("exception: ") + e.what();
    }
    report(idx, name, ok, note);
}

} // namespace

int main() {
    run(1, "mahler-round-trip", c01_mahler_round_trip);
    run(2, "growth-conditions-agree", c02_growth_conditions);
    run(3, "shift-isometry", c03_shift_isometry);
    run(4, "difference-level-gain", c04_level_gain);
    run(5, "gamma-action-valuations", c05_gamma_valuations);
    run(6, "witness-bounded-depth", c06_witness_shallow);
    run(7, "deep-degradation", c07_deep_degradation);
    run(8, "witt-ring-axioms", c08_witt_axioms);
    run(9, "tatesen-constants", c09_tatesen);
    run(10, "coboundary-bound", c10_coboundary);
    run(11, "witt-la-and-ladder", c11_witt_la_counterexample);
    run(12, "report-determinism", c12_determinism);
    if (failures) std::printf("%d of 12 checks failed\n", failures);
    return failures ? 1 : 0;
}
