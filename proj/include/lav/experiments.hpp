#ifndef LAV_EXPERIMENTS_HPP
#define LAV_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lav/analytic.hpp"

namespace lav {

// Shared knobs for the named experiments and the command-line tools.
// A run is a pure function of this record; every report embeds it, so
// identical configs reproduce byte-identical output.
struct RunConfig {
    unsigned long prime = 2;
    Rat cap = Rat(64);
    int witt_length = 2;
    long degree = 12;
    std::vector<Rat> lambda_grid; // empty: default_lambda_grid()
    std::vector<long> levels;     // empty: default_levels()
    std::uint64_t seed = 1;
    std::string format = "json";  // json | csv | text
    std::string out;              // report base path; empty: stdout only
};

// Quarter-integer steps from 2 down to -4.
std::vector<Rat> default_lambda_grid();
std::vector<long> default_levels();

// Deterministic stream for sample generation; fixed increment-and-mix
// arithmetic, so runs agree across platforms.
struct SplitMix64 {
    std::uint64_t s;
    explicit SplitMix64(std::uint64_t seed) : s(seed) {}
    std::uint64_t next();
    unsigned long below(unsigned long n);
};

struct ExperimentResult {
    std::string name;
    bool ok = false;
    std::string json;
    std::string csv;
};

// Witness tables for random elements of the finite-depth subfields
// (found level must stay within depth + 1 and be constant per depth)
// and the truncation ladder of three completion-only elements, whose
// best lambda at fixed level must strictly worsen with the truncation.
ExperimentResult run_decompletion(const RunConfig& cfg);

// Witness search over truncated Witt vectors whose digits live at
// bounded depth, plus the canonical rows T, phiinv(T) + pT and a
// Teichmueller multiple; every row must certify.
ExperimentResult run_witt_la(const RunConfig& cfg);

// The partial sums s_n = sum_{i<n} p^i phiinv^i(1 + T) in length n:
// each witnesses on its own, but the best lambda at a fixed level is
// strictly decreasing in n.
ExperimentResult run_counterexample(const RunConfig& cfg);

// Measured trace and inversion constants: the trivial-subgroup trace
// witness, projection losses (c2), fifty triangular solves with their
// losses (c3), and the twisted-monomial identity on random inputs.
ExperimentResult run_tatesen(const RunConfig& cfg);

// Twenty coboundary solves on orbit data with the residual bound
// defect recorded, plus a deliberately oversized lambda' probe that
// must be rejected.
ExperimentResult run_coboundary(const RunConfig& cfg);

const std::vector<std::string>& experiment_names();
ExperimentResult run_experiment(const std::string& name, const RunConfig& cfg);

} // namespace lav

#endif
