#ifndef CHESHIRE_ESTIMATION_HPP
#define CHESHIRE_ESTIMATION_HPP

#include <cstdint>
#include <vector>

#include "cheshire/protocols.hpp"

// Shot-noise sampling, strength sweeps, and polynomial extrapolation of
// pointer data to g -> 0.
//
// Randomness contract: every stochastic quantity is a pure function of
// (inputs, seed). The generator is splitmix64 with the documented constants
// 0x9E3779B97F4A7C15 / 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB, so streams
// are identical across platforms; child streams come from mix_seed and are
// aggregated in index order, independent of execution order.
//
// Fits use Householder QR on the (weighted) design matrix, not normal
// equations: Vandermonde columns in g are ill-conditioned at degree >= 3 on
// narrow ranges, which is exactly the regime the sensitivity study probes.
//
// Defaults used by the CLI (g grid of 8 points in [0.05, 0.6], 1e5 shots)
// are artifact choices for the study, not physically distinguished values.

namespace cheshire::estimation {

using protocols::Protocol;
using protocols::ShotCount;
using protocols::SweepTarget;

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 random bits
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Child seed for stream index `stream`: one splitmix64 output of
// seed ^ (golden-gamma * (stream + 1)). Parallel-safe, documented.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct SampleResult {
    double mean;
    double std_error; // sqrt((1 - mean^2) / shots)
};

// `shots` Bernoulli draws of a +-1-valued sigma_x measurement with
// p(+1) = (1 + sx_exact)/2. Deterministic given the seed.
SampleResult sample_pointer(double sx_exact, std::uint64_t shots, std::uint64_t seed);

struct SweepRow {
    double g;
    double sx_mean;
    ShotCount shots;  // effective shots; nullopt for exact rows
    double std_error; // 0 for exact rows
};

struct SweepData {
    std::vector<SweepRow> rows;
};

// One row per strength (strictly increasing, positive). Exact conditional
// sx comes from the protocol; sampled rows draw with seed mix_seed(seed, i).
// With the nondeterministic gate the nominal budget is cut to
// round(shots x retained fraction) — the gate discards 8/9 of the ensemble
// before post-selection; with the ideal coupling the nominal count is taken
// as the post-selected count.
SweepData sweep(const Protocol& p, const SweepTarget& target, const std::vector<double>& g_list,
                ShotCount shots, std::uint64_t seed);

struct FitConfig {
    int degree = 1;
    double g_lo = 0.0;
    double g_hi = 0.0;
    // sx(0) = 0 identically (the pointer does not move at zero strength), so
    // the intercept is dropped by default; keeping it reproduces the naive
    // unconstrained fit.
    bool zero_intercept = true;
};

struct FitResult {
    int degree = 1;
    bool zero_intercept = true;
    std::vector<double> coefficients; // c1..cd, or c0..cd with an intercept
    std::vector<std::vector<double>> covariance;
    double wv_estimate = 0.0; // c1
    double wv_stderr = 0.0;   // sqrt(cov[c1][c1])
};

// Weighted least squares of sx(g) onto {g, ..., g^d} (plus 1 when the
// intercept is kept): weights 1/stderr^2 for sampled rows, unweighted for
// exact rows (mixing the two is rejected). Covariance is the inverse Gram
// of the weighted design, residual-variance scaled in the unweighted case.
FitResult polyfit(const SweepData& d, const FitConfig& cfg);

struct Extrapolation {
    double estimate;
    double std_error;
};

// The weak value is the g -> 0 slope: (c1, stderr of c1).
Extrapolation extrapolate_weak_value(const FitResult& f);

struct SensitivityRow {
    int degree;
    double g_lo;
    double g_hi;
    double mean_estimate;
    double spread; // sample standard deviation across trials
};

// Monte Carlo over seeded resamples: trial t of range r sweeps with seed
// mix_seed(seed, t * #ranges + r), and every degree is fitted to the same
// resampled data within a trial. Rows are emitted degree-major in the given
// order. Requires trials >= 30.
std::vector<SensitivityRow> sensitivity_analysis(const Protocol& p, const SweepTarget& target,
                                                 const std::vector<std::vector<double>>& g_lists,
                                                 const std::vector<int>& degrees, ShotCount shots,
                                                 int trials, std::uint64_t seed);

} // namespace cheshire::estimation

#endif
