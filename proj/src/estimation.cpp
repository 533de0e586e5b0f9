#include "cheshire/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cheshire::estimation {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    return rng.next();
}

SampleResult sample_pointer(double sx_exact, std::uint64_t shots, std::uint64_t seed) {
    if (!(std::abs(sx_exact) <= 1.0 + 1e-12)) {
        throw PreconditionError("|<sigma_x>| cannot exceed 1");
    }
    if (shots < 1) {
        throw PreconditionError("sampling needs at least one shot");
    }
    const double p = std::min(1.0, std::max(0.0, (1.0 + sx_exact) / 2.0));
    SplitMix64 rng(seed);
    std::uint64_t plus = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
        if (rng.next_unit() < p) ++plus;
    }
    const double mean =
        (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
    const double var = std::max(0.0, 1.0 - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(shots))};
}

SweepData sweep(const Protocol& p, const SweepTarget& target, const std::vector<double>& g_list,
                ShotCount shots, std::uint64_t seed) {
    for (std::size_t i = 0; i < g_list.size(); ++i) {
        if (!(g_list[i] > 0.0)) {
            throw PreconditionError("sweep strengths must be positive");
        }
        if (i > 0 && !(g_list[i] > g_list[i - 1])) {
            throw PreconditionError("sweep strengths must be strictly increasing");
        }
    }
    if (shots && *shots < 1) {
        throw PreconditionError("sampled sweeps need at least one shot");
    }

    SweepData out;
    out.rows.reserve(g_list.size());
    for (std::size_t i = 0; i < g_list.size(); ++i) {
        const double g = g_list[i];
        const pointer::PointerReadout r = protocols::protocol_readout(p.kind, p.gate, target, g);
        if (!shots) {
            out.rows.push_back({g, r.sx, std::nullopt, 0.0});
            continue;
        }
        std::uint64_t budget = *shots;
        if (p.gate == protocols::GateKind::PpbsGate) {
            const protocols::EnsembleEfficiency eff =
                protocols::ensemble_efficiency({p.kind, p.gate, g, shots});
            const double scaled = std::round(static_cast<double>(*shots) * eff.retained);
            if (!(scaled >= 1.0)) {
                throw PreconditionError(
                    "the retained fraction leaves no shots at g = " + std::to_string(g));
            }
            budget = static_cast<std::uint64_t>(scaled);
        }
        const SampleResult s = sample_pointer(r.sx, budget, mix_seed(seed, i));
        out.rows.push_back({g, s.mean, budget, s.std_error});
    }
    return out;
}

namespace {

struct Design {
    std::vector<double> x; // n x p, row-major, weight-scaled
    std::vector<double> y; // n, weight-scaled
    std::size_t n = 0;
    std::size_t p = 0;
    bool weighted = false;
    double rss = 0.0; // filled by the QR solve
};

Design build_design(const std::vector<SweepRow>& rows, const FitConfig& cfg) {
    Design d;
    d.n = rows.size();
    d.p = static_cast<std::size_t>(cfg.degree) + (cfg.zero_intercept ? 0 : 1);
    bool any_exact = false;
    bool any_sampled = false;
    for (const SweepRow& r : rows) {
        (r.std_error > 0.0 ? any_sampled : any_exact) = true;
    }
    if (any_exact && any_sampled) {
        throw PreconditionError("cannot fit a mix of exact and sampled rows");
    }
    d.weighted = any_sampled;
    d.x.resize(d.n * d.p);
    d.y.resize(d.n);
    for (std::size_t i = 0; i < d.n; ++i) {
        const double w = d.weighted ? 1.0 / rows[i].std_error : 1.0;
        double power = cfg.zero_intercept ? rows[i].g : 1.0;
        for (std::size_t j = 0; j < d.p; ++j) {
            d.x[i * d.p + j] = w * power;
            power *= rows[i].g;
        }
        d.y[i] = w * rows[i].sx_mean;
    }
    return d;
}

// In-place Householder QR: overwrites x with R in the upper triangle and
// applies the reflections to y. Returns false on a (numerically) singular
// design.
bool householder_qr(Design& d) {
    const std::size_t n = d.n;
    const std::size_t p = d.p;
    std::vector<double> v(n);
    for (std::size_t j = 0; j < p; ++j) {
        double norm2 = 0.0;
        for (std::size_t i = j; i < n; ++i) {
            const double xij = d.x[i * p + j];
            norm2 += xij * xij;
        }
        const double norm = std::sqrt(norm2);
        if (norm < 1e-300) return false;
        const double pivot = d.x[j * p + j];
        const double alpha = pivot >= 0.0 ? -norm : norm;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < n; ++i) {
            v[i] = d.x[i * p + j];
            if (i == j) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 < 1e-300) continue; // column already triangular
        for (std::size_t k = j; k < p; ++k) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += v[i] * d.x[i * p + k];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = j; i < n; ++i) d.x[i * p + k] -= f * v[i];
        }
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i] * d.y[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = j; i < n; ++i) d.y[i] -= f * v[i];
    }
    d.rss = 0.0;
    for (std::size_t i = p; i < n; ++i) d.rss += d.y[i] * d.y[i];
    return true;
}

} // namespace

FitResult polyfit(const SweepData& data, const FitConfig& cfg) {
    if (cfg.degree < 1) {
        throw PreconditionError("fit degree must be at least 1");
    }
    if (!(cfg.g_lo <= cfg.g_hi)) {
        throw PreconditionError("fit range is empty (g_lo > g_hi)");
    }
    std::vector<SweepRow> rows;
    for (const SweepRow& r : data.rows) {
        if (r.g >= cfg.g_lo && r.g <= cfg.g_hi) rows.push_back(r);
    }
    const std::size_t p = static_cast<std::size_t>(cfg.degree) + (cfg.zero_intercept ? 0 : 1);
    if (rows.size() <= p) {
        throw PreconditionError("underdetermined fit: " + std::to_string(rows.size()) +
                                " rows in range for " + std::to_string(p) + " coefficients");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (rows[i].g == rows[j].g) {
                throw PreconditionError("duplicate strength values make the design singular");
            }
        }
    }

    Design d = build_design(rows, cfg);
    if (!householder_qr(d)) {
        throw PreconditionError("singular design matrix");
    }

    // Back-substitute R c = Q^T y.
    std::vector<double> c(p, 0.0);
    for (std::size_t jj = p; jj-- > 0;) {
        double s = d.y[jj];
        for (std::size_t k = jj + 1; k < p; ++k) s -= d.x[jj * p + k] * c[k];
        const double rjj = d.x[jj * p + jj];
        if (std::abs(rjj) < 1e-300) {
            throw PreconditionError("singular design matrix");
        }
        c[jj] = s / rjj;
    }

    // R^{-1} by back substitution, then (X^T X)^{-1} = R^{-1} R^{-T}.
    std::vector<double> rinv(p * p, 0.0);
    for (std::size_t col = 0; col < p; ++col) {
        for (std::size_t jj = p; jj-- > 0;) {
            double s = (jj == col) ? 1.0 : 0.0;
            for (std::size_t k = jj + 1; k < p; ++k) s -= d.x[jj * p + k] * rinv[k * p + col];
            rinv[jj * p + col] = s / d.x[jj * p + jj];
        }
    }
    const double scale = d.weighted
                             ? 1.0
                             : d.rss / static_cast<double>(rows.size() - p); // residual variance
    std::vector<std::vector<double>> cov(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < p; ++k) s += rinv[i * p + k] * rinv[j * p + k];
            cov[i][j] = scale * s;
        }
    }

    FitResult out;
    out.degree = cfg.degree;
    out.zero_intercept = cfg.zero_intercept;
    out.coefficients = std::move(c);
    out.covariance = std::move(cov);
    const std::size_t slope = cfg.zero_intercept ? 0 : 1;
    out.wv_estimate = out.coefficients[slope];
    out.wv_stderr = std::sqrt(std::max(0.0, out.covariance[slope][slope]));
    return out;
}

Extrapolation extrapolate_weak_value(const FitResult& f) {
    return {f.wv_estimate, f.wv_stderr};
}

std::vector<SensitivityRow> sensitivity_analysis(const Protocol& p, const SweepTarget& target,
                                                 const std::vector<std::vector<double>>& g_lists,
                                                 const std::vector<int>& degrees, ShotCount shots,
                                                 int trials, std::uint64_t seed) {
    if (trials < 30) {
        throw PreconditionError("sensitivity analysis needs at least 30 trials");
    }
    if (g_lists.empty() || degrees.empty()) {
        throw PreconditionError("sensitivity analysis needs at least one range and one degree");
    }

    const std::size_t n_ranges = g_lists.size();
    const std::size_t n_degrees = degrees.size();
    // estimates[d][r] across trials, filled in trial-index order
    std::vector<std::vector<std::vector<double>>> estimates(
        n_degrees, std::vector<std::vector<double>>(n_ranges));

    for (int t = 0; t < trials; ++t) {
        for (std::size_t r = 0; r < n_ranges; ++r) {
            const std::uint64_t sweep_seed =
                mix_seed(seed, static_cast<std::uint64_t>(t) * n_ranges + r);
            const SweepData data = sweep(p, target, g_lists[r], shots, sweep_seed);
            for (std::size_t di = 0; di < n_degrees; ++di) {
                FitConfig cfg;
                cfg.degree = degrees[di];
                cfg.g_lo = g_lists[r].front();
                cfg.g_hi = g_lists[r].back();
                estimates[di][r].push_back(polyfit(data, cfg).wv_estimate);
            }
        }
    }

    std::vector<SensitivityRow> out;
    out.reserve(n_degrees * n_ranges);
    for (std::size_t di = 0; di < n_degrees; ++di) {
        for (std::size_t r = 0; r < n_ranges; ++r) {
            const std::vector<double>& xs = estimates[di][r];
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            double ss = 0.0;
            for (double x : xs) ss += (x - mean) * (x - mean);
            const double spread = std::sqrt(ss / static_cast<double>(xs.size() - 1));
            out.push_back({degrees[di], g_lists[r].front(), g_lists[r].back(), mean, spread});
        }
    }
    return out;
}

} // namespace cheshire::estimation
