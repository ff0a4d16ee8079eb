#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "surrokit/dataset.hpp"
#include "surrokit/kernels.hpp"
#include "surrokit/rng.hpp"

namespace surrokit {

// Sampling ranges for quadratic coefficients. Defaults keep the real-root
// acceptance rate high and the labels bounded.
struct CoeffRanges {
    double a_min = 0.5, a_max = 5.0;
    double b_min = -10.0, b_max = 10.0;
    double c_min = -10.0, c_max = 10.0;
};

struct NewtonGenConfig {
    CoeffRanges ranges;
    double disc_floor = 0.1;          // reject b^2 - 4ac below this
    double epsilon = 1e-10;           // solver termination threshold
    std::size_t max_iters = 100;
    std::optional<double> fixed_x0;   // unset: drawn once per dataset from [x0_min, x0_max]
    double x0_min = 1.0, x0_max = 100.0;
};

struct NewtonGenResult {
    Dataset data;        // inputs (a, b, c), output: the root the solver lands on
    double x0 = 0.0;     // the one initial guess shared by every sample
    double rejection_rate = 0.0;
};

// Samples (a, b, c), rejects near-degenerate discriminants and non-converged
// solves, and labels each accepted triple with the root newton_solve reaches
// from one dataset-wide initial guess. One shared x0 keeps the learned map a
// function of (a, b, c) alone.
inline NewtonGenResult gen_newton_dataset(std::size_t n, const NewtonGenConfig& cfg,
                                          std::uint64_t rng_seed) {
    if (n == 0) throw std::invalid_argument("gen_newton_dataset: n must be >= 1");
    if (!(cfg.ranges.a_max >= cfg.ranges.a_min && cfg.ranges.b_max >= cfg.ranges.b_min &&
          cfg.ranges.c_max >= cfg.ranges.c_min))
        throw std::invalid_argument("gen_newton_dataset: empty coefficient range");

    std::mt19937_64 rng(rng_seed);
    NewtonGenResult result;
    result.x0 = cfg.fixed_x0 ? *cfg.fixed_x0 : uniform_real(rng, cfg.x0_min, cfg.x0_max);
    result.data = Dataset::empty(3, 1);

    NewtonConfig solver_cfg;
    solver_cfg.epsilon = cfg.epsilon;
    solver_cfg.max_iters = cfg.max_iters;
    solver_cfg.initial_guess = result.x0;

    std::size_t attempts = 0;
    while (result.data.size() < n) {
        ++attempts;
        // Bail out once the acceptance rate is provably hopeless.
        if (attempts >= 100 && attempts % 100 == 0) {
            const double accepted = static_cast<double>(result.data.size());
            if (accepted < 0.1 * static_cast<double>(attempts))
                throw std::runtime_error(
                    "gen_newton_dataset: rejection rate above 90% (" +
                    std::to_string(attempts - result.data.size()) + " of " +
                    std::to_string(attempts) +
                    " draws rejected); widen the coefficient ranges or lower disc_floor");
        }
        const double a = uniform_real(rng, cfg.ranges.a_min, cfg.ranges.a_max);
        const double b = uniform_real(rng, cfg.ranges.b_min, cfg.ranges.b_max);
        const double c = uniform_real(rng, cfg.ranges.c_min, cfg.ranges.c_max);
        if (a == 0.0) continue;
        QuadraticEq eq(a, b, c);
        if (eq.discriminant() < cfg.disc_floor) continue;
        const NewtonResult solved = newton_solve(eq, solver_cfg);
        if (!solved.converged) continue;
        result.data.add({a, b, c}, {solved.root});
    }
    result.rejection_rate =
        static_cast<double>(attempts - n) / static_cast<double>(attempts);
    return result;
}

// Default sampling window for the pair-force surrogate: separations from
// 0.9 sigma out to 1.2 * r_cut, so the data covers the repulsive head, the
// cutoff kink, and a zero-labelled slice past the cutoff.
inline std::pair<double, double> default_lj_r_sq_range(const LJParams& p) {
    const double lo = 0.9 * p.sigma;
    const double hi = 1.2 * p.r_cut;
    return {lo * lo, hi * hi};
}

// Input: squared separation d^2 (one component); label: lj_pair_force(d^2).
// Separations are drawn uniformly in r over (sqrt(lo), sqrt(hi)] and squared.
// Labels past the cutoff are exactly zero; the surrogate has to learn the
// branch, not just the smooth part.
inline Dataset gen_lj_dataset(std::size_t n, const LJParams& p, double r_sq_min,
                              double r_sq_max, std::uint64_t rng_seed) {
    if (n == 0) throw std::invalid_argument("gen_lj_dataset: n must be >= 1");
    const double r_extended = 1.2 * p.r_cut;
    if (!(r_sq_min >= 0.0) || !(r_sq_max > r_sq_min))
        throw std::invalid_argument("gen_lj_dataset: empty r_sq range");
    if (r_sq_max > r_extended * r_extended * (1.0 + 1e-12))
        throw std::invalid_argument("gen_lj_dataset: r_sq range exceeds (1.2 * r_cut)^2");

    const double r_lo = std::sqrt(r_sq_min);
    const double r_hi = std::sqrt(r_sq_max);
    std::mt19937_64 rng(rng_seed);
    Dataset data = Dataset::empty(1, 1);
    data.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = r_lo + (r_hi - r_lo) * uniform01_open_low(rng);
        const double r_sq = r * r;
        data.add({r_sq}, {lj_pair_force(r_sq, p)});
    }
    return data;
}

}  // namespace surrokit
