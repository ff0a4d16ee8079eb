#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "surrokit/rng.hpp"

namespace surrokit {

// ---------------------------------------------------------------------------
// Newton-Raphson on quadratics

// f(x) = a x^2 + b x + c with a != 0.
struct QuadraticEq {
    double a;
    double b;
    double c;

    QuadraticEq(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
        if (a == 0.0) throw std::invalid_argument("QuadraticEq: a must be nonzero");
    }

    double eval(double x) const { return (a * x + b) * x + c; }
    double deriv(double x) const { return 2.0 * a * x + b; }
    double discriminant() const { return b * b - 4.0 * a * c; }
    bool has_real_root() const { return discriminant() >= 0.0; }
};

struct NewtonConfig {
    double epsilon = 1e-10;        // stop when |x_i - x_{i-1}| < epsilon
    std::size_t max_iters = 100;
    double initial_guess = 1.0;

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("NewtonConfig: epsilon must be > 0");
        if (max_iters == 0) throw std::invalid_argument("NewtonConfig: max_iters must be >= 1");
    }
};

struct NewtonResult {
    double root = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double residual = 0.0;  // |f(root)|
};

// Iterates x <- x - f(x)/f'(x) from the initial guess until the step shrinks
// below epsilon or the iteration cap is hit. A near-zero derivative nudges
// the iterate by 1e-6 * (1 + |x|) so the update stays defined; convergence is
// reported, never thrown.
inline NewtonResult newton_solve(const QuadraticEq& eq, const NewtonConfig& cfg) {
    cfg.validate();
    NewtonResult result;
    double x = cfg.initial_guess;
    for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
        double fprime = eq.deriv(x);
        if (std::fabs(fprime) < 1e-12) {
            x += 1e-6 * (1.0 + std::fabs(x));
            fprime = eq.deriv(x);
        }
        const double x_next = x - eq.eval(x) / fprime;
        result.iterations = iter;
        if (std::fabs(x_next - x) < cfg.epsilon) {
            result.root = x_next;
            result.converged = true;
            result.residual = std::fabs(eq.eval(x_next));
            return result;
        }
        x = x_next;
    }
    result.root = x;
    result.converged = false;
    result.residual = std::fabs(eq.eval(x));
    return result;
}

// ---------------------------------------------------------------------------
// Lennard-Jones pair interaction

// Reduced units by default: epsilon = sigma = 1, cutoff at the potential
// minimum 2^(1/6) sigma (purely repulsive WCA form).
struct LJParams {
    double epsilon_lj = 1.0;
    double sigma = 1.0;
    double r_cut = 0.0;  // 0 requests the default 2^(1/6) * sigma

    LJParams(double epsilon_ = 1.0, double sigma_ = 1.0, double r_cut_ = 0.0)
        : epsilon_lj(epsilon_), sigma(sigma_), r_cut(r_cut_) {
        if (!(epsilon_lj > 0.0)) throw std::invalid_argument("LJParams: epsilon must be > 0");
        if (!(sigma > 0.0)) throw std::invalid_argument("LJParams: sigma must be > 0");
        if (r_cut == 0.0) r_cut = std::pow(2.0, 1.0 / 6.0) * sigma;
        if (!(r_cut > 0.0)) throw std::invalid_argument("LJParams: r_cut must be > 0");
    }

    double r_cut_sq() const { return r_cut * r_cut; }
};

// U(r) = 4 eps [ (sigma/r)^12 - (sigma/r)^6 ] for r < r_cut, else exactly 0.
inline double lj_potential(double r, const LJParams& p) {
    if (!(r > 0.0)) throw std::invalid_argument("lj_potential: r must be > 0");
    if (r >= p.r_cut) return 0.0;
    const double sr2 = (p.sigma * p.sigma) / (r * r);
    const double sr6 = sr2 * sr2 * sr2;
    return 4.0 * p.epsilon_lj * (sr6 * sr6 - sr6);
}

// Scalar force coefficient fpair = F/r, computed entirely from the squared
// distance: fpair = 24 eps [ 2 (sigma^2/r^2)^6 - (sigma^2/r^2)^3 ] / r^2 for
// r^2 < r_cut^2, else 0. The force on atom i from j is fpair * (r_i - r_j).
inline double lj_pair_force(double r_sq, const LJParams& p) {
    if (!(r_sq > 0.0)) throw std::invalid_argument("lj_pair_force: r_sq must be > 0");
    if (r_sq >= p.r_cut_sq()) return 0.0;
    const double sr2 = (p.sigma * p.sigma) / r_sq;
    const double sr6 = sr2 * sr2 * sr2;
    return 24.0 * p.epsilon_lj * (2.0 * sr6 * sr6 - sr6) / r_sq;
}

// ---------------------------------------------------------------------------
// Periodic atom box, neighbor lists, force sweep

using Vec3 = std::array<double, 3>;

struct AtomBox {
    std::vector<Vec3> positions;                    // inside [0, box_length)
    std::vector<std::vector<std::size_t>> neighbor_lists;
    double box_length = 0.0;

    std::size_t size() const noexcept { return positions.size(); }
};

// Minimum-image displacement a - b in a periodic cube.
inline Vec3 min_image_delta(const Vec3& a, const Vec3& b, double box_length) {
    Vec3 d;
    for (int k = 0; k < 3; ++k) {
        double delta = a[k] - b[k];
        delta -= box_length * std::round(delta / box_length);
        d[k] = delta;
    }
    return d;
}

struct NeighborListResult {
    std::vector<std::vector<std::size_t>> lists;
    bool all_pairs_fallback = false;
};

// Full neighbor lists from an all-pairs scan: j is listed for i iff their
// minimum-image distance is <= r_cut + skin (inclusive at the boundary).
// A box too small for the minimum-image convention (box_length <= 2*(r_cut+skin))
// falls back to listing every j != i and flags it.
inline NeighborListResult build_neighbor_lists(const std::vector<Vec3>& positions,
                                               double box_length, double r_cut, double skin) {
    if (!(box_length > 0.0))
        throw std::invalid_argument("build_neighbor_lists: box_length must be > 0");
    if (!(r_cut > 0.0)) throw std::invalid_argument("build_neighbor_lists: r_cut must be > 0");
    if (skin < 0.0) throw std::invalid_argument("build_neighbor_lists: skin must be >= 0");
    for (const Vec3& p : positions)
        for (int k = 0; k < 3; ++k)
            if (!(p[k] >= 0.0 && p[k] < box_length))
                throw std::invalid_argument("build_neighbor_lists: atom outside the box");

    const std::size_t n = positions.size();
    NeighborListResult result;
    result.lists.resize(n);

    const double reach = r_cut + skin;
    if (box_length <= 2.0 * reach) {
        result.all_pairs_fallback = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) result.lists[i].push_back(j);
        return result;
    }

    const double reach_sq = reach * reach;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = min_image_delta(positions[i], positions[j], box_length);
            const double r_sq = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            if (r_sq <= reach_sq) {
                result.lists[i].push_back(j);
                result.lists[j].push_back(i);
            }
        }
    }
    return result;
}

// Random non-overlapping configuration: uniform positions re-drawn until no
// pair sits closer than min_separation. Keeps pair forces bounded, the usual
// requirement on a synthetic starting configuration.
inline std::vector<Vec3> random_box_positions(std::size_t n, double box_length,
                                              double min_separation, std::mt19937_64& rng) {
    if (!(box_length > 0.0))
        throw std::invalid_argument("random_box_positions: box_length must be > 0");
    std::vector<Vec3> positions;
    positions.reserve(n);
    const double min_sq = min_separation * min_separation;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * (n + 1);
    while (positions.size() < n) {
        if (++attempts > max_attempts)
            throw std::runtime_error(
                "random_box_positions: cannot place " + std::to_string(n) + " atoms at spacing " +
                std::to_string(min_separation) + " in a box of " + std::to_string(box_length));
        Vec3 candidate;
        for (int k = 0; k < 3; ++k) candidate[k] = uniform_real(rng, 0.0, box_length);
        bool clear = true;
        for (const Vec3& p : positions) {
            const Vec3 d = min_image_delta(candidate, p, box_length);
            if (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] < min_sq) {
                clear = false;
                break;
            }
        }
        if (clear) positions.push_back(candidate);
    }
    return positions;
}

inline void validate_box(const AtomBox& box) {
    if (!(box.box_length > 0.0)) throw std::invalid_argument("AtomBox: box_length must be > 0");
    if (box.neighbor_lists.size() != box.positions.size())
        throw std::invalid_argument("AtomBox: neighbor list count != atom count");
    for (std::size_t i = 0; i < box.neighbor_lists.size(); ++i)
        for (std::size_t j : box.neighbor_lists[i])
            if (j >= box.positions.size() || j == i)
                throw std::invalid_argument("AtomBox: invalid neighbor index");
}

// Two-level force sweep: for every atom i, accumulate fpair(d_ij^2) * (r_i - r_j)
// over its neighbor list with minimum-image displacements. pair_eval is called
// once per directed (i, j) pair, with no cutoff branch here -- the callable
// owns the cutoff, so an MLP stand-in sees every listed pair including those
// beyond r_cut.
template <typename PairEval>
std::vector<Vec3> lj_force_sweep(const AtomBox& box, PairEval&& pair_eval) {
    validate_box(box);
    std::vector<Vec3> forces(box.size(), Vec3{0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < box.size(); ++i) {
        Vec3 total{0.0, 0.0, 0.0};
        for (std::size_t j : box.neighbor_lists[i]) {
            const Vec3 d = min_image_delta(box.positions[i], box.positions[j], box.box_length);
            const double r_sq = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            const double fpair = pair_eval(r_sq);
            total[0] += fpair * d[0];
            total[1] += fpair * d[1];
            total[2] += fpair * d[2];
        }
        forces[i] = total;
    }
    return forces;
}

inline std::vector<Vec3> lj_force_sweep(const AtomBox& box, const LJParams& p) {
    return lj_force_sweep(box, [&p](double r_sq) { return lj_pair_force(r_sq, p); });
}

}  // namespace surrokit
