#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "surrokit/kernels.hpp"
#include "surrokit/rng.hpp"

using namespace surrokit;

namespace {

// Closed-form oracle for quadratic roots, written independently of the
// solver: (-b +- sqrt(disc)) / 2a.
std::pair<double, double> closed_form_roots(double a, double b, double c) {
    const double disc = b * b - 4.0 * a * c;
    const double sq = std::sqrt(disc);
    return {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)};
}

double nearest_root(double x, double a, double b, double c) {
    const auto [r1, r2] = closed_form_roots(a, b, c);
    return std::fabs(x - r1) <= std::fabs(x - r2) ? r1 : r2;
}

}  // namespace

TEST_CASE("QuadraticEq validation and discriminant") {
    REQUIRE_THROWS_AS(QuadraticEq(0.0, 1.0, 1.0), std::invalid_argument);
    REQUIRE(QuadraticEq(1.0, 0.0, -4.0).has_real_root());
    REQUIRE_FALSE(QuadraticEq(1.0, 0.0, 1.0).has_real_root());
    REQUIRE(QuadraticEq(2.0, 3.0, 1.0).eval(0.0) == 1.0);
    REQUIRE(QuadraticEq(2.0, 3.0, 1.0).deriv(1.0) == 7.0);
}

TEST_CASE("newton_solve on x^2 - 4 from 3: first iterate 13/6, root 2") {
    const QuadraticEq eq(1.0, 0.0, -4.0);

    NewtonConfig one_step;
    one_step.epsilon = 1e-10;
    one_step.max_iters = 1;
    one_step.initial_guess = 3.0;
    const NewtonResult first = newton_solve(eq, one_step);
    REQUIRE_FALSE(first.converged);
    REQUIRE_THAT(first.root, Catch::Matchers::WithinAbs(13.0 / 6.0, 1e-15));

    NewtonConfig cfg;
    cfg.epsilon = 1e-10;
    cfg.max_iters = 100;
    cfg.initial_guess = 3.0;
    const NewtonResult r = newton_solve(eq, cfg);
    REQUIRE(r.converged);
    REQUIRE_THAT(r.root, Catch::Matchers::WithinAbs(2.0, 1e-10));
    REQUIRE(r.residual < 1e-6);
    REQUIRE(r.iterations <= 100);
}

TEST_CASE("newton_solve starting at the root converges in one iteration") {
    const QuadraticEq eq(1.0, 0.0, -4.0);
    NewtonConfig cfg;
    cfg.epsilon = 1e-10;
    cfg.max_iters = 100;
    cfg.initial_guess = 2.0;
    const NewtonResult r = newton_solve(eq, cfg);
    REQUIRE(r.converged);
    REQUIRE(r.iterations == 1);
    REQUIRE(r.root == 2.0);
}

TEST_CASE("newton_solve reports non-convergence for x^2 + 1") {
    const QuadraticEq eq(1.0, 0.0, 1.0);
    NewtonConfig cfg;
    cfg.epsilon = 1e-10;
    cfg.max_iters = 50;
    cfg.initial_guess = 1.0;
    const NewtonResult r = newton_solve(eq, cfg);
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.iterations == 50);
}

TEST_CASE("newton_solve survives a zero derivative at the start") {
    // x0 = 0 is the vertex of x^2 - 4: f'(0) = 0. The perturbation rule kicks in.
    const QuadraticEq eq(1.0, 0.0, -4.0);
    NewtonConfig cfg;
    cfg.epsilon = 1e-10;
    cfg.max_iters = 100;
    cfg.initial_guess = 0.0;
    const NewtonResult r = newton_solve(eq, cfg);
    REQUIRE(r.converged);
    REQUIRE_THAT(std::fabs(r.root), Catch::Matchers::WithinAbs(2.0, 1e-8));
}

TEST_CASE("newton_solve matches the closed-form oracle on 1000 random quadratics") {
    std::mt19937_64 rng(77);
    std::size_t converged = 0;
    for (int i = 0; i < 1000; ++i) {
        const double a = uniform_real(rng, 0.5, 5.0);
        const double b = uniform_real(rng, -10.0, 10.0);
        const double c = uniform_real(rng, -10.0, 10.0);
        const QuadraticEq eq(a, b, c);
        if (eq.discriminant() < 0.1) continue;
        NewtonConfig cfg;
        cfg.epsilon = 1e-10;
        cfg.max_iters = 100;
        cfg.initial_guess = uniform_real(rng, 1.0, 100.0);
        const NewtonResult r = newton_solve(eq, cfg);
        if (!r.converged) continue;
        ++converged;
        REQUIRE(std::fabs(eq.eval(r.root)) < 1e-6);
        REQUIRE_THAT(r.root,
                     Catch::Matchers::WithinAbs(nearest_root(r.root, a, b, c), 1e-8));
    }
    REQUIRE(converged > 600);
}

TEST_CASE("newton iterate error contracts quadratically once in the basin") {
    const QuadraticEq eq(1.0, 0.0, -4.0);
    double x = 3.0;
    std::vector<double> errors;
    for (int i = 0; i < 8; ++i) {
        errors.push_back(std::fabs(x - 2.0));
        x = x - eq.eval(x) / eq.deriv(x);
    }
    for (std::size_t i = 2; i < errors.size(); ++i) {
        if (errors[i] == 0.0) break;
        REQUIRE(errors[i] < errors[i - 1]);                    // monotone after iterate 1
        REQUIRE(errors[i] <= 1.0 * errors[i - 1] * errors[i - 1]);  // e_{n+1} <= C e_n^2
    }
}

// ---------------------------------------------------------------------------
// Lennard-Jones

TEST_CASE("LJParams defaults to the WCA cutoff") {
    const LJParams p;
    REQUIRE(p.epsilon_lj == 1.0);
    REQUIRE(p.sigma == 1.0);
    REQUIRE(p.r_cut == std::pow(2.0, 1.0 / 6.0));
    const LJParams scaled(2.0, 3.0);
    REQUIRE(scaled.r_cut == std::pow(2.0, 1.0 / 6.0) * 3.0);
    REQUIRE_THROWS_AS(LJParams(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("lj_potential: zero at sigma, zero beyond cutoff, 0.9 sigma value") {
    const LJParams p;
    REQUIRE_THAT(lj_potential(1.0, p), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE(lj_potential(p.r_cut, p) == 0.0);
    REQUIRE(lj_potential(p.r_cut + 0.3, p) == 0.0);
    const double expected = 4.0 * (std::pow(0.9, -12.0) - std::pow(0.9, -6.0));
    REQUIRE_THAT(lj_potential(0.9, p), Catch::Matchers::WithinRel(expected, 1e-12));
    REQUIRE_THROWS_AS(lj_potential(0.0, p), std::invalid_argument);
    REQUIRE_THROWS_AS(lj_potential(-1.0, p), std::invalid_argument);
}

TEST_CASE("lj_pair_force: 24 at sigma, zero and continuous at the cutoff") {
    const LJParams p;
    REQUIRE(lj_pair_force(1.0, p) == 24.0);
    REQUIRE(lj_pair_force(p.r_cut_sq(), p) == 0.0);
    REQUIRE(lj_pair_force(p.r_cut_sq() * 1.0001, p) == 0.0);
    // one-sided limit from below vanishes too: the WCA cutoff sits at the minimum
    const double just_inside = p.r_cut_sq() * (1.0 - 1e-9);
    REQUIRE(std::fabs(lj_pair_force(just_inside, p)) < 1e-6);
    const double closer = p.r_cut_sq() * (1.0 - 1e-12);
    REQUIRE(std::fabs(lj_pair_force(closer, p)) < 1e-9);
    REQUIRE_THROWS_AS(lj_pair_force(0.0, p), std::invalid_argument);
}

TEST_CASE("lj_pair_force scales with epsilon and sigma") {
    const LJParams p(2.5, 1.7);
    const double r_sq = 1.7 * 1.7;  // r = sigma
    REQUIRE_THAT(lj_pair_force(r_sq, p),
                 Catch::Matchers::WithinRel(24.0 * 2.5 / (1.7 * 1.7), 1e-13));
}

// ---------------------------------------------------------------------------
// Neighbor lists and force sweep

namespace {

AtomBox make_box(std::vector<Vec3> positions, double box_length, const LJParams& p,
                 double skin = 0.0) {
    AtomBox box;
    box.positions = std::move(positions);
    box.box_length = box_length;
    box.neighbor_lists = build_neighbor_lists(box.positions, box_length, p.r_cut, skin).lists;
    return box;
}

std::vector<Vec3> random_positions(std::size_t n, double box_length, std::mt19937_64& rng) {
    std::vector<Vec3> pos(n);
    for (auto& v : pos)
        for (int k = 0; k < 3; ++k) v[k] = uniform_real(rng, 0.0, box_length);
    return pos;
}

}  // namespace

TEST_CASE("neighbor lists: distant pair is empty, boundary distance included") {
    const LJParams p;
    const double L = 20.0;
    {
        const auto r = build_neighbor_lists({{1.0, 1.0, 1.0}, {9.0, 9.0, 9.0}}, L, p.r_cut, 0.5);
        REQUIRE_FALSE(r.all_pairs_fallback);
        REQUIRE(r.lists[0].empty());
        REQUIRE(r.lists[1].empty());
    }
    {
        // exactly at r_cut with zero skin: included (<= comparison)
        const auto r =
            build_neighbor_lists({{1.0, 1.0, 1.0}, {1.0 + p.r_cut, 1.0, 1.0}}, L, p.r_cut, 0.0);
        REQUIRE(r.lists[0] == std::vector<std::size_t>{1});
        REQUIRE(r.lists[1] == std::vector<std::size_t>{0});
    }
}

TEST_CASE("neighbor lists fall back to all-pairs in a tiny box") {
    const LJParams p;
    const double L = 2.0;  // <= 2 * (r_cut + skin)
    const auto r = build_neighbor_lists({{0.1, 0.1, 0.1}, {1.0, 1.0, 1.0}, {1.9, 0.2, 0.5}}, L,
                                        p.r_cut, 0.0);
    REQUIRE(r.all_pairs_fallback);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(r.lists[i].size() == 2);
}

TEST_CASE("neighbor lists equal the brute-force oracle on random boxes") {
    const LJParams p;
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const double L = 8.0;
        const double skin = 0.3;
        const auto pos = random_positions(50, L, rng);
        const auto built = build_neighbor_lists(pos, L, p.r_cut, skin);
        REQUIRE_FALSE(built.all_pairs_fallback);
        const double reach_sq = (p.r_cut + skin) * (p.r_cut + skin);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            std::set<std::size_t> expected;
            for (std::size_t j = 0; j < pos.size(); ++j) {
                if (j == i) continue;
                const Vec3 d = min_image_delta(pos[i], pos[j], L);
                if (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= reach_sq) expected.insert(j);
            }
            REQUIRE(std::set<std::size_t>(built.lists[i].begin(), built.lists[i].end()) ==
                    expected);
        }
    }
}

TEST_CASE("neighbor lists reject atoms outside the box") {
    const LJParams p;
    REQUIRE_THROWS_AS(build_neighbor_lists({{-0.1, 1.0, 1.0}}, 10.0, p.r_cut, 0.0),
                      std::invalid_argument);
}

TEST_CASE("force sweep: two atoms at the cutoff separation feel nothing") {
    const LJParams p;
    const AtomBox box = make_box({{1.0, 1.0, 1.0}, {1.0 + p.r_cut, 1.0, 1.0}}, 10.0, p, 0.5);
    const auto forces = lj_force_sweep(box, p);
    for (const Vec3& f : forces)
        for (double c : f) REQUIRE(c == 0.0);
}

TEST_CASE("force sweep: two atoms at sigma repel with fpair 24 along x") {
    const LJParams p;
    const AtomBox box = make_box({{1.0, 1.0, 1.0}, {2.0, 1.0, 1.0}}, 10.0, p, 0.5);
    const auto forces = lj_force_sweep(box, p);
    REQUIRE_THAT(forces[0][0], Catch::Matchers::WithinAbs(-24.0, 1e-12));
    REQUIRE_THAT(forces[1][0], Catch::Matchers::WithinAbs(24.0, 1e-12));
    REQUIRE(forces[0][1] == 0.0);
    REQUIRE(forces[0][2] == 0.0);
    REQUIRE(forces[1][0] == -forces[0][0]);
}

TEST_CASE("force sweep: equilateral triangle has zero net force") {
    const LJParams p;
    const double s = 1.0;  // side below cutoff: all pairs interact
    const AtomBox box = make_box({{4.0, 4.0, 4.0},
                                  {4.0 + s, 4.0, 4.0},
                                  {4.0 + 0.5 * s, 4.0 + s * std::sqrt(3.0) / 2.0, 4.0}},
                                 10.0, p, 0.5);
    const auto forces = lj_force_sweep(box, p);
    for (int k = 0; k < 3; ++k) {
        double net = 0.0;
        for (const Vec3& f : forces) net += f[k];
        REQUIRE_THAT(net, Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("force sweep momentum conservation and pair antisymmetry on random boxes") {
    // Non-overlapping configurations: a pair at r -> 0 would make the force
    // scale blow past any absolute cancellation tolerance.
    const LJParams p;
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const double L = 7.0;
        AtomBox box;
        box.positions = random_box_positions(40, L, 0.85, rng);
        box.box_length = L;
        box.neighbor_lists = build_neighbor_lists(box.positions, L, p.r_cut, 0.4).lists;
        const auto forces = lj_force_sweep(box, p);
        for (int k = 0; k < 3; ++k) {
            double net = 0.0;
            for (const Vec3& f : forces) net += f[k];
            REQUIRE_THAT(net, Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
        // directed-pair antisymmetry
        for (std::size_t i = 0; i < box.size(); ++i)
            for (std::size_t j : box.neighbor_lists[i]) {
                const Vec3 dij = min_image_delta(box.positions[i], box.positions[j], L);
                const Vec3 dji = min_image_delta(box.positions[j], box.positions[i], L);
                const double rij = dij[0] * dij[0] + dij[1] * dij[1] + dij[2] * dij[2];
                const double fp = lj_pair_force(rij, p);
                for (int k = 0; k < 3; ++k)
                    REQUIRE(fp * dij[k] == -(fp * dji[k]));
            }
    }
}

TEST_CASE("neighbor-list sweep equals all-pairs sweep") {
    const LJParams p;
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        const double L = 8.5;
        AtomBox listed;
        listed.positions = random_positions(50, L, rng);
        listed.box_length = L;
        listed.neighbor_lists =
            build_neighbor_lists(listed.positions, L, p.r_cut, 0.3).lists;

        AtomBox all_pairs;
        all_pairs.positions = listed.positions;
        all_pairs.box_length = L;
        all_pairs.neighbor_lists.resize(50);
        for (std::size_t i = 0; i < 50; ++i)
            for (std::size_t j = 0; j < 50; ++j)
                if (j != i) all_pairs.neighbor_lists[i].push_back(j);

        const auto fa = lj_force_sweep(listed, p);
        const auto fb = lj_force_sweep(all_pairs, p);
        for (std::size_t i = 0; i < 50; ++i)
            for (int k = 0; k < 3; ++k)
                REQUIRE_THAT(fa[i][k], Catch::Matchers::WithinAbs(fb[i][k], 1e-12));
    }
}

TEST_CASE("sweep calls the pair evaluator on every listed pair, cutoff included") {
    const LJParams p;
    std::mt19937_64 rng(55);
    AtomBox box;
    box.box_length = 6.0;
    box.positions = random_positions(30, box.box_length, rng);
    box.neighbor_lists =
        build_neighbor_lists(box.positions, box.box_length, p.r_cut, 0.6).lists;

    std::size_t listed_pairs = 0;
    for (const auto& l : box.neighbor_lists) listed_pairs += l.size();

    std::size_t calls = 0;
    std::size_t beyond_cutoff_calls = 0;
    lj_force_sweep(box, [&](double r_sq) {
        ++calls;
        if (r_sq >= p.r_cut_sq()) ++beyond_cutoff_calls;
        return lj_pair_force(r_sq, p);
    });
    REQUIRE(calls == listed_pairs);
    // the 0.6-sigma skin shell guarantees some listed pairs beyond the cutoff
    REQUIRE(beyond_cutoff_calls > 0);
}

TEST_CASE("sweep validates the box") {
    AtomBox box;
    box.box_length = 5.0;
    box.positions = {{1.0, 1.0, 1.0}};
    box.neighbor_lists = {{0}};  // self-neighbor
    const LJParams p;
    REQUIRE_THROWS_AS(lj_force_sweep(box, p), std::invalid_argument);
}
