#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "surrokit/datagen.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/surrogate.hpp"
#include "surrokit/trainer.hpp"

using namespace surrokit;

namespace {

MlpModel identity_like_model(double w, double b) {
    Topology t = parse_topology("1x1");
    MlpModel m = init_model(t, 1);
    m.weights[0](0, 0) = w;
    m.biases[0][0] = b;
    return m;
}

Matrix2D random_inputs(std::size_t n, std::size_t d, std::mt19937_64& rng, double lo, double hi) {
    Matrix2D m(n, d);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = uniform_real(rng, lo, hi);
    return m;
}

}  // namespace

TEST_CASE("binding rejects arity mismatch") {
    const RegionSpec region = make_newton_region(NewtonConfig{1e-10, 100, 10.0});
    REQUIRE_THROWS_AS(
        SurrogateBinding(region, init_model(parse_topology("1x1"), 2), BindingMode::Surrogate),
        std::invalid_argument);
}

TEST_CASE("original mode: newton region returns the solver root") {
    const RegionSpec region = make_newton_region(NewtonConfig{1e-10, 100, 3.0});
    SurrogateBinding binding(region, init_model(parse_topology("3x5x1"), 3),
                             BindingMode::Original);
    const std::vector<double> in{1.0, 0.0, -4.0};
    const auto out = binding.call(in);
    REQUIRE_THAT(out[0], Catch::Matchers::WithinAbs(2.0, 1e-10));
    REQUIRE_THROWS_AS(binding.call(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("surrogate mode returns the memorized point") {
    // A 1x1 model trained offline to represent y = 24 at x = 1 (trivially, w=0 b=24).
    SurrogateBinding binding(make_lj_region(LJParams{}), identity_like_model(0.0, 24.0),
                             BindingMode::Surrogate);
    const auto out = binding.call(std::vector<double>{1.0});
    REQUIRE_THAT(out[0], Catch::Matchers::WithinAbs(24.0, 1e-12));
}

TEST_CASE("shadow mode returns bit-identical originals and logs deviation") {
    const RegionSpec region = make_lj_region(LJParams{});
    SurrogateBinding shadow(region, identity_like_model(0.0, 1.0), BindingMode::Shadow);
    SurrogateBinding original(region, identity_like_model(0.0, 1.0), BindingMode::Original);

    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> in{uniform_real(rng, 0.5, 2.0)};
        const auto a = shadow.call(in);
        const auto b = original.call(in);
        REQUIRE(a[0] == b[0]);  // bitwise
    }
    REQUIRE(shadow.shadow_deviations().size() == 200);
    for (double d : shadow.shadow_deviations()) REQUIRE(d >= 0.0);
    REQUIRE(original.shadow_deviations().empty());
}

TEST_CASE("surrogate batched and looped predictions agree bitwise") {
    Topology t = parse_topology("3x5x3x1");
    t.hidden_activation = ActivationKind::Tanh;
    MlpModel m = init_model(t, 17);
    std::mt19937_64 rng(18);
    for (auto& b : m.biases)
        for (auto& v : b) v = uniform_real(rng, -0.3, 0.3);
    m.input_norm.mins = {0.5, -10.0, -10.0};
    m.input_norm.maxs = {5.0, 10.0, 10.0};
    m.output_norm.mins = {-7.0};
    m.output_norm.maxs = {21.0};

    SurrogateBinding binding(make_newton_region(NewtonConfig{1e-10, 100, 5.0}), m,
                             BindingMode::Surrogate);
    const Matrix2D inputs = random_inputs(64, 3, rng, -3.0, 3.0);
    const Matrix2D batched = binding.predict_batch(inputs);
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
        const auto one =
            binding.call(std::span<const double>(inputs.row(i), inputs.cols()));
        REQUIRE(one[0] == batched(i, 0));
    }
}

TEST_CASE("lj surrogate pair evaluator matches binding.call") {
    Topology t = parse_topology("1x3x1");
    t.hidden_activation = ActivationKind::ReluTanhCombo;
    MlpModel m = init_model(t, 23);
    m.input_norm.mins = {0.8};
    m.input_norm.maxs = {1.9};
    m.output_norm.mins = {0.0};
    m.output_norm.maxs = {160.0};
    SurrogateBinding binding(make_lj_region(LJParams{}), m, BindingMode::Surrogate);
    LjSurrogatePairEval pair_eval(binding);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        const double r_sq = uniform_real(rng, 0.81, 1.9);
        const auto via_call = binding.call(std::vector<double>{r_sq});
        REQUIRE(pair_eval(r_sq) == via_call[0]);
    }
}

TEST_CASE("report self-consistency: speedup equals the timing ratio") {
    const RegionSpec region = make_lj_region(LJParams{});
    SurrogateBinding binding(region, identity_like_model(0.0, 0.0), BindingMode::Surrogate);
    std::mt19937_64 rng(31);
    const Matrix2D inputs = random_inputs(512, 1, rng, 0.81, 1.8);
    const EvalReport report = bench_region(binding, inputs, 3);
    REQUIRE(report.n_calls == 512);
    REQUIRE(report.speedup > 0.0);
    REQUIRE_THAT(report.speedup,
                 Catch::Matchers::WithinAbs(report.t_original / report.t_surrogate, 1e-12));
    REQUIRE(report.flops_per_call == forward_flops(parse_topology("1x1")));
}

TEST_CASE("self-comparison benchmark: original vs original stays near speedup 1") {
    // Wrap the same kernel on both sides; only harness overhead differs.
    const RegionSpec region = make_newton_region(NewtonConfig{1e-10, 100, 37.0});
    std::mt19937_64 rng(37);
    Matrix2D inputs(2000, 3);
    std::size_t row = 0;
    while (row < inputs.rows()) {
        const double a = uniform_real(rng, 0.5, 5.0);
        const double b = uniform_real(rng, -10.0, 10.0);
        const double c = uniform_real(rng, -10.0, 10.0);
        if (b * b - 4.0 * a * c < 0.1) continue;
        inputs(row, 0) = a;
        inputs(row, 1) = b;
        inputs(row, 2) = c;
        ++row;
    }
    const EvalReport report = bench_callables(
        region.name, "self", 0,
        [&](std::span<const double> in) { return region.original(in); },
        [&](const Matrix2D& batch) { return original_row_all(region.original, batch); }, inputs,
        5);
    REQUIRE(report.accuracy == 1.0);
    REQUIRE(report.mean_abs_err == 0.0);
    // generous unit-test band; the acceptance suite asserts the spec band
    REQUIRE(report.speedup > 0.5);
    REQUIRE(report.speedup < 2.0);
}

TEST_CASE("sweep trains every topology and tolerates failures") {
    const LJParams p;
    const auto [lo, hi] = default_lj_r_sq_range(p);
    Dataset raw = gen_lj_dataset(800, p, lo, hi, 41);
    const SplitResult sr = split(raw, 0.9, 42);

    TrainConfig base;
    base.learning_rate = 0.01;
    base.max_steps = 150;
    base.batch_size = 64;
    base.log_every = 50;

    std::vector<SweepJob> jobs;
    for (const char* topo : {"1x3x1", "1x5x1"}) {
        SweepJob job;
        job.topology = parse_topology(topo);
        job.topology.hidden_activation = ActivationKind::ReluTanhCombo;
        job.config = base;
        jobs.push_back(job);
    }
    std::mt19937_64 rng(43);
    const Matrix2D bench_inputs = random_inputs(256, 1, rng, lo, hi);
    const RegionSpec region = make_lj_region(p);
    const auto entries =
        sweep_topologies(region, sr.train, sr.validation, jobs, bench_inputs, 44, 3);
    REQUIRE(entries.size() == 2);
    for (const auto& e : entries) {
        REQUIRE_FALSE(e.failed());
        REQUIRE(e.report.speedup > 0.0);
        REQUIRE(e.final_l2 >= 0.0);
        REQUIRE(e.train_seconds > 0.0);
    }
    // degenerate sweep of one topology behaves like train + bench composed
    const auto single = sweep_topologies(region, sr.train, sr.validation, {jobs[0]},
                                         bench_inputs, 44, 3);
    REQUIRE(single.size() == 1);
    REQUIRE_FALSE(single[0].failed());

    // a failing job is recorded, the sweep continues
    std::vector<SweepJob> with_bad = jobs;
    with_bad[0].config.learning_rate = 1e18;
    const auto mixed = sweep_topologies(region, sr.train, sr.validation, with_bad,
                                        bench_inputs, 44, 3);
    REQUIRE(mixed.size() == 2);
    REQUIRE(mixed[0].failed());
    REQUIRE_FALSE(mixed[1].failed());
}
