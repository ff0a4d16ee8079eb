#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "surrokit/dataset.hpp"
#include "surrokit/error.hpp"
#include "surrokit/kernels.hpp"
#include "surrokit/matrix.hpp"
#include "surrokit/mlp.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/text_io.hpp"
#include "surrokit/trainer.hpp"

namespace surrokit {

using KernelFn = std::function<std::vector<double>(std::span<const double>)>;

// A replaceable code region: fixed input/output arities around a pure
// function. Referential transparency of `original` is assumed; dataset
// capture and shadow comparison are meaningless without it.
struct RegionSpec {
    std::string name;
    std::size_t input_arity = 0;
    std::size_t output_arity = 0;
    KernelFn original;
    std::string description;
};

// (a, b, c) -> the root newton_solve reaches from cfg.initial_guess.
inline RegionSpec make_newton_region(const NewtonConfig& cfg) {
    cfg.validate();
    RegionSpec region;
    region.name = "newton";
    region.input_arity = 3;
    region.output_arity = 1;
    region.description = "quadratic Newton-Raphson root from a fixed initial guess";
    region.original = [cfg](std::span<const double> in) {
        QuadraticEq eq(in[0], in[1], in[2]);
        return std::vector<double>{newton_solve(eq, cfg).root};
    };
    return region;
}

// d^2 -> fpair with the cutoff folded in.
inline RegionSpec make_lj_region(const LJParams& params) {
    RegionSpec region;
    region.name = "lj";
    region.input_arity = 1;
    region.output_arity = 1;
    region.description = "Lennard-Jones pair force coefficient from squared distance";
    region.original = [params](std::span<const double> in) {
        return std::vector<double>{lj_pair_force(in[0], params)};
    };
    return region;
}

enum class BindingMode { Original, Surrogate, Shadow };

inline std::string_view binding_mode_name(BindingMode mode) {
    switch (mode) {
        case BindingMode::Original: return "original";
        case BindingMode::Surrogate: return "surrogate";
        case BindingMode::Shadow: return "shadow";
    }
    return "?";
}

// Binds a region to a trained model behind one callable. Original and
// Surrogate calls are pure and safe to run concurrently on a shared binding;
// Shadow mode appends to the deviation log and is single-threaded by design.
class SurrogateBinding {
public:
    SurrogateBinding(RegionSpec region, MlpModel model, BindingMode mode)
        : region_(std::move(region)), model_(std::move(model)), mode_(mode) {
        model_.check_consistent();
        if (model_.topology.input_size() != region_.input_arity ||
            model_.topology.output_size() != region_.output_arity)
            throw std::invalid_argument("SurrogateBinding: model arities (" +
                                        std::to_string(model_.topology.input_size()) + "->" +
                                        std::to_string(model_.topology.output_size()) +
                                        ") do not match region '" + region_.name + "'");
    }

    const RegionSpec& region() const noexcept { return region_; }
    const MlpModel& model() const noexcept { return model_; }
    BindingMode mode() const noexcept { return mode_; }

    std::vector<double> call(std::span<const double> input) const {
        if (input.size() != region_.input_arity)
            throw std::invalid_argument("SurrogateBinding::call: arity mismatch");
        switch (mode_) {
            case BindingMode::Original:
                return region_.original(input);
            case BindingMode::Surrogate:
                return predict(input);
            case BindingMode::Shadow: {
                std::vector<double> exact = region_.original(input);
                const std::vector<double> approx = predict(input);
                double dev = 0.0;
                for (std::size_t i = 0; i < exact.size(); ++i)
                    dev = std::max(dev, std::fabs(exact[i] - approx[i]));
                shadow_deviations_.push_back(dev);
                return exact;  // shadow never changes the returned value
            }
        }
        throw std::logic_error("SurrogateBinding::call: bad mode");
    }

    // normalize -> forward -> denormalize, on raw (kernel-unit) values.
    std::vector<double> predict(std::span<const double> input) const {
        std::vector<double> in(input.begin(), input.end());
        model_.input_norm.normalize_vector(in);
        Matrix2D batch(1, in.size());
        for (std::size_t j = 0; j < in.size(); ++j) batch(0, j) = in[j];
        const Matrix2D out = forward(model_, batch);
        std::vector<double> result(out.data(), out.data() + out.cols());
        model_.output_norm.denormalize_vector(result);
        return result;
    }

    // One batched forward over raw inputs (rows); the surrogate's natural
    // execution shape, and the source of its speed on large batches.
    Matrix2D predict_batch(const Matrix2D& raw_inputs) const {
        Matrix2D in = raw_inputs;
        for (std::size_t i = 0; i < in.rows(); ++i)
            for (std::size_t j = 0; j < in.cols(); ++j)
                in(i, j) = model_.input_norm.normalize(j, in(i, j));
        Matrix2D out = forward(model_, in);
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.cols(); ++j)
                out(i, j) = model_.output_norm.denormalize(j, out(i, j));
        return out;
    }

    const std::vector<double>& shadow_deviations() const noexcept { return shadow_deviations_; }
    void clear_shadow_log() { shadow_deviations_.clear(); }

private:
    RegionSpec region_;
    MlpModel model_;
    BindingMode mode_;
    mutable std::vector<double> shadow_deviations_;
};

// Per-pair force evaluator backed by the binding's model; drop-in for the
// exact pair kernel in lj_force_sweep. Holds reusable scratch, so each
// instance is single-threaded.
class LjSurrogatePairEval {
public:
    explicit LjSurrogatePairEval(const SurrogateBinding& binding) : binding_(&binding) {
        if (binding.region().input_arity != 1 || binding.region().output_arity != 1)
            throw std::invalid_argument("LjSurrogatePairEval: needs a 1->1 region");
    }

    double operator()(double r_sq) {
        const MlpModel& m = binding_->model();
        const double in = m.input_norm.normalize(0, r_sq);
        double out = 0.0;
        forward_one(m, &in, &out, scratch_);
        return m.output_norm.denormalize(0, out);
    }

private:
    const SurrogateBinding* binding_;
    MlpWorkspace scratch_;
};

// Accuracy/error/timing summary for one (region, model) pairing over one
// input batch.
struct EvalReport {
    std::string region;
    std::string topology;
    std::size_t n_calls = 0;
    double accuracy = 0.0;
    double mean_abs_err = 0.0;
    double t_original = 0.0;   // seconds for the whole batch
    double t_surrogate = 0.0;
    double speedup = 0.0;      // t_original / t_surrogate
    std::size_t flops_per_call = 0;
};

// Median-of-repetitions wall time of fn(), monotonic clock. Workloads too
// small for the clock get an inner repeat loop, scaled until one measurement
// clears the resolution floor.
template <typename F>
double time_median_seconds(F&& fn, int repetitions, std::ostream* warn = nullptr) {
    using clock = std::chrono::steady_clock;
    if (repetitions < 3) {
        if (warn) *warn << "timing: repetitions clamped up to 3\n";
        repetitions = 3;
    }
    constexpr double kFloorSeconds = 50e-6;
    int inner = 1;
    for (;;) {
        const auto t0 = clock::now();
        for (int i = 0; i < inner; ++i) fn();
        const double dt = std::chrono::duration<double>(clock::now() - t0).count();
        if (dt >= kFloorSeconds || inner >= (1 << 20)) break;
        inner *= 2;
    }
    if (inner > 1 && warn)
        *warn << "timing: workload below clock resolution, batching " << inner
              << " runs per sample\n";
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r) {
        const auto t0 = clock::now();
        for (int i = 0; i < inner; ++i) fn();
        times.push_back(std::chrono::duration<double>(clock::now() - t0).count() /
                        static_cast<double>(inner));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

template <typename OriginalRowFn>
Matrix2D original_row_all(OriginalRowFn&& original_row, const Matrix2D& inputs) {
    Matrix2D out;
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
        const std::vector<double> row_out =
            original_row(std::span<const double>(inputs.row(i), inputs.cols()));
        if (i == 0) out = Matrix2D(inputs.rows(), row_out.size());
        for (std::size_t j = 0; j < row_out.size(); ++j) out(i, j) = row_out[j];
    }
    return out;
}

// Times an exact per-row kernel against a batched approximation over the
// same inputs, and scores the approximation against the kernel's outputs.
// The kernel's outputs are the ground truth here: the surrogate is graded on
// mimicking the code region, not on any analytic ideal.
template <typename OriginalRowFn, typename ApproxBatchFn>
EvalReport bench_callables(const std::string& region_name, const std::string& topology,
                           std::size_t flops_per_call, OriginalRowFn&& original_row,
                           ApproxBatchFn&& approx_batch, const Matrix2D& inputs,
                           int repetitions, double tolerance_rel = 0.05,
                           double t_floor = kAccuracyTruthFloor) {
    if (inputs.rows() == 0) throw std::invalid_argument("bench: empty input batch");

    Matrix2D original_out;
    const double t_orig = time_median_seconds(
        [&] { original_out = original_row_all(original_row, inputs); }, repetitions, &std::cerr);
    Matrix2D approx_out;
    const double t_approx =
        time_median_seconds([&] { approx_out = approx_batch(inputs); }, repetitions, &std::cerr);

    if (!original_out.same_shape(approx_out))
        throw std::invalid_argument("bench: original and approximation disagree on shape");

    EvalReport report;
    report.region = region_name;
    report.topology = topology;
    report.n_calls = inputs.rows();
    report.flops_per_call = flops_per_call;
    report.t_original = t_orig;
    report.t_surrogate = t_approx;
    report.speedup = t_orig / t_approx;

    std::size_t hits = 0;
    double abs_err = 0.0;
    for (std::size_t i = 0; i < original_out.rows(); ++i) {
        bool hit = true;
        for (std::size_t j = 0; j < original_out.cols(); ++j) {
            const double truth = original_out(i, j);
            const double err = std::fabs(approx_out(i, j) - truth);
            abs_err += err;
            if (err > tolerance_rel * std::max(std::fabs(truth), t_floor)) hit = false;
        }
        if (hit) ++hits;
    }
    report.accuracy = static_cast<double>(hits) / static_cast<double>(original_out.rows());
    report.mean_abs_err = abs_err / static_cast<double>(original_out.size());
    return report;
}

// Times the binding's original kernel (independent per-row solves) against
// its surrogate (one batched forward pass) over the same inputs.
inline EvalReport bench_region(const SurrogateBinding& binding, const Matrix2D& inputs,
                               int repetitions, double tolerance_rel = 0.05) {
    if (inputs.cols() != binding.region().input_arity)
        throw std::invalid_argument("bench_region: input arity mismatch");
    return bench_callables(
        binding.region().name, binding.model().topology.to_string(),
        forward_flops(binding.model().topology),
        [&](std::span<const double> row) { return binding.region().original(row); },
        [&](const Matrix2D& batch) { return binding.predict_batch(batch); }, inputs, repetitions,
        tolerance_rel);
}

// ---------------------------------------------------------------------------
// Topology sweep (the Table-2/3 experiment shape)

struct SweepEntry {
    Topology topology;
    TrainConfig config;
    double train_seconds = 0.0;
    double final_l2 = 0.0;       // validation l2 after training
    EvalReport report;
    MlpModel model;
    std::string error;           // empty on success

    bool failed() const noexcept { return !error.empty(); }
};

struct SweepJob {
    Topology topology;
    TrainConfig config;
};

// Trains each topology independently (fresh init, derived seed), then scores
// and benches it against the region. A failed training is recorded and the
// sweep moves on.
inline std::vector<SweepEntry> sweep_topologies(const RegionSpec& region,
                                                const Dataset& train_set, const Dataset& val_set,
                                                const std::vector<SweepJob>& jobs,
                                                const Matrix2D& bench_inputs,
                                                std::uint64_t rng_seed, int repetitions = 5,
                                                double tolerance_rel = 0.05) {
    std::vector<SweepEntry> entries;
    entries.reserve(jobs.size());
    for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
        SweepEntry entry;
        entry.topology = jobs[idx].topology;
        entry.config = jobs[idx].config;
        entry.config.rng_seed = derive_seed(rng_seed, idx);
        try {
            const auto t0 = std::chrono::steady_clock::now();
            MlpModel model = init_model(entry.topology, derive_seed(entry.config.rng_seed, 0x171));
            TrainResult trained = train(std::move(model), train_set, val_set, entry.config,
                                        tolerance_rel);
            entry.train_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            entry.final_l2 = trained.trace.rows.back().val_l2;
            entry.model = std::move(trained.model);
            SurrogateBinding binding(region, entry.model, BindingMode::Surrogate);
            entry.report = bench_region(binding, bench_inputs, repetitions, tolerance_rel);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

// Table-2/3-shaped CSV. Failed rows keep the topology and carry "nan" metrics.
inline void write_sweep_csv(const std::vector<SweepEntry>& entries, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "topology,train_seconds,steps,l2_loss,eval_seconds,accuracy,mean_abs_err,speedup,"
          "flops_per_call\n";
    for (const SweepEntry& e : entries) {
        if (e.failed()) {
            os << e.topology.to_string() << ",nan," << e.config.max_steps
               << ",nan,nan,nan,nan,nan,nan\n";
            continue;
        }
        os << e.topology.to_string() << ',' << format_double(e.train_seconds) << ','
           << e.config.max_steps << ',' << format_double(e.final_l2) << ','
           << format_double(e.report.t_surrogate) << ',' << format_double(e.report.accuracy)
           << ',' << format_double(e.report.mean_abs_err) << ','
           << format_double(e.report.speedup) << ',' << e.report.flops_per_call << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace surrokit
