#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "surrokit/dataset.hpp"
#include "surrokit/error.hpp"
#include "surrokit/matrix.hpp"
#include "surrokit/mlp.hpp"
#include "surrokit/rng.hpp"

namespace surrokit {

struct TraceRow {
    std::size_t step = 0;
    double train_l2 = 0.0;
    double val_l2 = 0.0;
    double val_accuracy = 0.0;
    double val_abs_err = 0.0;
    double wall_seconds = 0.0;
};

// Loss/metric curve across training: a step-0 baseline, one row per
// log_every steps, and the final step.
struct TrainTrace {
    std::vector<TraceRow> rows;
};

inline void write_trace_csv(const TrainTrace& trace, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "step,train_l2,val_l2,val_accuracy,val_abs_err,wall_seconds\n";
    for (const TraceRow& r : trace.rows)
        os << r.step << ',' << format_double(r.train_l2) << ',' << format_double(r.val_l2)
           << ',' << format_double(r.val_accuracy) << ',' << format_double(r.val_abs_err)
           << ',' << format_double(r.wall_seconds) << '\n';
    if (!os) throw std::runtime_error("write failed: " + path);
}

struct Metrics {
    double l2 = 0.0;            // on normalized values, comparable to training loss
    double accuracy = 0.0;      // relative-tolerance hit rate, denormalized units
    double mean_abs_err = 0.0;  // denormalized units
};

namespace detail {

inline Matrix2D dataset_inputs(const Dataset& d) {
    Matrix2D m(d.size(), d.input_arity);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.input_arity; ++j) m(i, j) = d.samples[i].inputs[j];
    return m;
}

inline Matrix2D dataset_outputs(const Dataset& d) {
    Matrix2D m(d.size(), d.output_arity);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.output_arity; ++j) m(i, j) = d.samples[i].outputs[j];
    return m;
}

}  // namespace detail

// Default floor under |truth| in the relative-tolerance accuracy test, so
// near-zero ground truth does not demand infinite precision.
inline constexpr double kAccuracyTruthFloor = 1e-3;

// Accuracy: fraction of samples whose every output component satisfies
// |pred - truth| <= tolerance_rel * max(|truth|, t_floor), in denormalized
// units. mean_abs_err: mean over samples and components, denormalized.
// l2: normalized units (the training objective's scale).
inline Metrics eval_metrics(const MlpModel& model, const Dataset& dataset, double tolerance_rel,
                            double t_floor = kAccuracyTruthFloor) {
    if (dataset.size() == 0) throw std::invalid_argument("eval_metrics: empty dataset");
    if (dataset.input_arity != model.topology.input_size() ||
        dataset.output_arity != model.topology.output_size())
        throw std::invalid_argument("eval_metrics: dataset arities do not match model");

    // The model always sees inputs in its own normalized frame. A normalized
    // dataset is already there; a raw one is mapped through the model's specs.
    Matrix2D inputs = detail::dataset_inputs(dataset);
    Matrix2D targets_norm = detail::dataset_outputs(dataset);
    if (!dataset.normalized) {
        for (std::size_t i = 0; i < inputs.rows(); ++i)
            for (std::size_t j = 0; j < inputs.cols(); ++j)
                inputs(i, j) = model.input_norm.normalize(j, inputs(i, j));
        for (std::size_t i = 0; i < targets_norm.rows(); ++i)
            for (std::size_t j = 0; j < targets_norm.cols(); ++j)
                targets_norm(i, j) = model.output_norm.normalize(j, targets_norm(i, j));
    }
    const Matrix2D pred = forward(model, inputs);

    Metrics m;
    m.l2 = l2_loss(pred, targets_norm);

    const NormSpec& out_norm = dataset.normalized ? dataset.output_norm : model.output_norm;
    std::size_t hits = 0;
    double abs_err_total = 0.0;
    for (std::size_t i = 0; i < pred.rows(); ++i) {
        bool hit = true;
        for (std::size_t j = 0; j < pred.cols(); ++j) {
            const double p = out_norm.denormalize(j, pred(i, j));
            const double t = out_norm.denormalize(j, targets_norm(i, j));
            const double err = std::fabs(p - t);
            abs_err_total += err;
            if (err > tolerance_rel * std::max(std::fabs(t), t_floor)) hit = false;
        }
        if (hit) ++hits;
    }
    m.accuracy = static_cast<double>(hits) / static_cast<double>(pred.rows());
    m.mean_abs_err = abs_err_total / static_cast<double>(pred.size());
    return m;
}

struct TrainResult {
    MlpModel model;
    TrainTrace trace;
};

// Momentum-SGD loop: cfg.max_steps steps on minibatches of cfg.batch_size
// drawn uniformly with replacement from the training split. Every
// cfg.log_every steps (plus step 0 and the final step) the full training and
// validation splits are scored into the trace. A non-finite batch loss
// aborts with the step index and the batch RNG seed.
inline TrainResult train(MlpModel model, const Dataset& train_set, const Dataset& val_set,
                         const TrainConfig& cfg, double tolerance_rel = 0.05) {
    cfg.validate();
    model.check_consistent();
    if (train_set.size() == 0 || val_set.size() == 0)
        throw std::invalid_argument("train: empty dataset");
    if (train_set.input_arity != model.topology.input_size() ||
        train_set.output_arity != model.topology.output_size())
        throw std::invalid_argument("train: dataset arities do not match model topology");

    // The trained model carries the dataset's normalization maps so inference
    // on raw inputs can normalize/denormalize without the dataset at hand.
    model.input_norm = train_set.input_norm;
    model.output_norm = train_set.output_norm;

    const Matrix2D train_inputs = detail::dataset_inputs(train_set);
    const Matrix2D train_targets = detail::dataset_outputs(train_set);

    const auto t_start = std::chrono::steady_clock::now();
    const auto elapsed = [&t_start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    TrainResult result;
    result.trace.rows.reserve(cfg.max_steps / cfg.log_every + 2);

    const auto log_row = [&](std::size_t step, const MlpModel& m) {
        TraceRow row;
        row.step = step;
        row.train_l2 = l2_loss(forward(m, train_inputs), train_targets);
        const Metrics vm = eval_metrics(m, val_set, tolerance_rel);
        row.val_l2 = vm.l2;
        row.val_accuracy = vm.accuracy;
        row.val_abs_err = vm.mean_abs_err;
        row.wall_seconds = elapsed();
        result.trace.rows.push_back(row);
    };

    log_row(0, model);

    const std::uint64_t batch_seed = derive_seed(cfg.rng_seed, 0xba7c4);
    std::mt19937_64 batch_rng(batch_seed);
    GradientSet velocity = zeros_like(model);
    Matrix2D batch_in(cfg.batch_size, train_set.input_arity);
    Matrix2D batch_out(cfg.batch_size, train_set.output_arity);

    for (std::size_t step = 1; step <= cfg.max_steps; ++step) {
        for (std::size_t r = 0; r < cfg.batch_size; ++r) {
            const std::size_t idx = uniform_index(batch_rng, train_set.size());
            for (std::size_t j = 0; j < train_set.input_arity; ++j)
                batch_in(r, j) = train_inputs(idx, j);
            for (std::size_t j = 0; j < train_set.output_arity; ++j)
                batch_out(r, j) = train_targets(idx, j);
        }
        double batch_loss = 0.0;
        const GradientSet grads = backward(model, batch_in, batch_out, &batch_loss);
        if (!std::isfinite(batch_loss))
            throw TrainingDiverged(step, batch_seed, "batch l2 loss is not finite");
        sgd_momentum_step(model, grads, velocity, cfg);

        if (step % cfg.log_every == 0 || step == cfg.max_steps) log_row(step, model);
    }

    result.model = std::move(model);
    return result;
}

}  // namespace surrokit
