#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "surrokit/activation.hpp"
#include "surrokit/error.hpp"
#include "surrokit/matrix.hpp"
#include "surrokit/normspec.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/text_io.hpp"

namespace surrokit {

// Layer-size sequence plus activation choices of a fully connected net.
// The canonical string form is the sizes joined by 'x', e.g. "3x5x3x1".
struct Topology {
    std::vector<std::size_t> layer_sizes;
    ActivationKind hidden_activation = ActivationKind::ReLU;
    ActivationKind output_activation = ActivationKind::Identity;

    void validate() const {
        if (layer_sizes.size() < 2)
            throw std::invalid_argument("topology needs at least input and output layers");
        for (std::size_t s : layer_sizes)
            if (s == 0) throw std::invalid_argument("topology has a zero layer size");
    }

    std::size_t layer_count() const noexcept { return layer_sizes.size(); }
    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
            if (i) s += 'x';
            s += std::to_string(layer_sizes[i]);
        }
        return s;
    }
};

// Parses "3x5x3x1"; activations are orthogonal to the size string and keep
// their defaults unless set by the caller.
inline Topology parse_topology(std::string_view text) {
    Topology t;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == 'x') {
            std::string_view token = text.substr(start, i - start);
            std::size_t value = 0;
            bool ok = !token.empty();
            for (char c : token) {
                if (c < '0' || c > '9') {
                    ok = false;
                    break;
                }
                value = value * 10 + static_cast<std::size_t>(c - '0');
            }
            if (!ok)
                throw std::invalid_argument("bad topology '" + std::string(text) +
                                            "': token '" + std::string(token) +
                                            "' is not a positive count");
            t.layer_sizes.push_back(value);
            start = i + 1;
        }
    }
    t.validate();
    return t;
}

struct TrainConfig {
    double learning_rate = 0.01;
    double momentum_coeff = 0.9;
    std::size_t batch_size = 200;
    std::size_t max_steps = 5000;
    std::uint64_t rng_seed = 1;
    std::size_t log_every = 100;

    void validate() const {
        // 0 is allowed: a no-op run is the documented way to probe the loop.
        if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be >= 0");
        if (!(momentum_coeff >= 0.0 && momentum_coeff < 1.0))
            throw std::invalid_argument("momentum_coeff must be in [0, 1)");
        if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
        if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
        if (log_every == 0) throw std::invalid_argument("log_every must be positive");
    }
};

// Weight/bias deltas with the same shapes as a model's parameters. Doubles as
// the gradient container and the momentum velocity.
struct GradientSet {
    std::vector<Matrix2D> weights;
    std::vector<std::vector<double>> biases;
};

struct MlpModel {
    Topology topology;
    std::vector<Matrix2D> weights;              // layer l: size_l x size_{l+1}
    std::vector<std::vector<double>> biases;    // layer l: size_{l+1}
    NormSpec input_norm;                        // identity until a dataset attaches its maps
    NormSpec output_norm;

    std::size_t layer_pairs() const noexcept { return weights.size(); }

    void check_consistent() const {
        topology.validate();
        const auto& sizes = topology.layer_sizes;
        if (weights.size() != sizes.size() - 1 || biases.size() != sizes.size() - 1)
            throw std::invalid_argument("model parameter lists do not match topology");
        for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
            if (weights[l].rows() != sizes[l] || weights[l].cols() != sizes[l + 1])
                throw std::invalid_argument("weight matrix " + std::to_string(l) +
                                            " shape does not match topology");
            if (biases[l].size() != sizes[l + 1])
                throw std::invalid_argument("bias vector " + std::to_string(l) +
                                            " length does not match topology");
        }
        input_norm.check_arity(sizes.front());
        output_norm.check_arity(sizes.back());
    }

    ActivationKind activation_for_layer(std::size_t l) const {
        return l + 1 == weights.size() ? topology.output_activation
                                       : topology.hidden_activation;
    }

    friend bool operator==(const MlpModel& a, const MlpModel& b) {
        return a.topology.layer_sizes == b.topology.layer_sizes &&
               a.topology.hidden_activation == b.topology.hidden_activation &&
               a.topology.output_activation == b.topology.output_activation &&
               a.weights == b.weights && a.biases == b.biases &&
               a.input_norm == b.input_norm && a.output_norm == b.output_norm;
    }
};

// Xavier-style uniform init: weights ~ U[-sqrt(6/(fan_in+fan_out)), +...],
// biases zero. Deterministic under the seed.
inline MlpModel init_model(Topology topology, std::uint64_t rng_seed) {
    topology.validate();
    MlpModel model;
    model.topology = std::move(topology);
    std::mt19937_64 rng(rng_seed);
    const auto& sizes = model.topology.layer_sizes;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t fan_in = sizes[l];
        const std::size_t fan_out = sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Matrix2D w(fan_in, fan_out);
        for (std::size_t i = 0; i < w.size(); ++i)
            w.data()[i] = uniform_real(rng, -limit, limit);
        model.weights.push_back(std::move(w));
        model.biases.emplace_back(fan_out, 0.0);
    }
    model.input_norm = NormSpec::identity(sizes.front());
    model.output_norm = NormSpec::identity(sizes.back());
    return model;
}

inline GradientSet zeros_like(const MlpModel& model) {
    GradientSet g;
    for (const auto& w : model.weights) g.weights.emplace_back(w.rows(), w.cols());
    for (const auto& b : model.biases) g.biases.emplace_back(b.size(), 0.0);
    return g;
}

namespace detail {

inline void apply_activation(Matrix2D& m, ActivationKind kind) {
    if (kind == ActivationKind::Identity) return;
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = activate(kind, m.data()[i]);
}

}  // namespace detail

// Per-layer intermediates of one forward pass, kept for backpropagation.
// activations[0] is the input batch; activations[l+1] = act(pre_acts[l]).
struct ForwardTrace {
    std::vector<Matrix2D> pre_acts;
    std::vector<Matrix2D> activations;

    const Matrix2D& output() const { return activations.back(); }
};

inline ForwardTrace forward_trace(const MlpModel& model, const Matrix2D& batch) {
    if (batch.cols() != model.topology.input_size())
        throw std::invalid_argument("forward: batch has " + std::to_string(batch.cols()) +
                                    " columns, model expects " +
                                    std::to_string(model.topology.input_size()));
    ForwardTrace trace;
    trace.activations.push_back(batch);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Matrix2D z = matmul_bias(trace.activations.back(), model.weights[l], model.biases[l]);
        trace.pre_acts.push_back(z);
        detail::apply_activation(z, model.activation_for_layer(l));
        trace.activations.push_back(std::move(z));
    }
    return trace;
}

// Row i of the result is the network output for input row i.
inline Matrix2D forward(const MlpModel& model, const Matrix2D& batch) {
    if (batch.cols() != model.topology.input_size())
        throw std::invalid_argument("forward: batch has " + std::to_string(batch.cols()) +
                                    " columns, model expects " +
                                    std::to_string(model.topology.input_size()));
    Matrix2D a = batch;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        a = matmul_bias(a, model.weights[l], model.biases[l]);
        detail::apply_activation(a, model.activation_for_layer(l));
    }
    return a;
}

// Scratch buffers for the single-sample path; reuse across calls to avoid
// per-call allocation in tight loops.
struct MlpWorkspace {
    std::vector<double> a;
    std::vector<double> b;
};

// Single-sample forward. Arithmetic order matches the batched path exactly,
// so looped and batched inference agree bitwise row for row.
inline void forward_one(const MlpModel& model, const double* input, double* output,
                        MlpWorkspace& ws) {
    const auto& sizes = model.topology.layer_sizes;
    std::size_t max_width = 0;
    for (std::size_t s : sizes) max_width = std::max(max_width, s);
    ws.a.resize(max_width);
    ws.b.resize(max_width);
    std::copy(input, input + sizes.front(), ws.a.begin());
    double* cur = ws.a.data();
    double* next = ws.b.data();
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const Matrix2D& w = model.weights[l];
        const std::vector<double>& bias = model.biases[l];
        for (std::size_t j = 0; j < w.cols(); ++j) next[j] = bias[j];
        for (std::size_t k = 0; k < w.rows(); ++k) {
            const double x = cur[k];
            const double* w_row = w.row(k);
            for (std::size_t j = 0; j < w.cols(); ++j) next[j] += x * w_row[j];
        }
        const ActivationKind kind = model.activation_for_layer(l);
        if (kind != ActivationKind::Identity)
            for (std::size_t j = 0; j < w.cols(); ++j) next[j] = activate(kind, next[j]);
        std::swap(cur, next);
    }
    std::copy(cur, cur + sizes.back(), output);
}

// Mean over samples, sum over output dimensions of the squared error.
inline double l2_loss(const Matrix2D& pred, const Matrix2D& target) {
    if (!pred.same_shape(target)) throw std::invalid_argument("l2_loss: shape mismatch");
    if (pred.rows() == 0) throw std::invalid_argument("l2_loss: empty batch");
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred.data()[i] - target.data()[i];
        total += d * d;
    }
    return total / static_cast<double>(pred.rows());
}

// Gradients of l2_loss with respect to every weight and bias, evaluated at
// the model's current parameters. Classic backpropagation:
//   delta_L = dL/dyhat (.) act'(z_L),   dL/dyhat = 2 (yhat - y) / n
//   dW_l = a_{l-1}^T delta_l,  db_l = column sums of delta_l
//   delta_{l-1} = (delta_l W_l^T) (.) act'(z_{l-1})
inline GradientSet backward(const MlpModel& model, const Matrix2D& batch_in,
                            const Matrix2D& batch_target, double* out_batch_loss = nullptr) {
    ForwardTrace trace = forward_trace(model, batch_in);
    const Matrix2D& pred = trace.output();
    if (!pred.same_shape(batch_target))
        throw std::invalid_argument("backward: target shape mismatch");
    if (out_batch_loss) *out_batch_loss = l2_loss(pred, batch_target);

    const std::size_t n = batch_in.rows();
    const double inv_n = 2.0 / static_cast<double>(n);
    GradientSet grads = zeros_like(model);

    Matrix2D delta(pred.rows(), pred.cols());
    for (std::size_t i = 0; i < pred.size(); ++i)
        delta.data()[i] = inv_n * (pred.data()[i] - batch_target.data()[i]);

    for (std::size_t l = model.weights.size(); l-- > 0;) {
        const Matrix2D& z = trace.pre_acts[l];
        const ActivationKind kind = model.activation_for_layer(l);
        if (kind != ActivationKind::Identity)
            for (std::size_t i = 0; i < delta.size(); ++i)
                delta.data()[i] *= activate_grad(kind, z.data()[i]);

        const Matrix2D& below = trace.activations[l];  // n x size_l
        Matrix2D& gw = grads.weights[l];               // size_l x size_{l+1}
        std::vector<double>& gb = grads.biases[l];
        for (std::size_t i = 0; i < n; ++i) {
            const double* b_row = below.row(i);
            const double* d_row = delta.row(i);
            for (std::size_t r = 0; r < gw.rows(); ++r) {
                const double x = b_row[r];
                double* gw_row = gw.row(r);
                for (std::size_t c = 0; c < gw.cols(); ++c) gw_row[c] += x * d_row[c];
            }
            for (std::size_t c = 0; c < gb.size(); ++c) gb[c] += d_row[c];
        }

        if (l > 0) {
            // delta <- delta * W^T
            const Matrix2D& w = model.weights[l];
            Matrix2D prev(n, w.rows());
            for (std::size_t i = 0; i < n; ++i) {
                const double* d_row = delta.row(i);
                double* p_row = prev.row(i);
                for (std::size_t r = 0; r < w.rows(); ++r) {
                    double acc = 0.0;
                    const double* w_row = w.row(r);
                    for (std::size_t c = 0; c < w.cols(); ++c) acc += d_row[c] * w_row[c];
                    p_row[r] = acc;
                }
            }
            delta = std::move(prev);
        }
    }
    return grads;
}

// Classical momentum: v <- beta v - lr g; p <- p + v.
inline void sgd_momentum_step(MlpModel& model, const GradientSet& grads, GradientSet& velocity,
                              const TrainConfig& cfg) {
    const double beta = cfg.momentum_coeff;
    const double lr = cfg.learning_rate;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Matrix2D& v = velocity.weights[l];
        const Matrix2D& g = grads.weights[l];
        Matrix2D& p = model.weights[l];
        if (!v.same_shape(p) || !g.same_shape(p))
            throw std::invalid_argument("sgd_momentum_step: shape mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            v.data()[i] = beta * v.data()[i] - lr * g.data()[i];
            p.data()[i] += v.data()[i];
        }
        std::vector<double>& vb = velocity.biases[l];
        const std::vector<double>& gb = grads.biases[l];
        std::vector<double>& pb = model.biases[l];
        for (std::size_t i = 0; i < pb.size(); ++i) {
            vb[i] = beta * vb[i] - lr * gb[i];
            pb[i] += vb[i];
        }
    }
}

// Forward-pass flop count: 2 * fan_in per neuron for the multiply-accumulate
// (the bias seeds the accumulator), one flop per neuron for its activation,
// plus one per output component for the output-activation pass.
inline std::size_t forward_flops(const Topology& t) {
    std::size_t flops = 0;
    for (std::size_t l = 0; l + 1 < t.layer_sizes.size(); ++l)
        flops += 2 * t.layer_sizes[l] * t.layer_sizes[l + 1];
    for (std::size_t l = 1; l < t.layer_sizes.size(); ++l) flops += t.layer_sizes[l];
    flops += t.layer_sizes.back();
    return flops;
}

// ---------------------------------------------------------------------------
// Model file, UTF-8 text:
//   line 1: "surrokit-model v1"
//   line 2: topology sizes ("3x5x3x1")
//   line 3: hidden and output activation names
//   then per layer: one line of weights (row-major), one line of biases,
//   all doubles with 17 significant digits; normalization blocks follow.

inline void save_model(const MlpModel& model, std::ostream& os) {
    model.check_consistent();
    os << "surrokit-model v1\n";
    os << model.topology.to_string() << '\n';
    os << activation_name(model.topology.hidden_activation) << ' '
       << activation_name(model.topology.output_activation) << '\n';
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const Matrix2D& w = model.weights[l];
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) os << ' ';
            os << format_double(w.data()[i]);
        }
        os << '\n';
        const auto& b = model.biases[l];
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i) os << ' ';
            os << format_double(b[i]);
        }
        os << '\n';
    }
    write_norm_block(os, "input_norm", model.input_norm);
    write_norm_block(os, "output_norm", model.output_norm);
}

inline void save_model(const MlpModel& model, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    save_model(model, os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline MlpModel load_model(std::istream& is, const std::string& source) {
    LineReader reader(is, source);
    const std::string magic = reader.next_line("magic");
    if (magic != "surrokit-model v1")
        throw ParseError(source, reader.line_number(), "magic",
                         "expected 'surrokit-model v1', got '" + magic + "'");

    MlpModel model;
    const std::string topo_line = reader.next_line("topology");
    try {
        model.topology = parse_topology(topo_line);
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, reader.line_number(), "topology", e.what());
    }

    const std::string act_line = reader.next_line("activations");
    auto act_tokens = split_tokens(act_line);
    if (act_tokens.size() != 2)
        throw ParseError(source, reader.line_number(), "activations",
                         "expected '<hidden> <output>'");
    try {
        model.topology.hidden_activation = parse_activation(act_tokens[0]);
        model.topology.output_activation = parse_activation(act_tokens[1]);
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, reader.line_number(), "activations", e.what());
    }

    const auto& sizes = model.topology.layer_sizes;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::string w_line = reader.next_line("weights[" + std::to_string(l) + "]");
        auto w_tokens = split_tokens(w_line);
        if (w_tokens.size() != sizes[l] * sizes[l + 1])
            throw ParseError(source, reader.line_number(),
                             "weights[" + std::to_string(l) + "]",
                             "expected " + std::to_string(sizes[l] * sizes[l + 1]) +
                                 " values, got " + std::to_string(w_tokens.size()));
        Matrix2D w(sizes[l], sizes[l + 1]);
        for (std::size_t i = 0; i < w_tokens.size(); ++i)
            w.data()[i] = parse_double(w_tokens[i], reader, "weights[" + std::to_string(l) + "]");
        model.weights.push_back(std::move(w));

        const std::string b_line = reader.next_line("biases[" + std::to_string(l) + "]");
        auto b_tokens = split_tokens(b_line);
        if (b_tokens.size() != sizes[l + 1])
            throw ParseError(source, reader.line_number(), "biases[" + std::to_string(l) + "]",
                             "expected " + std::to_string(sizes[l + 1]) + " values, got " +
                                 std::to_string(b_tokens.size()));
        std::vector<double> b(sizes[l + 1]);
        for (std::size_t i = 0; i < b_tokens.size(); ++i)
            b[i] = parse_double(b_tokens[i], reader, "biases[" + std::to_string(l) + "]");
        model.biases.push_back(std::move(b));
    }

    model.input_norm = read_norm_block(reader, "input_norm");
    model.output_norm = read_norm_block(reader, "output_norm");
    model.check_consistent();
    return model;
}

inline MlpModel load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open model file: " + path);
    return load_model(is, path);
}

}  // namespace surrokit
