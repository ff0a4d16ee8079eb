#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "surrokit/error.hpp"
#include "surrokit/normspec.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/text_io.hpp"

namespace surrokit {

// One (input vector, output vector) pair captured from a kernel run.
struct Sample {
    std::vector<double> inputs;
    std::vector<double> outputs;
};

// Fixed-width sample table. Stored values are raw until normalize() runs;
// afterwards every component of the held samples lies in [0, 1] and the two
// NormSpecs describe the inverse maps.
struct Dataset {
    std::size_t input_arity = 0;
    std::size_t output_arity = 0;
    std::vector<Sample> samples;
    NormSpec input_norm;
    NormSpec output_norm;
    bool normalized = false;

    static Dataset empty(std::size_t in_arity, std::size_t out_arity) {
        Dataset d;
        d.input_arity = in_arity;
        d.output_arity = out_arity;
        d.input_norm = NormSpec::identity(in_arity);
        d.output_norm = NormSpec::identity(out_arity);
        return d;
    }

    std::size_t size() const noexcept { return samples.size(); }

    void add(std::vector<double> in, std::vector<double> out) {
        if (in.size() != input_arity || out.size() != output_arity)
            throw std::invalid_argument("Dataset::add: sample width mismatch");
        samples.push_back(Sample{std::move(in), std::move(out)});
    }

    void check_widths() const {
        for (const Sample& s : samples)
            if (s.inputs.size() != input_arity || s.outputs.size() != output_arity)
                throw std::invalid_argument("Dataset: ragged sample widths");
    }

    // Rescales stored samples with the given maps (computed from a training
    // split) and records them for later denormalization.
    void normalize(const NormSpec& in_spec, const NormSpec& out_spec) {
        in_spec.check_arity(input_arity);
        out_spec.check_arity(output_arity);
        if (normalized) throw std::logic_error("Dataset::normalize: already normalized");
        for (Sample& s : samples) {
            in_spec.normalize_vector(s.inputs);
            out_spec.normalize_vector(s.outputs);
        }
        input_norm = in_spec;
        output_norm = out_spec;
        normalized = true;
    }

    std::vector<double> raw_inputs(std::size_t i) const {
        std::vector<double> v = samples[i].inputs;
        if (normalized) input_norm.denormalize_vector(v);
        return v;
    }

    std::vector<double> raw_outputs(std::size_t i) const {
        std::vector<double> v = samples[i].outputs;
        if (normalized) output_norm.denormalize_vector(v);
        return v;
    }
};

inline NormSpec norm_from_samples(const std::vector<Sample>& samples,
                                  std::vector<double> Sample::*field, std::size_t arity) {
    NormSpec spec;
    spec.mins.assign(arity, 0.0);
    spec.maxs.assign(arity, 0.0);
    bool first = true;
    for (const Sample& s : samples) {
        const std::vector<double>& row = s.*field;
        for (std::size_t i = 0; i < arity; ++i) {
            if (first || row[i] < spec.mins[i]) spec.mins[i] = row[i];
            if (first || row[i] > spec.maxs[i]) spec.maxs[i] = row[i];
        }
        first = false;
    }
    for (std::size_t i = 0; i < arity; ++i)
        if (!(spec.maxs[i] > spec.mins[i])) spec.maxs[i] = spec.mins[i] + 1.0;
    return spec;
}

struct SplitResult {
    Dataset train;
    Dataset validation;
};

// Disjoint shuffled split. Normalization maps are computed from the training
// side only and applied to both.
inline SplitResult split(const Dataset& dataset, double train_fraction, std::uint64_t rng_seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must be in (0, 1)");
    if (dataset.normalized)
        throw std::invalid_argument("split: expects a raw (unnormalized) dataset");
    const std::size_t n = dataset.size();
    std::size_t n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n)
        throw std::invalid_argument("split: fraction leaves one side empty (n=" +
                                    std::to_string(n) + ")");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(rng_seed);
    shuffle(order, rng);

    SplitResult result;
    result.train = Dataset::empty(dataset.input_arity, dataset.output_arity);
    result.validation = Dataset::empty(dataset.input_arity, dataset.output_arity);
    result.train.samples.reserve(n_train);
    result.validation.samples.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? result.train : result.validation).samples.push_back(dataset.samples[order[i]]);
    }

    const NormSpec in_spec =
        norm_from_samples(result.train.samples, &Sample::inputs, dataset.input_arity);
    const NormSpec out_spec =
        norm_from_samples(result.train.samples, &Sample::outputs, dataset.output_arity);
    result.train.normalize(in_spec, out_spec);
    result.validation.normalize(in_spec, out_spec);
    return result;
}

// ---------------------------------------------------------------------------
// CSV: header "in_0,...,in_{k-1},out_0,...,out_{m-1}", one sample per row,
// 17-significant-digit doubles. The ".norm" sidecar (written only for
// normalized datasets) holds the two NormSpec blocks.

inline std::string norm_sidecar_path(const std::string& csv_path) { return csv_path + ".norm"; }

inline void write_dataset(const Dataset& dataset, const std::string& path) {
    dataset.check_widths();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < dataset.input_arity; ++i) os << (i ? "," : "") << "in_" << i;
    for (std::size_t i = 0; i < dataset.output_arity; ++i) os << ",out_" << i;
    os << '\n';
    for (const Sample& s : dataset.samples) {
        bool first = true;
        for (double v : s.inputs) {
            if (!first) os << ',';
            os << format_double(v);
            first = false;
        }
        for (double v : s.outputs) os << ',' << format_double(v);
        os << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);

    if (dataset.normalized) {
        std::ofstream ns(norm_sidecar_path(path));
        if (!ns) throw std::runtime_error("cannot open for writing: " + norm_sidecar_path(path));
        write_norm_block(ns, "input_norm", dataset.input_norm);
        write_norm_block(ns, "output_norm", dataset.output_norm);
    }
}

inline Dataset read_dataset(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open dataset file: " + path);
    LineReader reader(is, path);

    const std::string header = reader.next_line("header");
    auto columns = split_on(header, ',');
    std::size_t in_arity = 0;
    std::size_t out_arity = 0;
    for (const std::string& col : columns) {
        if (col.rfind("in_", 0) == 0 && out_arity == 0)
            ++in_arity;
        else if (col.rfind("out_", 0) == 0)
            ++out_arity;
        else
            throw ParseError(path, reader.line_number(), "header",
                             "unexpected column '" + col + "'");
    }
    if (in_arity == 0 || out_arity == 0)
        throw ParseError(path, reader.line_number(), "header",
                         "need at least one in_ and one out_ column");

    Dataset dataset = Dataset::empty(in_arity, out_arity);
    std::string line;
    while (reader.try_next_line(line)) {
        if (line.empty()) continue;
        auto fields = split_on(line, ',');
        if (fields.size() != in_arity + out_arity)
            throw ParseError(path, reader.line_number(), "row",
                             "expected " + std::to_string(in_arity + out_arity) +
                                 " fields, got " + std::to_string(fields.size()));
        Sample s;
        s.inputs.reserve(in_arity);
        s.outputs.reserve(out_arity);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const double v = parse_double(fields[i], reader,
                                          i < in_arity ? "in_" + std::to_string(i)
                                                       : "out_" + std::to_string(i - in_arity));
            if (i < in_arity)
                s.inputs.push_back(v);
            else
                s.outputs.push_back(v);
        }
        dataset.samples.push_back(std::move(s));
    }
    if (dataset.samples.empty())
        throw ParseError(path, reader.line_number(), "rows", "no samples");

    std::ifstream ns(norm_sidecar_path(path));
    if (ns) {
        LineReader norm_reader(ns, norm_sidecar_path(path));
        dataset.input_norm = read_norm_block(norm_reader, "input_norm");
        dataset.output_norm = read_norm_block(norm_reader, "output_norm");
        dataset.input_norm.check_arity(in_arity);
        dataset.output_norm.check_arity(out_arity);
        dataset.normalized = true;
    }
    return dataset;
}

}  // namespace surrokit
