#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "surrokit/error.hpp"
#include "surrokit/text_io.hpp"

namespace surrokit {

// Per-component affine map [min, max] -> [0, 1] for one vector space
// (inputs or outputs of a model/dataset). Built from the training split only.
// A component observed as constant gets max = min + 1 so the map stays
// invertible; that component then normalizes to 0.
struct NormSpec {
    std::vector<double> mins;
    std::vector<double> maxs;

    static NormSpec identity(std::size_t arity) {
        NormSpec s;
        s.mins.assign(arity, 0.0);
        s.maxs.assign(arity, 1.0);
        return s;
    }

    std::size_t arity() const noexcept { return mins.size(); }

    bool is_identity() const {
        for (std::size_t i = 0; i < mins.size(); ++i)
            if (mins[i] != 0.0 || maxs[i] != 1.0) return false;
        return true;
    }

    double normalize(std::size_t component, double x) const {
        return (x - mins[component]) / (maxs[component] - mins[component]);
    }

    double denormalize(std::size_t component, double u) const {
        return mins[component] + u * (maxs[component] - mins[component]);
    }

    void normalize_vector(std::vector<double>& v) const {
        check_arity(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = normalize(i, v[i]);
    }

    void denormalize_vector(std::vector<double>& v) const {
        check_arity(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = denormalize(i, v[i]);
    }

    void check_arity(std::size_t n) const {
        if (n != mins.size())
            throw std::invalid_argument("NormSpec: arity mismatch (" + std::to_string(n) +
                                        " vs " + std::to_string(mins.size()) + ")");
    }

    friend bool operator==(const NormSpec& a, const NormSpec& b) {
        return a.mins == b.mins && a.maxs == b.maxs;
    }
};

// Text block, used in model files and .norm sidecars:
//   <label> <arity>
//   <min> <max>        (one line per component)
inline void write_norm_block(std::ostream& os, const std::string& label, const NormSpec& s) {
    os << label << ' ' << s.arity() << '\n';
    for (std::size_t i = 0; i < s.arity(); ++i)
        os << format_double(s.mins[i]) << ' ' << format_double(s.maxs[i]) << '\n';
}

inline NormSpec read_norm_block(LineReader& reader, const std::string& label) {
    const std::string header = reader.next_line(label + " header");
    auto tokens = split_tokens(header);
    if (tokens.size() != 2 || tokens[0] != label)
        throw ParseError(reader.source(), reader.line_number(), label + " header",
                         "expected '" + label + " <arity>', got '" + header + "'");
    const std::size_t arity = parse_count(tokens[1], reader, label + " arity");
    NormSpec s;
    s.mins.reserve(arity);
    s.maxs.reserve(arity);
    for (std::size_t i = 0; i < arity; ++i) {
        const std::string line = reader.next_line(label + " range");
        auto range = split_tokens(line);
        if (range.size() != 2)
            throw ParseError(reader.source(), reader.line_number(), label + " range",
                             "expected '<min> <max>'");
        s.mins.push_back(parse_double(range[0], reader, label + " min"));
        s.maxs.push_back(parse_double(range[1], reader, label + " max"));
    }
    return s;
}

}  // namespace surrokit
