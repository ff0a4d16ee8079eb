#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "surrokit/error.hpp"

namespace surrokit {

// Doubles are printed with 17 significant digits, enough for exact
// round-tripping through text.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_tokens(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

inline std::vector<std::string> split_on(std::string_view line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            fields.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

// Line-by-line reader that tracks position for error reporting.
class LineReader {
public:
    LineReader(std::istream& is, std::string source) : is_(is), source_(std::move(source)) {}

    // Returns the next line; throws a ParseError naming `field` at EOF.
    std::string next_line(const std::string& field) {
        std::string line;
        if (!std::getline(is_, line))
            throw ParseError(source_, line_ + 1, field, "unexpected end of file");
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    bool try_next_line(std::string& line) {
        if (!std::getline(is_, line)) return false;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::size_t line_number() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::istream& is_;
    std::string source_;
    std::size_t line_ = 0;
};

inline double parse_double(const std::string& token, const LineReader& reader,
                           const std::string& field) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError(reader.source(), reader.line_number(), field,
                         "not a number: '" + token + "'");
    return value;
}

inline std::size_t parse_count(const std::string& token, const LineReader& reader,
                               const std::string& field) {
    std::size_t value = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError(reader.source(), reader.line_number(), field,
                         "not a count: '" + token + "'");
    return value;
}

}  // namespace surrokit
