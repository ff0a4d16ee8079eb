#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace surrokit {

// Structured error for malformed text artifacts (model files, dataset CSVs).
// Carries the 1-based line number and the field that failed to parse.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, std::string field, std::string detail)
        : std::runtime_error(source + ":" + std::to_string(line) + ": field '" + field +
                             "': " + detail),
          source_(std::move(source)),
          line_(line),
          field_(std::move(field)) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string source_;
    std::size_t line_;
    std::string field_;
};

// Thrown when a training run produces a non-finite loss.
class TrainingDiverged : public std::runtime_error {
public:
    TrainingDiverged(std::size_t step, std::uint64_t batch_seed, const std::string& detail)
        : std::runtime_error("training diverged at step " + std::to_string(step) +
                             " (batch rng seed " + std::to_string(batch_seed) + "): " + detail),
          step_(step),
          batch_seed_(batch_seed) {}

    std::size_t step() const noexcept { return step_; }
    std::uint64_t batch_seed() const noexcept { return batch_seed_; }

private:
    std::size_t step_;
    std::uint64_t batch_seed_;
};

}  // namespace surrokit
