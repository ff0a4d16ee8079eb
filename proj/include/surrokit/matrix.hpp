#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace surrokit {

// Dense row-major matrix of doubles. The single numeric container used for
// weights, activations, gradients, and batches.
class Matrix2D {
public:
    Matrix2D() = default;

    Matrix2D(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix2D from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix2D m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_)
                throw std::invalid_argument("Matrix2D::from_rows: ragged initializer");
            std::size_t j = 0;
            for (double v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    std::vector<double>& storage() noexcept { return data_; }
    const std::vector<double>& storage() const noexcept { return data_; }

    bool same_shape(const Matrix2D& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool all_finite() const noexcept {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void fill(double v) { data_.assign(data_.size(), v); }

    friend bool operator==(const Matrix2D& a, const Matrix2D& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline void require_shape(const Matrix2D& m, std::size_t rows, std::size_t cols,
                          const char* what) {
    if (m.rows() != rows || m.cols() != cols)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(rows) +
                                    "x" + std::to_string(cols) + ", got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

// out = in * w + bias (bias broadcast over rows). Accumulation order per
// element is fixed (bias first, then k ascending); the single-sample path in
// mlp.hpp mirrors it exactly so batched and per-row inference agree bitwise.
inline Matrix2D matmul_bias(const Matrix2D& in, const Matrix2D& w,
                            const std::vector<double>& bias) {
    if (in.cols() != w.rows())
        throw std::invalid_argument("matmul_bias: inner dimensions disagree (" +
                                    std::to_string(in.cols()) + " vs " +
                                    std::to_string(w.rows()) + ")");
    if (bias.size() != w.cols())
        throw std::invalid_argument("matmul_bias: bias length mismatch");
    Matrix2D out(in.rows(), w.cols());
    for (std::size_t i = 0; i < in.rows(); ++i) {
        double* out_row = out.row(i);
        for (std::size_t j = 0; j < w.cols(); ++j) out_row[j] = bias[j];
        const double* in_row = in.row(i);
        for (std::size_t k = 0; k < w.rows(); ++k) {
            const double x = in_row[k];
            const double* w_row = w.row(k);
            for (std::size_t j = 0; j < w.cols(); ++j) out_row[j] += x * w_row[j];
        }
    }
    return out;
}

}  // namespace surrokit
