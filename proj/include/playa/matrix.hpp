#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace playa {

// Dense row-major matrix of doubles. All model state and gradients live in
// these; everything is 64-bit so gradient checks hold to 1e-4 and below.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    static Matrix zeros(int r, int c) { return Matrix(r, c); }
    static Matrix identity(int n);

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
    std::string shape_str() const;

    void fill(double v);
    bool all_finite() const;
};

// Standard product; throws std::invalid_argument naming both shapes on a
// dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

// Numerically stable logistic function; saturates without overflow for any
// finite input.
double sigmoid(double x);
Matrix sigmoid(const Matrix& m);

// Binary cross entropy on a raw logit, computed as
//   max(x, 0) - x*y + log1p(exp(-|x|))
// which is exact in the well-conditioned regime and overflow-free for
// extreme logits. target must be 0 or 1.
double bce_with_logits(double logit, double target);

// Arithmetic mean of bce_with_logits over aligned arrays. Throws on empty
// input or length mismatch.
double mean_bce_with_logits(const std::vector<double>& logits,
                            const std::vector<double>& targets);

} // namespace playa
