#include "playa/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace playa {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::string Matrix::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

void Matrix::fill(double v) {
    for (double& x : data) x = v;
}

bool Matrix::all_finite() const {
    for (double x : data)
        if (!std::isfinite(x)) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dimensions differ, " +
                                    a.shape_str() + " * " + b.shape_str());
    }
    Matrix out(a.rows, b.cols);
    // i-k-j order keeps both b and out row accesses sequential.
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[static_cast<std::size_t>(i) * a.cols];
        double* orow = &out.data[static_cast<std::size_t>(i) * b.cols];
        for (int k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = &b.data[static_cast<std::size_t>(k) * b.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
    return out;
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& m) {
    Matrix out = m;
    for (double& x : out.data) x = sigmoid(x);
    return out;
}

double bce_with_logits(double logit, double target) {
    return std::fmax(logit, 0.0) - logit * target + std::log1p(std::exp(-std::fabs(logit)));
}

double mean_bce_with_logits(const std::vector<double>& logits,
                            const std::vector<double>& targets) {
    if (logits.empty()) throw std::invalid_argument("mean_bce_with_logits: empty input");
    if (logits.size() != targets.size())
        throw std::invalid_argument("mean_bce_with_logits: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i)
        sum += bce_with_logits(logits[i], targets[i]);
    return sum / static_cast<double>(logits.size());
}

} // namespace playa
