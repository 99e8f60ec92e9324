#include "senseforge/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace senseforge {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("squared_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    const double s = dot(a, b) / (na * nb);
    // rounding can push |s| a hair past 1
    if (s > 1.0) return 1.0;
    if (s < -1.0) return -1.0;
    return s;
}

bool is_zero(std::span<const double> a) {
    for (double x : a)
        if (x != 0.0) return false;
    return true;
}

bool all_finite(std::span<const double> a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

void axpy(Vec& a, double scale, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("axpy: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vec Matrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw std::invalid_argument("Matrix::multiply: dimension mismatch");
    Vec y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) s += data_[r * cols_ + c] * x[c];
        y[r] = s;
    }
    return y;
}

Vec Matrix::multiply_transposed(std::span<const double> x) const {
    if (x.size() != rows_) throw std::invalid_argument("Matrix::multiply_transposed: dimension mismatch");
    Vec y(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) y[c] += data_[r * cols_ + c] * x[r];
    return y;
}

}  // namespace senseforge
