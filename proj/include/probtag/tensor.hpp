#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "probtag/errors.hpp"

namespace probtag::nn {

/// Dense row-major matrix of 64-bit floats. The only numeric carrier in the
/// toolkit; sequences are handled as lists of these.
class Tensor2D {
public:
    Tensor2D() = default;
    Tensor2D(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Tensor2D from(std::size_t rows, std::size_t cols, std::initializer_list<double> vals) {
        Tensor2D t(rows, cols);
        if (vals.size() != t.size()) throw ShapeMismatch("initializer size != rows*cols");
        std::size_t k = 0;
        for (double v : vals) t.data_[k++] = v;
        return t;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool same_shape(const Tensor2D& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool operator==(const Tensor2D& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline std::string shape_str(const Tensor2D& t) {
    return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

/// Raises NumericError if any entry is NaN or infinite. Called at layer
/// boundaries; a non-finite value anywhere in a graph is a contract violation.
inline void ensure_finite(const Tensor2D& t, const char* what) {
    const double* p = t.data();
    for (std::size_t i = 0, n = t.size(); i < n; ++i) {
        if (!std::isfinite(p[i])) {
            throw NumericError(std::string(what) + " produced a non-finite value");
        }
    }
}

inline Tensor2D matmul(const Tensor2D& a, const Tensor2D& b) {
    if (a.cols() != b.rows())
        throw ShapeMismatch("matmul " + shape_str(a) + " * " + shape_str(b));
    Tensor2D c(a.rows(), b.cols());
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            const double* bp = b.row(p);
            for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
        }
    }
    return c;
}

/// c += a^T * b, with a (m x n), b (m x p), c (n x p). Avoids materializing
/// the transpose in backward passes.
inline void matmul_acc_tA(Tensor2D& c, const Tensor2D& a, const Tensor2D& b) {
    if (a.rows() != b.rows() || c.rows() != a.cols() || c.cols() != b.cols())
        throw ShapeMismatch("matmul_acc_tA " + shape_str(a) + "^T * " + shape_str(b) +
                            " -> " + shape_str(c));
    const std::size_t m = a.rows(), n = a.cols(), p = b.cols();
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a.row(i);
        const double* bi = b.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double av = ai[j];
            double* cj = c.row(j);
            for (std::size_t q = 0; q < p; ++q) cj[q] += av * bi[q];
        }
    }
}

/// a * b^T, with a (m x n), b (p x n) -> (m x p).
inline Tensor2D matmul_tB(const Tensor2D& a, const Tensor2D& b) {
    if (a.cols() != b.cols())
        throw ShapeMismatch("matmul_tB " + shape_str(a) + " * " + shape_str(b) + "^T");
    Tensor2D c(a.rows(), b.rows());
    const std::size_t m = a.rows(), n = a.cols(), p = b.rows();
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t j = 0; j < p; ++j) {
            const double* bj = b.row(j);
            double acc = 0.0;
            for (std::size_t q = 0; q < n; ++q) acc += ai[q] * bj[q];
            ci[j] = acc;
        }
    }
    return c;
}

inline Tensor2D add(const Tensor2D& a, const Tensor2D& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("add " + shape_str(a) + " + " + shape_str(b));
    Tensor2D c(a.rows(), a.cols());
    for (std::size_t i = 0, n = a.size(); i < n; ++i) c.data()[i] = a.data()[i] + b.data()[i];
    return c;
}

inline void add_inplace(Tensor2D& a, const Tensor2D& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("add " + shape_str(a) + " + " + shape_str(b));
    for (std::size_t i = 0, n = a.size(); i < n; ++i) a.data()[i] += b.data()[i];
}

/// Adds a 1 x cols row vector to every row of m.
inline void add_row_inplace(Tensor2D& m, const Tensor2D& row) {
    if (row.rows() != 1 || row.cols() != m.cols())
        throw ShapeMismatch("row broadcast " + shape_str(row) + " onto " + shape_str(m));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double* mr = m.row(r);
        const double* v = row.row(0);
        for (std::size_t c = 0; c < m.cols(); ++c) mr[c] += v[c];
    }
}

inline Tensor2D hadamard(const Tensor2D& a, const Tensor2D& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("hadamard " + shape_str(a) + " o " + shape_str(b));
    Tensor2D c(a.rows(), a.cols());
    for (std::size_t i = 0, n = a.size(); i < n; ++i) c.data()[i] = a.data()[i] * b.data()[i];
    return c;
}

inline Tensor2D transpose(const Tensor2D& a) {
    Tensor2D c(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) c.at(k, r) = a.at(r, k);
    return c;
}

/// Column sums as a 1 x cols row vector.
inline Tensor2D colsum(const Tensor2D& a) {
    Tensor2D c(1, a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* ar = a.row(r);
        for (std::size_t k = 0; k < a.cols(); ++k) c.data()[k] += ar[k];
    }
    return c;
}

inline Tensor2D scale(const Tensor2D& a, double s) {
    Tensor2D c(a.rows(), a.cols());
    for (std::size_t i = 0, n = a.size(); i < n; ++i) c.data()[i] = a.data()[i] * s;
    return c;
}

}  // namespace probtag::nn
