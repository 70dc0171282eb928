#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tip/errors.hpp"

namespace tip {

// Dense row-major matrix over an arbitrary scalar type. The scalar only has
// to support copy, addition and multiplication; this is what lets the same
// pooling code run on plain doubles and on tape-recorded variables.
template <class T>
class Mat {
  public:
    Mat() = default;

    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    Mat(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Mat(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) throw param_error("Mat: data size does not match shape");
    }

    // Builds each entry with fn(r, c); avoids requiring default construction
    // of T to produce a fully initialized matrix.
    template <class Fn>
    static Mat from_fn(std::size_t rows, std::size_t cols, Fn&& fn) {
        Mat m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_.reserve(rows * cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m.data_.push_back(fn(r, c));
        return m;
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n, T(0.0));
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Mat<T> transpose(const Mat<T>& a) {
    return Mat<T>::from_fn(a.cols(), a.rows(), [&](std::size_t r, std::size_t c) { return a(c, r); });
}

template <class T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) throw param_error("matmul: inner dimensions differ");
    if (a.cols() == 0) throw param_error("matmul: empty inner dimension");
    return Mat<T>::from_fn(a.rows(), b.cols(), [&](std::size_t i, std::size_t j) {
        T acc = a(i, 0) * b(0, j);
        for (std::size_t k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
        return acc;
    });
}

// a^T * b without materializing the transpose.
template <class T>
Mat<T> matmul_tn(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows() != b.rows()) throw param_error("matmul_tn: inner dimensions differ");
    if (a.rows() == 0) throw param_error("matmul_tn: empty inner dimension");
    return Mat<T>::from_fn(a.cols(), b.cols(), [&](std::size_t i, std::size_t j) {
        T acc = a(0, i) * b(0, j);
        for (std::size_t k = 1; k < a.rows(); ++k) acc = acc + a(k, i) * b(k, j);
        return acc;
    });
}

template <class T, class Fn>
Mat<T> map_entries(const Mat<T>& a, Fn&& fn) {
    return Mat<T>::from_fn(a.rows(), a.cols(), [&](std::size_t r, std::size_t c) { return fn(a(r, c)); });
}

} // namespace tip
