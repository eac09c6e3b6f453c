#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "lhott/error.hpp"
#include "lhott/rational.hpp"

namespace lhott {

/// Dense row-major matrix over an exact field. Shapes with zero rows or
/// columns are legal and behave as the zero map between the obvious spaces.
template <class F>
class Matrix {
 public:
  using value_type = F;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}
  Matrix(std::initializer_list<std::initializer_list<F>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      assert(row.size() == cols_);
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix scalar(const F& value) {
    Matrix m(1, 1);
    m(0, 0) = value;
    return m;
  }
  static Matrix column(std::span<const F> v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }
  static Matrix row(std::span<const F> v) {
    Matrix m(1, v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const F& x) { return x == 0; });
  }
  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? F(1) : F(0))) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    assert(r0 + nr <= rows_ && c0 + nc <= cols_);
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    assert(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  void add_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) += b(i, j);
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const F& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const F& s) { return a *= s; }
  friend Matrix operator*(const F& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= F(-1); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      fail(ErrorKind::ShapeMismatch, "matrix product of " + a.shape() + " and " + b.shape());
    Matrix c(a.rows_, b.cols_);
    F tmp;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j) == 0) continue;
          tmp = aik * b(k, j);
          c(i, j) += tmp;
        }
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  std::span<const F> data() const noexcept { return data_; }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      fail(ErrorKind::ShapeMismatch, "shapes " + shape() + " and " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

using QMatrix = Matrix<Rational>;

template <class F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
  Matrix<F> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return k;
}

template <class F>
Matrix<F> direct_sum(std::span<const Matrix<F>> blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) r += b.rows(), c += b.cols();
  Matrix<F> m(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    m.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return m;
}

/// Gauss-Jordan elimination in place; returns pivot columns in order.
template <class F>
std::vector<std::size_t> row_reduce(Matrix<F>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      F factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  return row_reduce(m).size();
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  if (!m.is_square()) return std::nullopt;
  const std::size_t n = m.rows();
  Matrix<F> aug(n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Matrix<F>::identity(n));
  auto pivots = row_reduce(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  return aug.block(0, n, n, n);
}

template <class F>
std::ostream& operator<<(std::ostream& os, const Matrix<F>& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      if constexpr (std::is_same_v<F, Rational>)
        os << to_string(m(i, j));
      else
        os << m(i, j);
    }
    os << ']';
  }
  return os << ']';
}

}  // namespace lhott
