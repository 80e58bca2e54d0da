#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sfs/field.hpp"

namespace sfs {

/// Row-major dense matrix over an exact scalar type (Rational or Fp).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix +: shape mismatch");
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix -: shape mismatch");
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix *: shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t t = 0; t < a.cols_; ++t) {
        const T& x = a(i, t);
        if (x == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(t, j);
      }
    return r;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == T(0); });
  }

  /// [a | b]
  static Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("hcat: row mismatch");
    Matrix r(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, a.cols_ + j) = b(i, j);
    }
    return r;
  }
  /// [a ; b]
  static Matrix vcat(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.cols_) throw std::invalid_argument("vcat: column mismatch");
    Matrix r(a.rows_ + b.rows_, a.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) r(a.rows_ + i, j) = b(i, j);
    return r;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using FieldMatrix = Matrix<Fp>;

/// Exact rank by Gaussian elimination (no tolerance).
template <class T>
std::size_t rank_exact(Matrix<T> m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, col) == T(0)) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != rank)
      for (std::size_t j = col; j < m.cols(); ++j) std::swap(m(pivot, j), m(rank, j));
    const T inv = T(1) / m(rank, col);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (m(i, col) == T(0)) continue;
      const T f = m(i, col) * inv;
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

/// Dense univariate polynomial over GF(P), coefficients low degree first.
using FieldPoly = std::vector<Fp>;

/// Monic characteristic polynomial det(xI - M) via Hessenberg reduction.
FieldPoly charpoly(const FieldMatrix& m);

/// Monic gcd; the zero polynomial is represented by an empty vector.
FieldPoly poly_gcd(FieldPoly a, FieldPoly b);

inline std::size_t poly_degree(const FieldPoly& p) { return p.empty() ? 0 : p.size() - 1; }

}  // namespace sfs
