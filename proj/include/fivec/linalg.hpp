#pragma once

#include <complex>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "fivec/expr.hpp"

namespace fivec {

// Structural zero tests; the determinant expansion skips such entries, which
// keeps symbolic minors of sparse matrices small.
inline bool structurally_zero(double v) { return v == 0.0; }
inline bool structurally_zero(const std::complex<double>& v) { return v == std::complex<double>(); }
inline bool structurally_zero(const Expression& e) { return e.is_zero(); }
inline bool structurally_zero(const ComplexExpression& e) { return e.is_zero(); }

/// Dense row-major matrix over double, complex, Expression, or
/// ComplexExpression entries. Sized for the small bases that appear here
/// (n <= 6); determinants use Laplace expansion.
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * cols_ + j)];
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (structurally_zero(a)) continue;
        for (int j = 0; j < o.cols_; ++j) {
          if (structurally_zero(o(k, j))) continue;
          out(i, j) += a * o(k, j);
        }
      }
    return out;
  }

  Matrix operator+(const Matrix& o) const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + o.data_[i];
    return out;
  }

  Matrix operator-(const Matrix& o) const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - o.data_[i];
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  T det() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of a non-square matrix");
    std::vector<int> cols(static_cast<std::size_t>(cols_));
    for (int j = 0; j < cols_; ++j) cols[static_cast<std::size_t>(j)] = j;
    return det_rec(0, cols);
  }

  /// adj(M) with adj(M)*M = det(M)*I.
  Matrix adjugate() const {
    Matrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        T m = minor_det(i, j);
        out(j, i) = ((i + j) % 2 == 0) ? m : T() - m;
      }
    return out;
  }

  Matrix inverse() const {
    T d = det();
    if constexpr (std::is_same_v<T, double>) {
      if (d == 0.0) throw std::invalid_argument("singular matrix");
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
      if (d == std::complex<double>()) throw std::invalid_argument("singular matrix");
    } else {
      if (structurally_zero(d)) throw std::invalid_argument("singular matrix");
    }
    Matrix adj = adjugate();
    Matrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(i, j) = adj(i, j) / d;
    return out;
  }

private:
  T minor_det(int drop_row, int drop_col) const {
    std::vector<int> cols;
    cols.reserve(static_cast<std::size_t>(cols_ - 1));
    for (int j = 0; j < cols_; ++j)
      if (j != drop_col) cols.push_back(j);
    Matrix sub(rows_ - 1, cols_ - 1);
    int r = 0;
    for (int i = 0; i < rows_; ++i) {
      if (i == drop_row) continue;
      for (int j = 0; j < cols_ - 1; ++j) sub(r, j) = (*this)(i, cols[static_cast<std::size_t>(j)]);
      ++r;
    }
    return sub.det();
  }

  T det_rec(int row, const std::vector<int>& cols) const {
    if (cols.size() == 1) return (*this)(row, cols[0]);
    T acc{};
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const T& pivot = (*this)(row, cols[k]);
      if (structurally_zero(pivot)) continue;
      std::vector<int> rest;
      rest.reserve(cols.size() - 1);
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (j != k) rest.push_back(cols[j]);
      T term = pivot * det_rec(row + 1, rest);
      acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using MatD = Matrix<double>;
using MatC = Matrix<std::complex<double>>;
using MatX = Matrix<Expression>;
using MatCX = Matrix<ComplexExpression>;

inline MatD eval_matrix(const MatX& m, const Point& p) {
  MatD out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).eval(p);
  return out;
}

inline MatC eval_matrix(const MatCX& m, const Point& p) {
  MatC out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).eval(p);
  return out;
}

}  // namespace fivec
