#include "symscat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "symscat/errors.hpp"

namespace symscat {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw DimensionMismatch("entry count does not match rows*cols");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

CMatrix CMatrix::conjugate() const {
  CMatrix t = *this;
  for (auto& z : t.data_) z = std::conj(z);
  return t;
}

CMatrix CMatrix::adjoint() const { return transpose().conjugate(); }

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product");
  CMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CVector operator*(const CMatrix& a, std::span<const Complex> x) {
  if (a.cols_ != x.size()) throw DimensionMismatch("matrix-vector product");
  CVector y(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < a.cols_; ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

LuDecomposition::LuDecomposition(const CMatrix& m) : lu_(m), perm_(m.rows()) {
  if (!m.square() || m.rows() == 0) throw DimensionMismatch("LU requires a non-empty square matrix");
  const std::size_t n = m.rows();
  norm_ = frobenius_norm(m);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  min_pivot_ = std::numeric_limits<double>::infinity();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot_row = col;
    double best = std::abs(lu_(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(lu_(r, col));
      if (mag > best) {
        best = mag;
        pivot_row = r;
      }
    }
    min_pivot_ = std::min(min_pivot_, best);
    if (pivot_row != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(col, c), lu_(pivot_row, c));
      std::swap(perm_[col], perm_[pivot_row]);
      sign_ = -sign_;
    }
    if (best == 0.0) continue;  // exactly singular column: nothing to eliminate
    const Complex pivot = lu_(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = lu_(r, col) / pivot;
      lu_(r, col) = factor;
      if (factor == Complex{}) continue;
      for (std::size_t c = col + 1; c < n; ++c) lu_(r, c) -= factor * lu_(col, c);
    }
  }
  singular_ = min_pivot_ < kSingularPivotRatio * norm_ || norm_ == 0.0;
}

Complex LuDecomposition::determinant() const {
  Complex det = static_cast<double>(sign_);
  for (std::size_t i = 0; i < size(); ++i) det *= lu_(i, i);
  return det;
}

void LuDecomposition::require_regular() const {
  if (singular_)
    throw SingularMatrix("matrix is singular to working precision (min pivot " +
                         std::to_string(min_pivot_) + ", norm " + std::to_string(norm_) + ")");
}

CVector LuDecomposition::solve(std::span<const Complex> b) const {
  require_regular();
  const std::size_t n = size();
  if (b.size() != n) throw DimensionMismatch("right-hand side length");
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
    x[i] /= lu_(i, i);
  }
  return x;
}

CMatrix LuDecomposition::inverse() const {
  require_regular();
  const std::size_t n = size();
  CMatrix inv(n, n);
  CVector e(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), Complex{});
    e[c] = 1.0;
    const CVector col = solve(e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

CMatrix invert(const CMatrix& m) { return LuDecomposition(m).inverse(); }

CVector solve(const CMatrix& m, std::span<const Complex> b) {
  if (!m.square()) throw DimensionMismatch("solve requires a square matrix");
  if (b.size() != m.rows()) throw DimensionMismatch("right-hand side length");
  return LuDecomposition(m).solve(b);
}

Complex determinant(const CMatrix& m) {
  if (!m.square()) throw DimensionMismatch("determinant requires a square matrix");
  if (m.rows() == 0) return 1.0;
  return LuDecomposition(m).determinant();
}

double frobenius_norm(const CMatrix& m) {
  double acc = 0.0;
  for (const auto& z : m.entries()) acc += std::norm(z);
  return std::sqrt(acc);
}

double vector_norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

CMatrix remove_rows_cols(const CMatrix& m, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols) {
  auto keep = [](std::size_t count, std::span<const std::size_t> drop) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count; ++i)
      if (std::find(drop.begin(), drop.end(), i) == drop.end()) out.push_back(i);
    return out;
  };
  const auto kr = keep(m.rows(), rows);
  const auto kc = keep(m.cols(), cols);
  CMatrix out(kr.size(), kc.size());
  for (std::size_t i = 0; i < kr.size(); ++i)
    for (std::size_t j = 0; j < kc.size(); ++j) out(i, j) = m(kr[i], kc[j]);
  return out;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (!u.square() || u.empty()) return false;
  return frobenius_norm(u * u.adjoint() - CMatrix::identity(u.rows())) <= tol;
}

bool is_finite(const CMatrix& m) {
  return std::all_of(m.entries().begin(), m.entries().end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

}  // namespace symscat
