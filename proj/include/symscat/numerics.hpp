#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace symscat {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Dense complex matrix, row-major. Sized for scattering centers (N <= 64)
/// and the banded lattice Hamiltonians of the dynamics module.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  CMatrix transpose() const;
  CMatrix conjugate() const;
  CMatrix adjoint() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CVector operator*(const CMatrix& a, std::span<const Complex> x);

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Partial-pivot LU factorization of a square matrix, P*A = L*U packed in
/// place. Never throws on singular input; callers inspect the pivots.
class LuDecomposition {
 public:
  explicit LuDecomposition(const CMatrix& m);

  std::size_t size() const noexcept { return lu_.rows(); }
  /// Smallest |U_ii|.
  double min_pivot() const noexcept { return min_pivot_; }
  /// True when some pivot falls below 1e-14 * ||A||_F.
  bool singular() const noexcept { return singular_; }
  Complex determinant() const;

  /// Throws SingularMatrix when singular().
  CVector solve(std::span<const Complex> b) const;
  CMatrix inverse() const;

 private:
  void require_regular() const;

  CMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  double min_pivot_ = 0.0;
  double norm_ = 0.0;
  bool singular_ = false;
};

/// Relative pivot threshold below which a matrix is treated as singular.
inline constexpr double kSingularPivotRatio = 1e-14;

CMatrix invert(const CMatrix& m);
CVector solve(const CMatrix& m, std::span<const Complex> b);
Complex determinant(const CMatrix& m);

double frobenius_norm(const CMatrix& m);
double vector_norm(std::span<const Complex> v);

/// Submatrix with the listed rows and columns deleted.
CMatrix remove_rows_cols(const CMatrix& m, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols);

bool is_unitary(const CMatrix& u, double tol = 1e-10);
bool is_finite(const CMatrix& m);

}  // namespace symscat
