#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qps/error.hpp"

namespace qps {

using cplx = std::complex<double>;

/// Default tolerance for Hermiticity / positivity checks.
inline constexpr double kDefaultTol = 1e-9;

/// Dense row-major complex matrix. Everything in the library lives at
/// Hilbert dimensions <= ~64, so no sparsity and no blocking anywhere.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);

  static ComplexMatrix identity(int n);
  /// Single-entry matrix E[r][c] = value, zero elsewhere.
  static ComplexMatrix unit_entry(int n, int r, int c, cplx value = 1.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool square() const { return rows_ == cols_ && rows_ > 0; }

  cplx& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  /// Maximum absolute column sum (operator 1-norm).
  double one_norm() const;
  /// max |M[i][j] - conj(M[j][i])| over all entries.
  double hermitian_deviation() const;
  bool is_hermitian(double tol = kDefaultTol) const { return hermitian_deviation() <= tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scalar);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  /// Matrix-vector product.
  std::vector<cplx> apply(std::span<const cplx> v) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

/// Kronecker product; dimensions multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix exponential via scaling-and-squaring with a Taylor kernel.
/// Relative accuracy better than 1e-10 for one-norms up to ~50.
ComplexMatrix expm(const ComplexMatrix& m);

/// All eigenvalues of a Hermitian matrix (cyclic complex Jacobi), unsorted.
/// Rejects input whose Hermitian deviation exceeds `tol`.
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);

}  // namespace qps
