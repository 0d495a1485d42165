#include "qps/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace qps {

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw Error("ComplexMatrix: dimensions must be positive");
  data_.assign(static_cast<std::size_t>(rows) * cols, cplx(0.0, 0.0));
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::unit_entry(int n, int r, int c, cplx value) {
  ComplexMatrix m(n, n);
  if (r < 0 || r >= n || c < 0 || c >= n) throw Error("unit_entry: index out of range");
  m(r, c) = value;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx ComplexMatrix::trace() const {
  if (!square()) throw Error("trace: matrix not square");
  cplx t = 0.0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::one_norm() const {
  double best = 0.0;
  for (int c = 0; c < cols_; ++c) {
    double sum = 0.0;
    for (int r = 0; r < rows_; ++r) sum += std::abs((*this)(r, c));
    best = std::max(best, sum);
  }
  return best;
}

double ComplexMatrix::hermitian_deviation() const {
  if (!square()) throw Error("hermitian_deviation: matrix not square");
  double dev = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      dev = std::max(dev, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return dev;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error("matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error("matrix sub: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scalar) {
  for (cplx& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("matrix multiply: shape mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  const int n = a.rows_, k = a.cols_, m = b.cols_;
  for (int r = 0; r < n; ++r) {
    const cplx* arow = &a.data_[static_cast<std::size_t>(r) * k];
    cplx* orow = &out.data_[static_cast<std::size_t>(r) * m];
    for (int j = 0; j < k; ++j) {
      const cplx av = arow[j];
      if (av == cplx(0.0, 0.0)) continue;
      const cplx* brow = &b.data_[static_cast<std::size_t>(j) * m];
      for (int c = 0; c < m; ++c) orow[c] += av * brow[c];
    }
  }
  return out;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> v) const {
  if (static_cast<int>(v.size()) != cols_) throw Error("apply: vector length mismatch");
  std::vector<cplx> out(static_cast<std::size_t>(rows_), cplx(0.0, 0.0));
  for (int r = 0; r < rows_; ++r) {
    cplx acc = 0.0;
    const cplx* row = &data_[static_cast<std::size_t>(r) * cols_];
    for (int c = 0; c < cols_; ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.empty() || b.empty()) throw Error("kron: empty operand");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ar = 0; ar < a.rows(); ++ar)
    for (int ac = 0; ac < a.cols(); ++ac) {
      const cplx av = a(ar, ac);
      if (av == cplx(0.0, 0.0)) continue;
      for (int br = 0; br < b.rows(); ++br)
        for (int bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = av * b(br, bc);
    }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (!m.square()) throw Error("expm: matrix not square");
  const int n = m.rows();

  // Scale down until the one-norm is at most 1/4, run the Taylor series to
  // machine precision, then square back up.
  int squarings = 0;
  double norm = m.one_norm();
  while (norm > 0.25 && squarings < 60) {
    norm *= 0.5;
    ++squarings;
  }
  ComplexMatrix scaled = m;
  scaled *= cplx(std::ldexp(1.0, -squarings), 0.0);

  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled;
    term *= cplx(1.0 / k, 0.0);
    result += term;
    if (term.max_abs() <= 1e-18 * std::max(1.0, result.max_abs())) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

namespace {

// One cyclic complex Jacobi pass zeroing A[p][q]: absorb the phase of the
// pivot into row/column q, then apply the classic real rotation.
void jacobi_rotate(ComplexMatrix& a, int p, int q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const int n = a.rows();

  const cplx phase = apq / mag;  // a(p,q) becomes |a(p,q)| after this
  for (int i = 0; i < n; ++i) a(i, q) *= std::conj(phase);
  for (int i = 0; i < n; ++i) a(q, i) *= phase;

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  for (int i = 0; i < n; ++i) {
    const cplx aip = a(i, p), aiq = a(i, q);
    a(i, p) = c * aip - s * aiq;
    a(i, q) = s * aip + c * aiq;
  }
  for (int i = 0; i < n; ++i) {
    const cplx api = a(p, i), aqi = a(q, i);
    a(p, i) = c * api - s * aqi;
    a(q, i) = s * api + c * aqi;
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

}  // namespace

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.square()) throw Error("eigenvalues_hermitian: matrix not square");
  if (m.hermitian_deviation() > tol) throw Error("eigenvalues_hermitian: matrix not Hermitian");
  const int n = m.rows();

  // Symmetrize to kill the allowed sub-tolerance deviation, then iterate.
  ComplexMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));

  const double scale = std::max(1.0, a.max_abs());
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-14 * scale * n) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > 1e-16 * scale) jacobi_rotate(a, p, q);
  }

  std::vector<double> eigs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = a(i, i).real();
  return eigs;
}

double min_eigenvalue_hermitian(const ComplexMatrix& m, double tol) {
  const std::vector<double> eigs = eigenvalues_hermitian(m, tol);
  return *std::min_element(eigs.begin(), eigs.end());
}

}  // namespace qps
