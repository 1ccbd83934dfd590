#pragma once

// Dense complex linear algebra on small operators (dim <= 64).

#include <qcorr/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

/// Subsystem dimensions of a bipartite operator, A first.
struct Dims {
  int a;
  int b;
  int total() const { return a * b; }
};

enum class Party { A, B };

struct EigenDecomposition {
  RealVector eigenvalues;     ///< ascending
  ComplexMatrix eigenvectors; ///< columns, unitary
};

inline double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermitian_asymmetry(const ComplexMatrix& m) {
  return max_abs_entry(m - m.adjoint());
}

inline void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  return hermitian_asymmetry(m) <= tol * std::max(1.0, max_abs_entry(m));
}

inline EigenDecomposition herm_eig(const ComplexMatrix& h) {
  require_square(h, "herm_eig");
  const double asym = hermitian_asymmetry(h);
  if (asym > kHermitianTol * std::max(1.0, max_abs_entry(h))) {
    std::ostringstream os;
    os << "herm_eig: input is not Hermitian (max asymmetry " << asym << ")";
    throw NotHermitianError(os.str(), asym);
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw ConsistencyError("herm_eig: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline bool is_psd(const ComplexMatrix& m, double tol = kPsdTol) {
  if (!is_hermitian(m)) return false;
  return herm_eig(m).eigenvalues.minCoeff() >= -tol;
}

/// Hermitian, positive semidefinite and unit trace.
inline bool is_density(const ComplexMatrix& m, double tol = kPsdTol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return std::abs(m.trace() - Complex(1.0)) <= tol && is_psd(m, tol);
}

inline ComplexMatrix from_spectrum(const EigenDecomposition& e, const RealVector& values) {
  return e.eigenvectors * values.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// [-1e-9, 0) are clamped to zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  const EigenDecomposition e = herm_eig(rho);
  const double lo = e.eigenvalues.minCoeff();
  if (lo < -kPsdTol) {
    std::ostringstream os;
    os << "psd_sqrt: matrix has negative eigenvalue " << lo;
    throw NotPositiveError(os.str(), lo);
  }
  const RealVector roots = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return from_spectrum(e, roots);
}

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

inline void require_dims(const ComplexMatrix& rho, Dims dims, const char* who) {
  require_square(rho, who);
  if (dims.a < 1 || dims.b < 1 || rho.rows() != dims.total()) {
    std::ostringstream os;
    os << who << ": dimension " << rho.rows() << " does not factor as " << dims.a << "x" << dims.b;
    throw DimensionError(os.str());
  }
}

/// Transpose on one tensor factor; an involution.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, Dims dims, Party party) {
  require_dims(rho, dims, "partial_transpose");
  ComplexMatrix out(rho.rows(), rho.cols());
  for (int i1 = 0; i1 < dims.a; ++i1)
    for (int j1 = 0; j1 < dims.b; ++j1)
      for (int i2 = 0; i2 < dims.a; ++i2)
        for (int j2 = 0; j2 < dims.b; ++j2) {
          const Complex v = rho(i1 * dims.b + j1, i2 * dims.b + j2);
          if (party == Party::A)
            out(i2 * dims.b + j1, i1 * dims.b + j2) = v;
          else
            out(i1 * dims.b + j2, i2 * dims.b + j1) = v;
        }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Dims dims, Party keep) {
  require_dims(rho, dims, "partial_trace");
  if (keep == Party::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dims.a, dims.a);
    for (int i = 0; i < dims.a; ++i)
      for (int k = 0; k < dims.a; ++k)
        for (int j = 0; j < dims.b; ++j) out(i, k) += rho(i * dims.b + j, k * dims.b + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dims.b, dims.b);
  for (int j = 0; j < dims.b; ++j)
    for (int l = 0; l < dims.b; ++l)
      for (int i = 0; i < dims.a; ++i) out(j, l) += rho(i * dims.b + j, i * dims.b + l);
  return out;
}

/// Hilbert-Schmidt norm sqrt(tr X^dagger X).
inline double hs_norm(const ComplexMatrix& m) { return m.norm(); }

/// Sum of singular values.
inline double trace_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && is_hermitian(m)) return herm_eig(m).eigenvalues.cwiseAbs().sum();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

inline ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  return x * y - y * x;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  return x * y + y * x;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal moved into Q.
template <class Rng>
ComplexMatrix random_unitary(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Random full-rank density matrix G G^dagger / tr(G G^dagger).
template <class Rng>
ComplexMatrix random_density(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

template <class Rng>
ComplexMatrix random_hermitian(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  return 0.5 * (g + g.adjoint());
}

} // namespace qcorr
