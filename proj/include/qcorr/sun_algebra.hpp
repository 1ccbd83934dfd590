#pragma once

// Generalized Gell-Mann generators of SU(n), their structure constants, and
// the Weyl (clock/shift) operator basis.
//
// Basis vectors |k> are 0-indexed throughout. The generator order is fixed:
//   [0, n-1)                      diagonal, l = 1..n-1
//   [n-1, n-1 + n(n-1)/2)         symmetric |k><m| + |m><k|, k<m lexicographic
//   [(n^2+n)/2 - 1, n^2-1)        antisymmetric -i(|k><m| - |m><k|), k<m lexicographic
// so generator position decides the sign of sum_ij (lambda_k)_ji^2.

#include <qcorr/linalg.hpp>

#include <numbers>
#include <sstream>
#include <vector>

namespace qcorr {

enum class GeneratorBlock { Diagonal, Symmetric, Antisymmetric };

/// Dense rank-3 real tensor of side m.
class Tensor3 {
public:
  Tensor3() = default;
  explicit Tensor3(int m) : m_(m), data_(static_cast<std::size_t>(m) * m * m, 0.0) {}
  int side() const { return m_; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * m_ + j) * m_ + k;
  }
  int m_ = 0;
  std::vector<double> data_;
};

struct GeneratorSet {
  int n = 0;
  std::vector<ComplexMatrix> lambdas;
  Tensor3 f; ///< totally antisymmetric; empty until structure_constants()
  Tensor3 d; ///< totally symmetric; empty until structure_constants()

  int count() const { return static_cast<int>(lambdas.size()); }
  bool has_structure_constants() const { return f.side() == count() && count() > 0; }
};

inline int diagonal_count(int n) { return n - 1; }
inline int symmetric_count(int n) { return n * (n - 1) / 2; }
inline int antisymmetric_count(int n) { return n * (n - 1) / 2; }

inline GeneratorBlock generator_block(int n, int index) {
  if (index < diagonal_count(n)) return GeneratorBlock::Diagonal;
  if (index < diagonal_count(n) + symmetric_count(n)) return GeneratorBlock::Symmetric;
  return GeneratorBlock::Antisymmetric;
}

inline ComplexMatrix generalized_gellmann(int n, int index) {
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  if (index < n - 1) {
    const int l = index + 1;
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int k = 0; k < l; ++k) g(k, k) = scale;
    g(l, l) = -scale * l;
    return g;
  }
  int offset = index - (n - 1);
  const bool antisym = offset >= symmetric_count(n);
  if (antisym) offset -= symmetric_count(n);
  for (int k = 0; k < n; ++k)
    for (int m = k + 1; m < n; ++m) {
      if (offset-- != 0) continue;
      if (antisym) {
        g(k, m) = Complex(0.0, -1.0);
        g(m, k) = Complex(0.0, 1.0);
      } else {
        g(k, m) = 1.0;
        g(m, k) = 1.0;
      }
      return g;
    }
  throw DimensionError("generalized_gellmann: index out of range");
}

/// The n^2-1 generators only; call structure_constants() to fill f and d.
inline GeneratorSet gellmann(int n) {
  if (n < 2) {
    std::ostringstream os;
    os << "gellmann: n must be >= 2, got " << n;
    throw DomainError(os.str());
  }
  GeneratorSet gs;
  gs.n = n;
  gs.lambdas.reserve(static_cast<std::size_t>(n) * n - 1);
  for (int i = 0; i < n * n - 1; ++i) gs.lambdas.push_back(generalized_gellmann(n, i));
  return gs;
}

/// f_ijk = tr([l_i,l_j] l_k)/(4i), d_ijk = tr({l_i,l_j} l_k)/4.
inline void structure_constants(GeneratorSet& gs) {
  const int m = gs.count();
  gs.f = Tensor3(m);
  gs.d = Tensor3(m);
  constexpr double kImagTol = 1e-10;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const ComplexMatrix prod_ij = gs.lambdas[i] * gs.lambdas[j];
      const ComplexMatrix prod_ji = gs.lambdas[j] * gs.lambdas[i];
      for (int k = 0; k < m; ++k) {
        // tr(X l_k) without forming the product
        const Complex t_ij = (prod_ij.transpose().cwiseProduct(gs.lambdas[k])).sum();
        const Complex t_ji = (prod_ji.transpose().cwiseProduct(gs.lambdas[k])).sum();
        const Complex fv = (t_ij - t_ji) / Complex(0.0, 4.0);
        const Complex dv = (t_ij + t_ji) / 4.0;
        if (std::abs(fv.imag()) > kImagTol || std::abs(dv.imag()) > kImagTol)
          throw ConsistencyError("structure_constants: non-real structure constant");
        gs.f(i, j, k) = fv.real();
        gs.d(i, j, k) = dv.real();
      }
    }
}

inline GeneratorSet gellmann_with_constants(int n) {
  GeneratorSet gs = gellmann(n);
  structure_constants(gs);
  return gs;
}

/// sum_k c_k lambda_k
inline ComplexMatrix combine(const GeneratorSet& gs, const RealVector& coeffs) {
  if (coeffs.size() != gs.count()) throw DimensionError("combine: coefficient count mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(gs.n, gs.n);
  for (int k = 0; k < gs.count(); ++k) out += coeffs(k) * gs.lambdas[k];
  return out;
}

/// Max over (i,j) of || l_i l_j - (i f_ijk l_k + d_ijk l_k + (2/n) delta_ij I) ||_F.
inline double product_identity_residual(const GeneratorSet& gs) {
  const int m = gs.count();
  const ComplexMatrix id = ComplexMatrix::Identity(gs.n, gs.n);
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ComplexMatrix rhs = (i == j ? 2.0 / gs.n : 0.0) * id;
      for (int k = 0; k < m; ++k)
        rhs += Complex(gs.d(i, j, k), gs.f(i, j, k)) * gs.lambdas[k];
      worst = std::max(worst, hs_norm(gs.lambdas[i] * gs.lambdas[j] - rhs));
    }
  return worst;
}

/// Max residual of [l_i,l_j] = 2i f_ijk l_k and {l_i,l_j} = 2 d_ijk l_k + (4/n) delta_ij I.
inline double commutation_identity_residual(const GeneratorSet& gs) {
  const int m = gs.count();
  const ComplexMatrix id = ComplexMatrix::Identity(gs.n, gs.n);
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ComplexMatrix comm = ComplexMatrix::Zero(gs.n, gs.n);
      ComplexMatrix anti = (i == j ? 4.0 / gs.n : 0.0) * id;
      for (int k = 0; k < m; ++k) {
        comm += Complex(0.0, 2.0 * gs.f(i, j, k)) * gs.lambdas[k];
        anti += 2.0 * gs.d(i, j, k) * gs.lambdas[k];
      }
      worst = std::max(worst, hs_norm(commutator(gs.lambdas[i], gs.lambdas[j]) - comm));
      worst = std::max(worst, hs_norm(anticommutator(gs.lambdas[i], gs.lambdas[j]) - anti));
    }
  return worst;
}

/// The eight Gell-Mann matrices in the textbook labelling (lambda_3 and
/// lambda_8 diagonal), which differs from the generalized ordering above.
inline std::vector<ComplexMatrix> gellmann3_textbook() {
  std::vector<ComplexMatrix> l(8, ComplexMatrix::Zero(3, 3));
  const Complex i(0.0, 1.0);
  l[0](0, 1) = l[0](1, 0) = 1.0;
  l[1](0, 1) = -i;
  l[1](1, 0) = i;
  l[2](0, 0) = 1.0;
  l[2](1, 1) = -1.0;
  l[3](0, 2) = l[3](2, 0) = 1.0;
  l[4](0, 2) = -i;
  l[4](2, 0) = i;
  l[5](1, 2) = l[5](2, 1) = 1.0;
  l[6](1, 2) = -i;
  l[6](2, 1) = i;
  const double s = 1.0 / std::sqrt(3.0);
  l[7](0, 0) = s;
  l[7](1, 1) = s;
  l[7](2, 2) = -2.0 * s;
  return l;
}

// ---------------------------------------------------------------------------
// Weyl basis

struct WeylBasis {
  int d = 0;
  std::vector<ComplexMatrix> u;     ///< u[n*d + m] = u_{nm}
  std::vector<ComplexMatrix> theta; ///< theta_j = |j><j|

  const ComplexMatrix& at(int n, int m) const { return u[static_cast<std::size_t>(n) * d + m]; }
};

inline Complex root_of_unity(int d, long k) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % d) / d;
  return {std::cos(angle), std::sin(angle)};
}

/// u_{nm} = sum_j w^{jn} |j><j+m mod d|, w = exp(2 pi i / d).
inline ComplexMatrix weyl_operator(int d, int n, int m) {
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) u(j, (j + m) % d) = root_of_unity(d, static_cast<long>(j) * n);
  return u;
}

inline std::vector<ComplexMatrix> theta_matrices(int d) {
  if (d < 2) throw DomainError("theta_matrices: d must be >= 2");
  std::vector<ComplexMatrix> out;
  for (int j = 0; j < d; ++j) {
    ComplexMatrix t = ComplexMatrix::Zero(d, d);
    t(j, j) = 1.0;
    out.push_back(std::move(t));
  }
  return out;
}

inline WeylBasis weyl_basis(int d) {
  if (d < 2) throw DomainError("weyl_basis: d must be >= 2");
  WeylBasis wb;
  wb.d = d;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) wb.u.push_back(weyl_operator(d, n, m));
  wb.theta = theta_matrices(d);
  return wb;
}

/// theta_j rebuilt as the discrete Fourier combination
/// (1/d) sum_k exp(2 pi i (d - k j)/d) u_{k0}.
inline ComplexMatrix theta_fourier(const WeylBasis& wb, int j) {
  const int d = wb.d;
  ComplexMatrix t = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const long exponent = static_cast<long>(d) - static_cast<long>(k) * j;
    const long wrapped = ((exponent % d) + d) % d;
    t += root_of_unity(d, wrapped) * wb.at(k, 0);
  }
  return t / static_cast<double>(d);
}

} // namespace qcorr
