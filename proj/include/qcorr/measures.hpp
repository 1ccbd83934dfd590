#pragma once

// Quantumness measures: skew information, local quantum uncertainty (LQU),
// Hilbert-Schmidt geometric discord / measurement-induced nonlocality (MIN)
// bounds, scaled discord and negativity.

#include <qcorr/linalg.hpp>
#include <qcorr/ortho_states.hpp>
#include <qcorr/sun_algebra.hpp>

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace qcorr {

// ---------------------------------------------------------------------------
// Skew information and LQU

/// -1/2 tr([sqrt(rho), K]^2)
inline double skew_information(const ComplexMatrix& rho, const ComplexMatrix& k) {
  require_square(rho, "skew_information");
  if (k.rows() != rho.rows() || k.cols() != rho.cols())
    throw DimensionError("skew_information: observable and state dimensions differ");
  const ComplexMatrix comm = commutator(psd_sqrt(rho), k);
  return -0.5 * (comm * comm).trace().real();
}

/// <K^2> - <K>^2
inline double variance(const ComplexMatrix& rho, const ComplexMatrix& k) {
  const double mean = (rho * k).trace().real();
  return (rho * k * k).trace().real() - mean * mean;
}

/// w_ij = tr(sqrt(rho) (l_i (x) I) sqrt(rho) (l_j (x) I)); real symmetric.
using WMatrix = RealMatrix;

inline WMatrix w_matrix(const ComplexMatrix& rho, const GeneratorSet& gs) {
  require_square(rho, "w_matrix");
  if (rho.rows() % gs.n != 0) throw DimensionError("w_matrix: state dimension not divisible by n");
  const int nb = static_cast<int>(rho.rows()) / gs.n;
  const ComplexMatrix root = psd_sqrt(rho);
  const ComplexMatrix id = ComplexMatrix::Identity(nb, nb);
  const int m = gs.count();
  std::vector<ComplexMatrix> y;
  y.reserve(m);
  for (int i = 0; i < m; ++i) y.push_back(root * kron(gs.lambdas[i], id));
  WMatrix w(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const Complex v = (y[i].transpose().cwiseProduct(y[j])).sum();
      if (std::abs(v.imag()) > 1e-9) throw ConsistencyError("w_matrix: complex entry");
      w(i, j) = w(j, i) = v.real();
    }
  return w;
}

/// Closed form for a qubit on side A: 1 - lambda_max(W) with W from Pauli matrices.
inline double lqu_2xn(const ComplexMatrix& rho, int nb) {
  require_dims(rho, {2, nb}, "lqu_2xn");
  const GeneratorSet pauli = gellmann(2);
  const WMatrix w = w_matrix(rho, pauli);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(w, Eigen::EigenvaluesOnly);
  return 1.0 - solver.eigenvalues().maxCoeff();
}

/// The two distinct eigenvalues of W for the invariant family:
/// first on diagonal+symmetric generators, second on antisymmetric ones.
inline std::pair<double, double> w_eigenvalues_ortho(const OrthoState& s) {
  const SqrtCoefficients r = sqrt_coeffs(s);
  const double common = s.n() * r.a1 * r.a1 + 2.0 * r.a1 * r.b1 + 2.0 * r.a1 * r.c1;
  return {2.0 * (common + 2.0 * r.b1 * r.c1), 2.0 * (common - 2.0 * r.b1 * r.c1)};
}

/// LQU for the fixed-spectrum observable family: 2/n - lambda_max(W).
inline double lqu_ortho(const OrthoState& s) {
  require_physical(s, "lqu_ortho");
  const auto [plus, minus] = w_eigenvalues_ortho(s);
  return 2.0 / s.n() - std::max(plus, minus);
}

/// +1 when the diagonal/symmetric eigenvalue of W is the larger one, -1 otherwise.
inline int lqu_ortho_branch(const OrthoState& s) {
  const auto [plus, minus] = w_eigenvalues_ortho(s);
  return plus >= minus ? 1 : -1;
}

/// Two-qutrit Werner slice (c = 0), b in [-1/6, 1/12].
inline double lqu_werner(double b) {
  detail::require_in_range(b, werner_range(3), "lqu_werner");
  return (1.0 - std::sqrt(std::max(0.0, 1.0 - 12.0 * b)) * std::sqrt(std::max(0.0, 1.0 + 6.0 * b))) / 3.0 - b;
}

/// Two-qutrit isotropic slice (b = 0), c in [-1/24, 1/3].
inline double lqu_isotropic(double c) {
  detail::require_in_range(c, isotropic_range(3), "lqu_isotropic");
  return 4.0 / 27.0 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 3.0 * c)) * std::sqrt(std::max(0.0, 1.0 + 24.0 * c))) +
         14.0 / 9.0 * c;
}

/// Fixed spectrum of the observable family: the integers -n/2..n/2 (without 0
/// for even n) rescaled so that the sum of squares is 2, i.e. tr K^2 = 2 as for
/// any unit combination of generators. n = 2 gives {-1, 1}, n = 3 gives {-1, 0, 1}.
inline RealVector fixed_spectrum(int n) {
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = (n % 2 == 1) ? i - (n - 1) / 2 : (i < n / 2 ? i - n / 2 : i - n / 2 + 1);
  return v * std::sqrt(2.0 / v.squaredNorm());
}

/// Local observable K = s . lambda with a prescribed spectrum.
struct SpectrumObservable {
  int n = 0;
  RealVector s;
  ComplexMatrix k;
  RealVector target_spectrum;

  /// Largest deviation between the sorted eigenvalues of K and the target.
  double spectrum_error() const {
    RealVector ev = herm_eig(k).eigenvalues;
    RealVector target = target_spectrum;
    std::sort(target.data(), target.data() + target.size());
    return (ev - target).cwiseAbs().maxCoeff();
  }
};

inline SpectrumObservable make_spectrum_observable(const GeneratorSet& gs, const RealVector& s,
                                                   const RealVector& target) {
  if (std::abs(s.norm() - 1.0) > 1e-12) throw DomainError("make_spectrum_observable: |s| must be 1");
  if (target.size() != gs.n) throw DimensionError("make_spectrum_observable: spectrum size must be n");
  return {gs.n, s, combine(gs, s), target};
}

/// Cubic constraint on s (textbook Gell-Mann labelling, |s| = 1) equivalent to
/// det(s . lambda) = 0, i.e. spectrum {-1, 0, 1}. Includes the s8^3 / (3 sqrt 3)
/// term that the frequently quoted form omits.
inline double spectrum_constraint_residual(const RealVector& s) {
  if (s.size() != 8) throw DimensionError("spectrum_constraint_residual: expects 8 coefficients");
  const double r3 = std::sqrt(3.0);
  const double s8 = s(7);
  const double quoted = s(2) * s(3) * s(3) + s(2) * s(4) * s(4) - s(2) * s(5) * s(5) - s(2) * s(6) * s(6) +
                        2.0 * s(0) * s(3) * s(5) + 2.0 * s(1) * s(4) * s(5) - 2.0 * s(1) * s(3) * s(6) +
                        2.0 * s(0) * s(4) * s(6) +
                        s8 * (3.0 * s(0) * s(0) + 3.0 * s(1) * s(1) + 3.0 * s(2) * s(2) - 1.0) / r3;
  return quoted + s8 * s8 * s8 / (3.0 * r3);
}

/// The quoted form without the s8^3 term; agrees with the full residual when s8 = 0.
inline double spectrum_constraint_residual_quoted(const RealVector& s) {
  return spectrum_constraint_residual(s) - s(7) * s(7) * s(7) / (3.0 * std::sqrt(3.0));
}

// ---------------------------------------------------------------------------
// Geometric discord and MIN bounds

inline double normalization_factor(int n) { return n / (n - 1.0); }

/// Lower bound on geometric discord from the Bloch vector and correlation matrix:
/// (1/n^2)[(2/n)|x|^2 + (4/n^2)|T|^2 - sum of the n-1 largest eigenvalues of G1],
/// G1 = (2/n) x x^t + (4/n^2) T T^t.
inline double gd_lower_bound(const BlochCorrelation& bc, int n) {
  const double nn = n;
  const RealMatrix g1 = (2.0 / nn) * bc.x * bc.x.transpose() + (4.0 / (nn * nn)) * bc.t * bc.t.transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g1, Eigen::EigenvaluesOnly);
  const RealVector ev = solver.eigenvalues(); // ascending
  double top = 0.0;
  for (int k = 0; k < n - 1 && k < ev.size(); ++k) top += ev(ev.size() - 1 - k);
  const double total = (2.0 / nn) * bc.x.squaredNorm() + (4.0 / (nn * nn)) * bc.t.squaredNorm();
  return (total - top) / (nn * nn);
}

/// Upper bound on MIN: (4/n^4) * sum of the n^2 - n largest eigenvalues of T T^t.
inline double min_upper_bound(const BlochCorrelation& bc, int n) {
  const RealMatrix g2 = bc.t * bc.t.transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g2, Eigen::EigenvaluesOnly);
  const RealVector ev = solver.eigenvalues();
  double top = 0.0;
  for (int k = 0; k < n * n - n && k < ev.size(); ++k) top += ev(ev.size() - 1 - k);
  const double n2 = static_cast<double>(n) * n;
  return 4.0 * top / (n2 * n2);
}

/// Closed-form lower bound for the invariant family.
inline double gd_lower_bound(const OrthoState& s) {
  const double n = s.n(), b = s.b(), c = s.c();
  const double base = (n * n - n) * (b * b + c * c);
  return b * c < 0 ? base + 4.0 * (n - 1.0) * b * c : base;
}

/// Closed-form upper bound for the invariant family.
inline double min_upper_bound(const OrthoState& s) {
  const double n = s.n(), b = s.b(), c = s.c();
  const double base = (n * n - n) * (b * b + c * c);
  return b * c >= 0 ? base + 4.0 * (n - 1.0) * b * c : base;
}

struct FfhatBounds {
  double g1 = 0;
  double g2 = 0;
  bool in_r1 = false; ///< (-1 + f(1+n) - fhat)(-1 - f + (1+n) fhat) >= 0, where g1 <= D_G <= N <= g2

  double lower() const { return in_r1 ? g1 : g2; }
  double upper() const { return in_r1 ? g2 : g1; }
};

/// The bound pair written directly in (f, fhat).
inline FfhatBounds bounds_ffhat(const OrthoState& s) {
  const double n = s.n(), f = s.f(), h = s.fhat();
  FfhatBounds out;
  out.g1 = (2.0 - 2.0 * n * (h + f) - 4.0 * (1.0 + n) * f * h + (n * n + 2.0 * n + 2.0) * (f * f + h * h)) /
           (n * (n - 1.0) * (n + 2.0) * (n + 2.0));
  out.g2 = (2.0 - 2.0 * (f - h) * (f - h) - 2.0 * n * (h + f) + (f * f + h * h) * n * n) /
           (n * n * (n - 1.0) * (n + 2.0));
  out.in_r1 = (-1.0 + f * (1.0 + n) - h) * (-1.0 - f + (1.0 + n) * h) >= 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Scaled discord

/// beta_A = D_max / (2 - 2 sqrt(1 - D_max / alpha_A)), alpha_A = n/(n-1).
inline double scaled_discord_beta(int n, double dg_max) {
  const double alpha = normalization_factor(n);
  const double denom = 2.0 - 2.0 * std::sqrt(std::max(0.0, 1.0 - dg_max / alpha));
  if (!(denom > 0.0)) throw DomainError("scaled_discord_beta: maximum discord must be positive");
  return dg_max / denom;
}

/// D_T = beta_A [2 - 2 sqrt(1 - D_G / (alpha_A tr rho^2))].
inline double scaled_discord_from_dg(double dg, double purity, int n, double dg_max) {
  const double alpha = normalization_factor(n);
  const double radicand = 1.0 - dg / (alpha * purity);
  if (radicand < -1e-10) {
    std::ostringstream os;
    os << "scaled_discord_from_dg: D_G=" << dg << " exceeds alpha*purity=" << alpha * purity;
    throw DomainError(os.str());
  }
  return scaled_discord_beta(n, dg_max) * (2.0 - 2.0 * std::sqrt(std::max(0.0, radicand)));
}

inline double purity(const OrthoState& s) {
  const auto ev = s.spectrum();
  const auto mult = s.multiplicities();
  double p = 0.0;
  for (int k = 0; k < 3; ++k) p += mult[k] * ev[k] * ev[k];
  return p;
}

// ---------------------------------------------------------------------------
// Negativity

/// (||rho^{T_A}||_1 - 1)/2, the sum of |negative eigenvalues| of rho^{T_A}.
inline double negativity(const ComplexMatrix& rho, Dims dims) {
  const RealVector ev = herm_eig(partial_transpose(rho, dims, Party::A)).eigenvalues;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < 0) sum -= ev(i);
  return sum;
}

inline double min_partial_transpose_eigenvalue(const ComplexMatrix& rho, Dims dims) {
  return herm_eig(partial_transpose(rho, dims, Party::A)).eigenvalues.minCoeff();
}

// ---------------------------------------------------------------------------

struct MeasureReport {
  int n = 0;
  double f = 0, fhat = 0;
  double a = 0, b = 0, c = 0;
  double lqu = 0;
  double dg_lower = 0;
  double min_upper = 0;
  double dg_normalized_lower = 0;
  double min_normalized_upper = 0;
  double scaled_discord_lower = 0;
  double scaled_discord_upper = 0;
  double negativity = 0;
  bool physical = false;
  bool npt = false;
};

/// Every closed-form measure for one physical state. dg_max is the maximum
/// geometric discord used to fix the scaled-discord constant.
inline MeasureReport measure_report(const OrthoState& s, double dg_max) {
  require_physical(s, "measure_report");
  MeasureReport r;
  r.n = s.n();
  r.f = s.f();
  r.fhat = s.fhat();
  r.a = s.a();
  r.b = s.b();
  r.c = s.c();
  r.physical = true;
  r.lqu = lqu_ortho(s);
  r.dg_lower = gd_lower_bound(s);
  r.min_upper = min_upper_bound(s);
  r.dg_normalized_lower = normalization_factor(s.n()) * r.dg_lower;
  r.min_normalized_upper = normalization_factor(s.n()) * r.min_upper;
  const double p = purity(s);
  r.scaled_discord_lower = scaled_discord_from_dg(r.dg_lower, p, s.n(), dg_max);
  r.scaled_discord_upper = scaled_discord_from_dg(r.min_upper, p, s.n(), dg_max);
  const ComplexMatrix rho = density_matrix(s);
  const Dims dims{s.n(), s.n()};
  r.negativity = negativity(rho, dims);
  r.npt = min_partial_transpose_eigenvalue(rho, dims) < -1e-10;
  return r;
}

} // namespace qcorr
