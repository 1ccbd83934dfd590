#pragma once

// States of two n-level systems that commute with every O (x) O, O orthogonal:
//
//   rho = a I + b F + c Fhat,      n (n a + b + c) = 1
//
// with F the flip operator and Fhat = n |Phi+><Phi+|. The canonical
// coordinates are the expectation values f = tr(rho F), fhat = tr(rho Fhat),
// in which the positivity region is the triangle
//
//   0 <= fhat,   f <= 1,   fhat <= n (f + 1) / 2.

#include <qcorr/linalg.hpp>
#include <qcorr/sun_algebra.hpp>

#include <array>
#include <cassert>
#include <limits>
#include <sstream>
#include <string>

namespace qcorr {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPhysicalTol = 1e-10;

inline ComplexMatrix flip_op(int n) {
  ComplexMatrix f = ComplexMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(i * n + j, j * n + i) = 1.0;
  return f;
}

inline ComplexMatrix fhat_op(int n) {
  ComplexMatrix f = ComplexMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(i * n + i, j * n + j) = 1.0;
  return f;
}

/// Orthogonal projectors U = Fhat/n, V = (I - F)/2, W = (I + F)/2 - Fhat/n.
struct ProjectorsUVW {
  ComplexMatrix u;
  ComplexMatrix v;
  ComplexMatrix w;
};

inline ProjectorsUVW projectors_uvw(int n) {
  const ComplexMatrix id = ComplexMatrix::Identity(n * n, n * n);
  const ComplexMatrix flip = flip_op(n);
  const ComplexMatrix fhat = fhat_op(n);
  return {fhat / n, 0.5 * (id - flip), 0.5 * (id + flip) - fhat / n};
}

struct PhysicalCheck {
  bool physical = false;
  double margin = 0.0;  ///< min slack of the three inequalities
  std::string violated; ///< first violated inequality, empty if physical
};

class OrthoState {
public:
  static OrthoState from_abc(int n, double a, double b, double c) {
    require_n(n);
    const double trace = n * (n * a + b + c);
    if (std::abs(trace - 1.0) > kTraceTol) {
      std::ostringstream os;
      os << "from_abc: trace condition n(na+b+c)=1 violated (got " << trace << ")";
      throw DomainError(os.str());
    }
    OrthoState s;
    s.n_ = n;
    s.a_ = a;
    s.b_ = b;
    s.c_ = c;
    s.f_ = n * (a + n * b + c);
    s.fhat_ = n * (a + b + n * c);
    return s;
  }

  /// Solves (1, f, fhat) = n M (a, b, c) with M = (n-1) I + J.
  static OrthoState from_ffhat(int n, double f, double fhat) {
    require_n(n);
    OrthoState s;
    s.n_ = n;
    s.f_ = f;
    s.fhat_ = fhat;
    const double mean = (1.0 + f + fhat) / (n + 2.0);
    const double scale = 1.0 / (n * (n - 1.0));
    s.a_ = scale * (1.0 - mean);
    s.b_ = scale * (f - mean);
    s.c_ = scale * (fhat - mean);
    return s;
  }

  int n() const { return n_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double f() const { return f_; }
  double fhat() const { return fhat_; }

  /// Eigenvalues on the ranges of U, V, W.
  std::array<double, 3> spectrum() const {
    const double n = n_;
    return {fhat_ / n, (1.0 - f_) / (n * (n - 1.0)),
            (n + n * f_ - 2.0 * fhat_) / (n * (n - 1.0) * (n + 2.0))};
  }

  /// Ranks of U, V, W.
  std::array<int, 3> multiplicities() const {
    return {1, n_ * (n_ - 1) / 2, n_ * (n_ + 1) / 2 - 1};
  }

private:
  static void require_n(int n) {
    if (n < 2) throw DomainError("OrthoState: subsystem dimension must be >= 2");
  }

  int n_ = 0;
  double a_ = 0, b_ = 0, c_ = 0;
  double f_ = 0, fhat_ = 0;
};

inline OrthoState maximally_mixed(int n) { return OrthoState::from_ffhat(n, 1.0 / n, 1.0 / n); }

inline PhysicalCheck is_physical(int n, double f, double fhat) {
  const double s1 = fhat;
  const double s2 = 1.0 - f;
  const double s3 = n * (f + 1.0) / 2.0 - fhat;
  PhysicalCheck out;
  out.margin = std::min({s1, s2, s3});
  out.physical = out.margin >= -kPhysicalTol;
  if (s1 < -kPhysicalTol)
    out.violated = "0 ≤ fhat violated";
  else if (s2 < -kPhysicalTol)
    out.violated = "f ≤ 1 violated";
  else if (s3 < -kPhysicalTol)
    out.violated = "fhat ≤ n(f+1)/2 violated";
  return out;
}

inline PhysicalCheck is_physical(const OrthoState& s) { return is_physical(s.n(), s.f(), s.fhat()); }

inline void require_physical(const OrthoState& s, const char* who) {
  const PhysicalCheck check = is_physical(s);
  if (!check.physical) {
    std::ostringstream os;
    os << who << ": state (f=" << s.f() << ", fhat=" << s.fhat() << ") is not physical: "
       << check.violated << " (margin " << check.margin << ")";
    throw NonPhysicalError(os.str(), check.margin, check.violated);
  }
}

/// a I + b F + c Fhat with no positivity check.
inline ComplexMatrix ortho_operator(int n, double a, double b, double c) {
  ComplexMatrix rho = ComplexMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n * n; ++i) rho(i, i) += a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rho(i * n + j, j * n + i) += b;
      rho(i * n + i, j * n + j) += c;
    }
  return rho;
}

/// The same operator assembled from spectral weights on U, V, W.
inline ComplexMatrix spectral_density_matrix(const OrthoState& s) {
  const ProjectorsUVW p = projectors_uvw(s.n());
  const auto ev = s.spectrum();
  return ev[0] * p.u + ev[1] * p.v + ev[2] * p.w;
}

inline ComplexMatrix density_matrix(const OrthoState& s) {
  require_physical(s, "density_matrix");
  ComplexMatrix rho = ortho_operator(s.n(), s.a(), s.b(), s.c());
  assert(max_abs_entry(rho - spectral_density_matrix(s)) < 1e-12);
  return rho;
}

struct SqrtCoefficients {
  double a1 = 0;
  double b1 = 0;
  double c1 = 0;
};

/// sqrt(rho) = a1 I + b1 F + c1 Fhat, from the square roots of the U, V, W weights.
inline SqrtCoefficients sqrt_coeffs(const OrthoState& s) {
  constexpr double kRadicandTol = 1e-12;
  const auto ev = s.spectrum();
  std::array<double, 3> root{};
  for (int k = 0; k < 3; ++k) {
    if (ev[k] < -kRadicandTol) {
      std::ostringstream os;
      os << "sqrt_coeffs: negative radicand " << ev[k] << " (state outside positivity region)";
      throw NonPhysicalError(os.str(), ev[k], "radicand ≥ 0");
    }
    root[k] = std::sqrt(std::max(ev[k], 0.0));
  }
  const double n = s.n();
  return {0.5 * (root[1] + root[2]), 0.5 * (root[2] - root[1]), (root[0] - root[2]) / n};
}

struct BlochCorrelation {
  RealVector x; ///< x_k = (n/2) tr(rho l_k (x) I)
  RealMatrix t; ///< t_kl = (n^2/4) tr(rho l_k (x) l_l)
};

/// Closed form for the invariant family: x = 0 and T diagonal, with
/// t_kk = (n^2/2)(b + c) on diagonal and symmetric generators and
/// (n^2/2)(b - c) on antisymmetric ones.
inline BlochCorrelation bloch_correlation(const OrthoState& s, const GeneratorSet& gs) {
  require_physical(s, "bloch_correlation");
  if (gs.n != s.n()) throw DimensionError("bloch_correlation: generator set dimension mismatch");
  const int m = gs.count();
  const double n2 = static_cast<double>(s.n()) * s.n();
  BlochCorrelation out{RealVector::Zero(m), RealMatrix::Zero(m, m)};
  for (int k = 0; k < m; ++k) {
    const bool anti = generator_block(s.n(), k) == GeneratorBlock::Antisymmetric;
    out.t(k, k) = 0.5 * n2 * (anti ? s.b() - s.c() : s.b() + s.c());
  }
  return out;
}

/// Bloch vector and correlation matrix of any n (x) n operator by direct traces.
inline BlochCorrelation bloch_correlation_direct(const ComplexMatrix& rho, const GeneratorSet& gs) {
  const int n = gs.n;
  require_dims(rho, {n, n}, "bloch_correlation_direct");
  const int m = gs.count();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  BlochCorrelation out{RealVector::Zero(m), RealMatrix::Zero(m, m)};
  const auto tr_prod = [&](const ComplexMatrix& op) { return (rho.transpose().cwiseProduct(op)).sum().real(); };
  for (int k = 0; k < m; ++k) {
    out.x(k) = 0.5 * n * tr_prod(kron(gs.lambdas[k], id));
    for (int l = 0; l < m; ++l)
      out.t(k, l) = 0.25 * n * n * tr_prod(kron(gs.lambdas[k], gs.lambdas[l]));
  }
  return out;
}

struct ParameterRange {
  double lo;
  double hi;
};

/// Admissible b for the Werner slice (c = 0).
inline ParameterRange werner_range(int n) {
  return {-1.0 / (n * (n - 1.0)), 1.0 / (n * (n + 1.0))};
}

/// Admissible c for the isotropic slice (b = 0).
inline ParameterRange isotropic_range(int n) {
  return {-1.0 / (n * (n * n - 1.0)), 1.0 / n};
}

namespace detail {
inline void require_in_range(double v, ParameterRange r, const char* who) {
  if (v < r.lo - kPhysicalTol || v > r.hi + kPhysicalTol) {
    std::ostringstream os;
    os << who << ": parameter " << v << " outside admissible interval [" << r.lo << ", " << r.hi << "]";
    throw NonPhysicalError(os.str(), std::min(v - r.lo, r.hi - v), "parameter range");
  }
}
} // namespace detail

inline OrthoState werner(int n, double b) {
  detail::require_in_range(b, werner_range(n), "werner");
  return OrthoState::from_abc(n, (1.0 - n * b) / (static_cast<double>(n) * n), b, 0.0);
}

inline OrthoState isotropic(int n, double c) {
  detail::require_in_range(c, isotropic_range(n), "isotropic");
  return OrthoState::from_abc(n, (1.0 - n * c) / (static_cast<double>(n) * n), 0.0, c);
}

/// Euclidean projection of (f, fhat) onto the closed positivity triangle
/// with vertices (-1, 0), (1, 0), (1, n).
inline std::array<double, 2> project_to_physical(int n, double f, double fhat) {
  if (is_physical(n, f, fhat).margin >= 0.0) return {f, fhat};
  const std::array<std::array<double, 2>, 3> v{{{-1.0, 0.0}, {1.0, 0.0}, {1.0, static_cast<double>(n)}}};
  std::array<double, 2> best{};
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 3; ++e) {
    const auto& p = v[e];
    const auto& q = v[(e + 1) % 3];
    const double dx = q[0] - p[0], dy = q[1] - p[1];
    double t = ((f - p[0]) * dx + (fhat - p[1]) * dy) / (dx * dx + dy * dy);
    t = std::clamp(t, 0.0, 1.0);
    const std::array<double, 2> c{p[0] + t * dx, p[1] + t * dy};
    const double d2 = (c[0] - f) * (c[0] - f) + (c[1] - fhat) * (c[1] - fhat);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

} // namespace qcorr
