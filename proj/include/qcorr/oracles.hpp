#pragma once

// Brute-force optimizers used as independent checks of the closed forms.
//
// Every oracle searches over local unitaries U on party A with random
// restarts followed by derivative-free refinement. The refinement runs
// Nelder-Mead in a local chart U0 exp(i H(theta)) around the current point
// and re-centres the chart after each run. Restart r draws from its own
// generator seeded by (rng_seed, r), so results do not depend on scheduling.

#include <qcorr/linalg.hpp>
#include <qcorr/measures.hpp>
#include <qcorr/ortho_states.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>
#include <vector>

namespace qcorr {

struct OptimizerConfig {
  int seeds = 64;                  ///< random restarts
  std::uint64_t rng_seed = 20240601;
  int max_iters = 2000;            ///< Nelder-Mead iterations per restart
  double step_tol = 1e-10;
  double value_tol = 1e-9;

  void validate() const {
    if (seeds < 1) throw DomainError("OptimizerConfig: seeds must be >= 1");
    if (max_iters < 1) throw DomainError("OptimizerConfig: max_iters must be >= 1");
    if (!(step_tol > 0) || !(value_tol > 0)) throw DomainError("OptimizerConfig: tolerances must be > 0");
  }
};

struct OracleResult {
  double value = 0;
  std::vector<double> argmin_parameters; ///< optimal unitary, column-major (re, im) pairs
  int restarts_used = 0;
  bool converged = false;
  bool spectrum_constraint_ok = true;    ///< LQU only
  ComplexMatrix basis;                   ///< optimal unitary; columns are measurement vectors
  std::vector<double> best_history;      ///< best value after each restart
};

namespace detail {

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0;
  int iters = 0;
  bool converged = false;
};

/// Adaptive-parameter Nelder-Mead minimizer.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                    std::vector<double> x0, double step, int max_iters, double value_tol,
                                    double step_tol) {
  const int d = static_cast<int>(x0.size());
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / d;
  const double rho = 0.75 - 1.0 / (2.0 * d);
  const double sigma = 1.0 - 1.0 / d;

  std::vector<std::vector<double>> pts(d + 1, x0);
  std::vector<double> vals(d + 1);
  for (int i = 0; i < d; ++i) pts[i + 1][i] += step;
  for (int i = 0; i <= d; ++i) vals[i] = fn(pts[i]);

  std::vector<int> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);
  NelderMeadResult out;
  int it = 0;
  for (; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int l, int r) { return vals[l] < vals[r]; });
    const int best = order.front(), worst = order.back(), second = order[d - 1];

    double diameter = 0.0;
    for (int i = 0; i <= d; ++i)
      for (int k = 0; k < d; ++k) diameter = std::max(diameter, std::abs(pts[i][k] - pts[best][k]));
    if (vals[worst] - vals[best] <= 0.1 * value_tol || diameter <= step_tol) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= d; ++i)
      if (i != worst)
        for (int k = 0; k < d; ++k) centroid[k] += pts[i][k] / d;

    for (int k = 0; k < d; ++k) trial[k] = centroid[k] + alpha * (centroid[k] - pts[worst][k]);
    const double fr = fn(trial);
    if (fr < vals[best]) {
      for (int k = 0; k < d; ++k) trial2[k] = centroid[k] + gamma * (trial[k] - centroid[k]);
      const double fe = fn(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        vals[worst] = fe;
      } else {
        pts[worst] = trial;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = trial;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    for (int k = 0; k < d; ++k)
      trial2[k] = outside ? centroid[k] + rho * (trial[k] - centroid[k])
                          : centroid[k] + rho * (pts[worst][k] - centroid[k]);
    const double fc = fn(trial2);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = fc;
      continue;
    }
    for (int i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (int k = 0; k < d; ++k) pts[i][k] = pts[best][k] + sigma * (pts[i][k] - pts[best][k]);
      vals[i] = fn(pts[i]);
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  out.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
  out.fx = *best_it;
  out.iters = it;
  return out;
}

/// Block-diagonal exp(i H(theta)); each block of size k consumes k^2 coordinates.
inline ComplexMatrix chart_unitary(const std::vector<int>& blocks, const std::vector<double>& theta) {
  const int n = std::accumulate(blocks.begin(), blocks.end(), 0);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  std::size_t p = 0;
  int offset = 0;
  for (const int k : blocks) {
    ComplexMatrix h = ComplexMatrix::Zero(k, k);
    for (int j = 0; j < k; ++j) h(j, j) = theta[p++];
    for (int j = 0; j < k; ++j)
      for (int l = j + 1; l < k; ++l) {
        h(j, l) = Complex(theta[p], theta[p + 1]);
        h(l, j) = std::conj(h(j, l));
        p += 2;
      }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const RealVector& ev = solver.eigenvalues();
    ComplexVector phases(k);
    for (int j = 0; j < k; ++j) phases(j) = std::polar(1.0, ev(j));
    out.block(offset, offset, k, k) =
        solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    offset += k;
  }
  return out;
}

template <class Rng>
ComplexMatrix random_block_unitary(const std::vector<int>& blocks, Rng& rng) {
  const int n = std::accumulate(blocks.begin(), blocks.end(), 0);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  int offset = 0;
  for (const int k : blocks) {
    out.block(offset, offset, k, k) = random_unitary(k, rng);
    offset += k;
  }
  return out;
}

inline std::mt19937_64 child_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

/// Minimizes sign * objective(U) over U = base * blockdiag(unitaries).
inline OracleResult optimize_unitary(const std::function<double(const ComplexMatrix&)>& objective,
                                     const std::vector<int>& blocks, const ComplexMatrix& base,
                                     const OptimizerConfig& cfg, double sign) {
  cfg.validate();
  int coords = 0;
  for (const int k : blocks) coords += k * k;

  OracleResult result;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.seeds; ++r) {
    auto rng = child_rng(cfg.rng_seed, r);
    ComplexMatrix u = base * random_block_unitary(blocks, rng);
    double current = sign * objective(u);
    double step = 0.5;
    int budget = cfg.max_iters;
    bool converged = false;
    while (budget > 0) {
      const auto fn = [&](const std::vector<double>& theta) {
        return sign * objective(u * chart_unitary(blocks, theta));
      };
      const NelderMeadResult nm =
          nelder_mead(fn, std::vector<double>(coords, 0.0), step, budget, cfg.value_tol, cfg.step_tol);
      budget -= std::max(nm.iters, 1);
      const double improvement = current - nm.fx;
      if (nm.fx < current) {
        u = u * chart_unitary(blocks, nm.x);
        current = nm.fx;
      }
      if (nm.converged && improvement < cfg.value_tol) {
        converged = true;
        break;
      }
      step = std::max(0.5 * step, 1e-3);
    }
    if (current < best) {
      best = current;
      result.basis = u;
      result.converged = converged;
    }
    result.best_history.push_back(sign * best);
    ++result.restarts_used;
  }
  result.value = sign * best;
  for (Eigen::Index j = 0; j < result.basis.cols(); ++j)
    for (Eigen::Index i = 0; i < result.basis.rows(); ++i) {
      result.argmin_parameters.push_back(result.basis(i, j).real());
      result.argmin_parameters.push_back(result.basis(i, j).imag());
    }
  return result;
}

/// Skew information of rho and (U diag(spectrum) U^dagger) (x) I, with the
/// sqrt(rho) contraction precomputed into an nA^4 tensor.
class LquObjective {
public:
  LquObjective(const ComplexMatrix& rho, Dims dims, RealVector spectrum)
      : na_(dims.a), spectrum_(std::move(spectrum)), rho_a_(partial_trace(rho, dims, Party::A)),
        q_(static_cast<std::size_t>(na_) * na_ * na_ * na_) {
    const ComplexMatrix s = psd_sqrt(rho);
    const int nb = dims.b;
    // q[a,b,c,d] = sum_{x,y} S_{(a x),(b y)} S_{(c y),(d x)}
    for (int a = 0; a < na_; ++a)
      for (int b = 0; b < na_; ++b)
        for (int c = 0; c < na_; ++c)
          for (int d = 0; d < na_; ++d) {
            Complex acc = 0.0;
            for (int x = 0; x < nb; ++x)
              for (int y = 0; y < nb; ++y) acc += s(a * nb + x, b * nb + y) * s(c * nb + y, d * nb + x);
            q_[index(a, b, c, d)] = acc;
          }
  }

  ComplexMatrix observable(const ComplexMatrix& u) const {
    return u * spectrum_.cast<Complex>().asDiagonal() * u.adjoint();
  }

  double operator()(const ComplexMatrix& u) const {
    const ComplexMatrix k = observable(u);
    const Complex first = ((k * k).transpose().cwiseProduct(rho_a_)).sum();
    Complex second = 0.0;
    for (int a = 0; a < na_; ++a)
      for (int b = 0; b < na_; ++b)
        for (int c = 0; c < na_; ++c) {
          const Complex kbc = k(b, c);
          for (int d = 0; d < na_; ++d) second += kbc * k(d, a) * q_[index(a, b, c, d)];
        }
    return (first - second).real();
  }

private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * na_ + b) * na_ + c) * na_ + d;
  }
  int na_;
  RealVector spectrum_;
  ComplexMatrix rho_a_;
  std::vector<Complex> q_;
};

/// || rho - sum_k (P_k (x) I) rho (P_k (x) I) ||^2 with P_k = |u_k><u_k|.
class MeasurementDistance {
public:
  MeasurementDistance(const ComplexMatrix& rho, Dims dims)
      : rho_(rho), dims_(dims), purity_(rho.squaredNorm()) {}

  double operator()(const ComplexMatrix& u) const {
    const int na = dims_.a, nb = dims_.b;
    double kept = 0.0;
    ComplexMatrix block(nb, nb);
    for (int k = 0; k < na; ++k) {
      block.setZero();
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
          const Complex w = std::conj(u(i, k)) * u(j, k);
          block.noalias() += w * rho_.block(i * nb, j * nb, nb, nb);
        }
      kept += block.squaredNorm();
    }
    return purity_ - kept;
  }

private:
  ComplexMatrix rho_;
  Dims dims_;
  double purity_;
};

} // namespace detail

/// Measurement channel sum_k (P_k (x) I) rho (P_k (x) I) for the columns of basis.
inline ComplexMatrix measure_party_a(const ComplexMatrix& rho, Dims dims, const ComplexMatrix& basis) {
  require_dims(rho, dims, "measure_party_a");
  const ComplexMatrix id = ComplexMatrix::Identity(dims.b, dims.b);
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < dims.a; ++k) {
    const ComplexMatrix p = kron(basis.col(k) * basis.col(k).adjoint(), id);
    out += p * rho * p;
  }
  return out;
}

inline std::vector<ComplexMatrix> measurement_projectors(const ComplexMatrix& basis) {
  std::vector<ComplexMatrix> out;
  for (Eigen::Index k = 0; k < basis.cols(); ++k) out.push_back(basis.col(k) * basis.col(k).adjoint());
  return out;
}

/// Minimum skew information over K = U diag(spectrum) U^dagger (x) I. The
/// spectrum size fixes the dimension of party A.
inline OracleResult oracle_lqu(const ComplexMatrix& rho, const RealVector& spectrum, const OptimizerConfig& cfg) {
  require_square(rho, "oracle_lqu");
  const int na = static_cast<int>(spectrum.size());
  if (na < 2 || rho.rows() % na != 0) throw DimensionError("oracle_lqu: spectrum size does not divide state dimension");
  RealVector sorted = spectrum;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  for (int i = 1; i < na; ++i)
    if (sorted(i) - sorted(i - 1) < 1e-9) throw DomainError("oracle_lqu: spectrum must be non-degenerate");

  const Dims dims{na, static_cast<int>(rho.rows()) / na};
  const detail::LquObjective objective(rho, dims, spectrum);
  OracleResult r = detail::optimize_unitary(objective, {na}, ComplexMatrix::Identity(na, na), cfg, 1.0);
  const RealVector ev = herm_eig(objective.observable(r.basis)).eigenvalues;
  r.spectrum_constraint_ok = (ev - sorted).cwiseAbs().maxCoeff() < 1e-8;
  return r;
}

/// Geometric discord: min over von Neumann measurements on A of ||rho - Pi(rho)||^2.
inline OracleResult oracle_gd(const ComplexMatrix& rho, Dims dims, const OptimizerConfig& cfg) {
  require_dims(rho, dims, "oracle_gd");
  const detail::MeasurementDistance objective(rho, dims);
  return detail::optimize_unitary(objective, {dims.a}, ComplexMatrix::Identity(dims.a, dims.a), cfg, 1.0);
}

/// Measurement-induced nonlocality: max of the same distance over measurements
/// that leave rho_A invariant. Such measurements are diagonal in an eigenbasis
/// of rho_A, so the search runs over unitaries that are block diagonal on its
/// eigenspaces.
inline OracleResult oracle_min(const ComplexMatrix& rho, Dims dims, const OptimizerConfig& cfg) {
  require_dims(rho, dims, "oracle_min");
  const ComplexMatrix rho_a = partial_trace(rho, dims, Party::A);
  const EigenDecomposition e = herm_eig(rho_a);
  std::vector<int> blocks{1};
  for (int i = 1; i < dims.a; ++i) {
    if (e.eigenvalues(i) - e.eigenvalues(i - 1) < 1e-8)
      ++blocks.back();
    else
      blocks.push_back(1);
  }
  const detail::MeasurementDistance objective(rho, dims);
  OracleResult r = detail::optimize_unitary(objective, blocks, e.eigenvectors, cfg, -1.0);
  ComplexMatrix disturbed = ComplexMatrix::Zero(dims.a, dims.a);
  for (const ComplexMatrix& p : measurement_projectors(r.basis)) disturbed += p * rho_a * p;
  if (hs_norm(disturbed - rho_a) > 1e-8) r.converged = false;
  return r;
}

struct DgMaxResult {
  double value = 0;
  double f = 0;
  double fhat = 0;
  double boundary_margin = 0; ///< physicality margin at the argmax; 0 on the boundary
};

/// Maximum of oracle_gd over the physical (f, fhat) triangle: a grid scan
/// followed by pattern-search refinement inside the region.
inline DgMaxResult oracle_dg_max(int n, const OptimizerConfig& cfg, int resolution = 6) {
  if (n < 2) throw DomainError("oracle_dg_max: n must be >= 2");
  const auto evaluate = [&](double f, double fhat) {
    const OrthoState s = OrthoState::from_ffhat(n, f, fhat);
    return oracle_gd(density_matrix(s), {n, n}, cfg).value;
  };
  DgMaxResult best;
  best.value = -1.0;
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      const double f = -1.0 + 2.0 * i / (resolution - 1);
      const double fhat = static_cast<double>(n) * j / (resolution - 1);
      if (!is_physical(n, f, fhat).physical) continue;
      const double v = evaluate(f, fhat);
      if (v > best.value) best = {v, f, fhat, 0.0};
    }
  double h = 1.0 / (resolution - 1);
  while (h > 1e-3) {
    bool moved = false;
    for (const auto& [df, dh] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
      const auto p = project_to_physical(n, best.f + h * df, best.fhat + h * n * dh);
      const double v = evaluate(p[0], p[1]);
      if (v > best.value + cfg.value_tol) {
        best = {v, p[0], p[1], 0.0};
        moved = true;
      }
    }
    if (!moved) h *= 0.5;
  }
  best.boundary_margin = is_physical(n, best.f, best.fhat).margin;
  return best;
}

/// oracle_dg_max memoized per (n, config); safe for concurrent callers.
inline double dg_max_cached(int n, const OptimizerConfig& cfg) {
  using Key = std::tuple<int, int, std::uint64_t, int>;
  static std::mutex mutex;
  static std::map<Key, double> cache;
  const Key key{n, cfg.seeds, cfg.rng_seed, cfg.max_iters};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double value = oracle_dg_max(n, cfg).value;
  std::lock_guard lock(mutex);
  return cache.emplace(key, value).first->second;
}

} // namespace qcorr
