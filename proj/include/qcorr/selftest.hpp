#pragma once

// Algebraic identity suite run by `qcorr selftest`.

#include <qcorr/measures.hpp>
#include <qcorr/oracles.hpp>
#include <qcorr/ortho_states.hpp>
#include <qcorr/sun_algebra.hpp>

#include <random>
#include <string>
#include <vector>

namespace qcorr {

struct IdentityCheck {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool passed() const { return residual <= tolerance; }
};

/// Uniform sample from the physical (f, fhat) triangle.
template <class Rng>
OrthoState random_physical_state(int n, Rng& rng) {
  std::uniform_real_distribution<double> uf(-1.0, 1.0);
  std::uniform_real_distribution<double> uh(0.0, static_cast<double>(n));
  for (;;) {
    const double f = uf(rng), fhat = uh(rng);
    if (is_physical(n, f, fhat).margin > 0) return OrthoState::from_ffhat(n, f, fhat);
  }
}

inline std::vector<IdentityCheck> run_identity_suite(const OptimizerConfig& cfg) {
  std::vector<IdentityCheck> checks;
  const auto add = [&](std::string name, double residual, double tol) {
    checks.push_back({std::move(name), residual, tol});
  };

  for (int n : {2, 3, 4}) {
    const GeneratorSet gs = gellmann_with_constants(n);
    add("su(" + std::to_string(n) + ") commutation/anticommutation relations", commutation_identity_residual(gs),
        1e-11);
    add("su(" + std::to_string(n) + ") product expansion", product_identity_residual(gs), 1e-11);
  }

  for (int n : {2, 3, 4, 5}) {
    const ComplexMatrix id = ComplexMatrix::Identity(n * n, n * n);
    const ComplexMatrix flip = flip_op(n);
    const ComplexMatrix fhat = fhat_op(n);
    double r = max_abs_entry(flip * flip - id);
    r = std::max(r, max_abs_entry(flip * fhat - fhat));
    r = std::max(r, max_abs_entry(fhat * flip - fhat));
    r = std::max(r, max_abs_entry(fhat * fhat - n * fhat));
    add("flip algebra n=" + std::to_string(n), r, 1e-12);
  }

  for (int d : {2, 3, 4, 5}) {
    const WeylBasis wb = weyl_basis(d);
    double r = 0.0;
    for (int j = 0; j < d; ++j) r = std::max(r, max_abs_entry(theta_fourier(wb, j) - wb.theta[j]));
    add("Weyl theta_j Fourier reconstruction d=" + std::to_string(d), r, 1e-12);
  }

  std::mt19937_64 rng(cfg.rng_seed);
  double spectral = 0.0, roots = 0.0;
  for (int n : {2, 3, 4})
    for (int i = 0; i < 10; ++i) {
      const OrthoState s = random_physical_state(n, rng);
      const ComplexMatrix rho = density_matrix(s);
      spectral = std::max(spectral, max_abs_entry(rho - spectral_density_matrix(s)));
      const SqrtCoefficients c = sqrt_coeffs(s);
      roots = std::max(roots, max_abs_entry(psd_sqrt(rho) - ortho_operator(n, c.a1, c.b1, c.c1)));
    }
  add("spectral form equals a I + b F + c Fhat", spectral, 1e-12);
  add("sqrt coefficients reproduce psd_sqrt", roots, 1e-10);

  double slices = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const auto wr = werner_range(3);
    const double b = wr.lo + (wr.hi - wr.lo) * i / 20.0;
    slices = std::max(slices, std::abs(lqu_werner(b) - lqu_ortho(werner(3, b))));
    const auto ir = isotropic_range(3);
    const double c = ir.lo + (ir.hi - ir.lo) * i / 20.0;
    slices = std::max(slices, std::abs(lqu_isotropic(c) - lqu_ortho(isotropic(3, c))));
  }
  add("Werner/isotropic LQU formulas equal the generic pipeline", slices, 1e-12);

  double oracle = 0.0;
  for (int i = 0; i < 20; ++i) {
    const OrthoState s = random_physical_state(3, rng);
    oracle = std::max(oracle, std::abs(oracle_lqu(density_matrix(s), fixed_spectrum(3), cfg).value - lqu_ortho(s)));
  }
  add("LQU oracle vs closed form (20 states)", oracle, 1e-4);
  return checks;
}

} // namespace qcorr
