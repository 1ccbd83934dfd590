#include <qcorr/oracles.hpp>
#include <qcorr/selftest.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qcorr;

namespace {

OptimizerConfig quick(int seeds = 16, std::uint64_t rng_seed = 20240601) {
  OptimizerConfig cfg;
  cfg.seeds = seeds;
  cfg.rng_seed = rng_seed;
  return cfg;
}

} // namespace

TEST(NelderMead, Quadratic) {
  const auto fn = [](const std::vector<double>& x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0) + 0.5;
  };
  const auto r = detail::nelder_mead(fn, {0.0, 0.0}, 0.5, 2000, 1e-12, 1e-12);
  EXPECT_NEAR(r.fx, 0.5, 1e-10);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], -2.0, 1e-4);
}

TEST(ChartUnitary, IsUnitaryAndBlockDiagonal) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> theta(1 * 1 + 2 * 2);
  for (double& t : theta) t = g(rng);
  const ComplexMatrix u = detail::chart_unitary({1, 2}, theta);
  ASSERT_EQ(u.rows(), 3);
  EXPECT_LT(hs_norm(u.adjoint() * u - ComplexMatrix::Identity(3, 3)), 1e-12);
  EXPECT_EQ(u(0, 1), Complex(0.0));
  EXPECT_EQ(u(2, 0), Complex(0.0));
}

TEST(OracleLqu, WernerAndIsotropicEndpoints) {
  const OptimizerConfig cfg = quick();
  const OracleResult w = oracle_lqu(density_matrix(werner(3, -1.0 / 6.0)), fixed_spectrum(3), cfg);
  EXPECT_NEAR(w.value, 0.5, 1e-4);
  EXPECT_TRUE(w.spectrum_constraint_ok);
  const OracleResult iso = oracle_lqu(density_matrix(isotropic(3, 1.0 / 3.0)), fixed_spectrum(3), cfg);
  EXPECT_NEAR(iso.value, 2.0 / 3.0, 1e-4);
}

TEST(OracleLqu, MatchesClosedForm) {
  std::mt19937_64 rng(2);
  const OptimizerConfig cfg = quick();
  for (int n : {2, 3})
    for (int i = 0; i < 5; ++i) {
      const OrthoState s = random_physical_state(n, rng);
      EXPECT_NEAR(oracle_lqu(density_matrix(s), fixed_spectrum(n), cfg).value, lqu_ortho(s), 1e-4);
    }
}

TEST(OracleLqu, QubitSideMatchesClosedForm) {
  std::mt19937_64 rng(3);
  const OptimizerConfig cfg = quick();
  for (int nb : {2, 3})
    for (int i = 0; i < 5; ++i) {
      const ComplexMatrix rho = random_density(2 * nb, rng);
      EXPECT_NEAR(oracle_lqu(rho, fixed_spectrum(2), cfg).value, lqu_2xn(rho, nb), 1e-4);
    }
}

TEST(OracleLqu, ObjectiveEqualsSkewInformation) {
  std::mt19937_64 rng(4);
  const ComplexMatrix rho = random_density(6, rng);
  const detail::LquObjective obj(rho, {2, 3}, fixed_spectrum(2));
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrix u = random_unitary(2, rng);
    const ComplexMatrix k = kron(obj.observable(u), ComplexMatrix::Identity(3, 3));
    EXPECT_NEAR(obj(u), skew_information(rho, k), 1e-12);
  }
}

TEST(OracleLqu, RejectsBadSpectrum) {
  const ComplexMatrix rho = ComplexMatrix::Identity(9, 9) / 9.0;
  RealVector deg(3);
  deg << -1.0, 0.5, 0.5;
  EXPECT_THROW(oracle_lqu(rho, deg, quick()), DomainError);
  EXPECT_THROW(oracle_lqu(rho, fixed_spectrum(2), quick()), DimensionError);
}

TEST(OracleLqu, SeedReproducibleAndHistoryMonotone) {
  const ComplexMatrix rho = density_matrix(OrthoState::from_ffhat(3, 0.2, 1.1));
  const OracleResult a = oracle_lqu(rho, fixed_spectrum(3), quick(8, 99));
  const OracleResult b = oracle_lqu(rho, fixed_spectrum(3), quick(8, 99));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.argmin_parameters, b.argmin_parameters);
  ASSERT_EQ(a.best_history.size(), 8u);
  for (std::size_t i = 1; i < a.best_history.size(); ++i) EXPECT_LE(a.best_history[i], a.best_history[i - 1]);
  EXPECT_EQ(a.restarts_used, 8);
}

TEST(OracleGd, SandwichedByBounds) {
  std::mt19937_64 rng(5);
  const OptimizerConfig cfg = quick();
  for (int n : {2, 3})
    for (int i = 0; i < 5; ++i) {
      const OrthoState s = random_physical_state(n, rng);
      const ComplexMatrix rho = density_matrix(s);
      const double gd = oracle_gd(rho, {n, n}, cfg).value;
      const double mn = oracle_min(rho, {n, n}, cfg).value;
      EXPECT_GE(gd, gd_lower_bound(s) - 1e-4);
      EXPECT_LE(gd, mn + 1e-4);
      EXPECT_LE(mn, min_upper_bound(s) + 1e-4);
    }
}

TEST(OracleGd, ClassicalQuantumStateIsZero) {
  // sum_k p_k |k><k| (x) sigma_k has zero geometric discord
  std::mt19937_64 rng(6);
  ComplexMatrix rho = ComplexMatrix::Zero(6, 6);
  for (int k = 0; k < 2; ++k) {
    ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
    proj(k, k) = 1.0;
    rho += 0.5 * kron(proj, random_density(3, rng));
  }
  EXPECT_NEAR(oracle_gd(rho, {2, 3}, quick()).value, 0.0, 1e-8);
}

TEST(OracleGd, MeasurementBasisAndChannel) {
  const ComplexMatrix rho = density_matrix(OrthoState::from_ffhat(3, 0.2, 1.1));
  const OracleResult r = oracle_gd(rho, {3, 3}, quick());
  EXPECT_LT(hs_norm(r.basis.adjoint() * r.basis - ComplexMatrix::Identity(3, 3)), 1e-10);
  const auto proj = measurement_projectors(r.basis);
  ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
  for (const auto& p : proj) {
    EXPECT_LT(max_abs_entry(p * p - p), 1e-10);
    sum += p;
  }
  EXPECT_LT(max_abs_entry(sum - ComplexMatrix::Identity(3, 3)), 1e-10);
  const ComplexMatrix measured = measure_party_a(rho, {3, 3}, r.basis);
  EXPECT_NEAR((rho - measured).squaredNorm(), r.value, 1e-10);
}

TEST(OracleMin, LeavesMarginalInvariant) {
  std::mt19937_64 rng(7);
  const ComplexMatrix rho = random_density(6, rng);
  const OracleResult r = oracle_min(rho, {2, 3}, quick());
  EXPECT_TRUE(r.converged);
  const ComplexMatrix marginal = partial_trace(rho, {2, 3}, Party::A);
  const ComplexMatrix measured = partial_trace(measure_party_a(rho, {2, 3}, r.basis), {2, 3}, Party::A);
  EXPECT_LT(max_abs_entry(measured - marginal), 1e-8);
  EXPECT_GE(r.value, oracle_gd(rho, {2, 3}, quick()).value - 1e-8);
}

TEST(OracleDgMax, QubitMaximumOnBoundary) {
  const DgMaxResult r = oracle_dg_max(2, quick(8));
  EXPECT_NEAR(r.value, 0.5, 1e-4);
  EXPECT_LE(r.value, 0.5 + 1e-6);
  EXPECT_NEAR(r.boundary_margin, 0.0, 1e-9);
  EXPECT_THROW(oracle_dg_max(1, quick()), DomainError);
}

TEST(OracleDgMax, CachedMatchesDirect) {
  const OptimizerConfig cfg = quick(4);
  const double a = dg_max_cached(2, cfg);
  EXPECT_EQ(a, dg_max_cached(2, cfg));
  EXPECT_EQ(a, oracle_dg_max(2, cfg).value);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.seeds = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.seeds = 1;
  cfg.value_tol = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
}
