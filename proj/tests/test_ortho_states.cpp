#include <qcorr/ortho_states.hpp>
#include <qcorr/selftest.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qcorr;

TEST(FlipOperators, Algebra) {
  for (int n = 2; n <= 5; ++n) {
    const ComplexMatrix id = ComplexMatrix::Identity(n * n, n * n);
    const ComplexMatrix f = flip_op(n), h = fhat_op(n);
    EXPECT_TRUE(f * f == id);
    EXPECT_TRUE(f * h == h);
    EXPECT_TRUE(h * f == h);
    EXPECT_TRUE(h * h == static_cast<double>(n) * h);
    EXPECT_EQ(f.trace(), Complex(n));
    EXPECT_EQ(h.trace(), Complex(n));
    EXPECT_TRUE(partial_transpose(f, {n, n}, Party::A) == h);
  }
}

TEST(FlipOperators, ProjectorRanksAndResolution) {
  for (int n = 2; n <= 5; ++n) {
    const ProjectorsUVW p = projectors_uvw(n);
    EXPECT_LT(max_abs_entry(p.u + p.v + p.w - ComplexMatrix::Identity(n * n, n * n)), 1e-14);
    for (const ComplexMatrix* m : {&p.u, &p.v, &p.w}) EXPECT_LT(max_abs_entry(*m * *m - *m), 1e-14);
    EXPECT_LT(max_abs_entry(p.u * p.v), 1e-14);
    EXPECT_LT(max_abs_entry(p.u * p.w), 1e-14);
    EXPECT_LT(max_abs_entry(p.v * p.w), 1e-14);
    const OrthoState s = maximally_mixed(n);
    const auto mult = s.multiplicities();
    EXPECT_NEAR(p.u.trace().real(), mult[0], 1e-13);
    EXPECT_NEAR(p.v.trace().real(), mult[1], 1e-13);
    EXPECT_NEAR(p.w.trace().real(), mult[2], 1e-13);
  }
}

TEST(OrthoState, CoordinateRoundTrip) {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 6; ++n)
    for (int i = 0; i < 20; ++i) {
      const OrthoState s = random_physical_state(n, rng);
      EXPECT_NEAR(n * (n * s.a() + s.b() + s.c()), 1.0, 1e-13);
      const OrthoState t = OrthoState::from_abc(n, s.a(), s.b(), s.c());
      EXPECT_NEAR(t.f(), s.f(), 1e-13);
      EXPECT_NEAR(t.fhat(), s.fhat(), 1e-13);
      const ComplexMatrix rho = density_matrix(s);
      EXPECT_NEAR((rho * flip_op(n)).trace().real(), s.f(), 1e-13);
      EXPECT_NEAR((rho * fhat_op(n)).trace().real(), s.fhat(), 1e-13);
      EXPECT_NEAR(rho.trace().real(), 1.0, 1e-13);
    }
}

TEST(OrthoState, TraceConditionEnforced) {
  EXPECT_THROW(OrthoState::from_abc(3, 0.2, 0.0, 0.0), DomainError);
  EXPECT_THROW(OrthoState::from_ffhat(1, 0.0, 0.0), DomainError);
  EXPECT_NO_THROW(OrthoState::from_abc(3, 1.0 / 9.0, 0.0, 0.0));
}

TEST(OrthoState, SpectrumMatchesEigensolver) {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 4; ++n)
    for (int i = 0; i < 10; ++i) {
      const OrthoState s = random_physical_state(n, rng);
      const ComplexMatrix rho = density_matrix(s);
      EXPECT_LT(max_abs_entry(rho - spectral_density_matrix(s)), 1e-13);
      const auto ev = s.spectrum();
      const auto mult = s.multiplicities();
      std::vector<double> expected;
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < mult[k]; ++m) expected.push_back(ev[k]);
      std::sort(expected.begin(), expected.end());
      const RealVector got = herm_eig(rho).eigenvalues;
      ASSERT_EQ(got.size(), static_cast<Eigen::Index>(expected.size()));
      for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_NEAR(got(k), expected[k], 1e-12);
    }
}

TEST(OrthoState, PositivityRegionMatchesEigenvalues) {
  // Grid extends beyond the triangle on every side.
  for (int n : {2, 3, 4}) {
    const int g = 41;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const double f = -1.5 + 3.0 * i / (g - 1);
        const double fhat = -0.5 + (n + 1.0) * j / (g - 1);
        const OrthoState s = OrthoState::from_ffhat(n, f, fhat);
        const double min_ev = herm_eig(ortho_operator(n, s.a(), s.b(), s.c())).eigenvalues.minCoeff();
        EXPECT_EQ(is_physical(n, f, fhat).physical, min_ev >= -1e-9) << "n=" << n << " f=" << f << " fhat=" << fhat;
      }
  }
}

TEST(OrthoState, TriangleVerticesAreRankDeficient) {
  for (int n : {2, 3, 4}) {
    for (const auto& [f, fhat] : {std::pair{-1.0, 0.0}, {1.0, 0.0}, {1.0, static_cast<double>(n)}}) {
      const PhysicalCheck c = is_physical(n, f, fhat);
      EXPECT_TRUE(c.physical);
      EXPECT_NEAR(c.margin, 0.0, 1e-15);
      const RealVector ev = herm_eig(density_matrix(OrthoState::from_ffhat(n, f, fhat))).eigenvalues;
      EXPECT_NEAR(ev.minCoeff(), 0.0, 1e-12);
    }
  }
  // (1, n) is the maximally entangled state
  const ComplexMatrix rho = density_matrix(OrthoState::from_ffhat(3, 1.0, 3.0));
  EXPECT_LT(max_abs_entry(rho - fhat_op(3) / 3.0), 1e-13);
}

TEST(OrthoState, NonPhysicalDiagnostics) {
  const PhysicalCheck c = is_physical(3, 1.2, 0.0);
  EXPECT_FALSE(c.physical);
  EXPECT_EQ(c.violated, "f ≤ 1 violated");
  EXPECT_NEAR(c.margin, -0.2, 1e-15);
  EXPECT_EQ(is_physical(3, 0.0, -0.1).violated, "0 ≤ fhat violated");
  EXPECT_EQ(is_physical(3, -0.5, 1.0).violated, "fhat ≤ n(f+1)/2 violated");
  try {
    density_matrix(OrthoState::from_ffhat(3, 1.2, 0.0));
    FAIL() << "expected NonPhysicalError";
  } catch (const NonPhysicalError& e) {
    EXPECT_EQ(e.violated(), "f ≤ 1 violated");
    EXPECT_LT(e.margin(), 0.0);
  }
}

TEST(OrthoState, PartialTransposeSwapsFlipAndFhat) {
  std::mt19937_64 rng(3);
  for (int n : {2, 3, 4}) {
    const OrthoState s = random_physical_state(n, rng);
    const ComplexMatrix pt = partial_transpose(density_matrix(s), {n, n}, Party::A);
    EXPECT_LT(max_abs_entry(pt - ortho_operator(n, s.a(), s.c(), s.b())), 1e-14);
  }
}

TEST(OrthoState, InvariantUnderOrthogonalTwirl) {
  std::mt19937_64 rng(4);
  const int n = 3;
  const OrthoState s = random_physical_state(n, rng);
  const ComplexMatrix rho = density_matrix(s);
  // real orthogonal from the QR of a Gaussian matrix
  std::normal_distribution<double> g;
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  const RealMatrix o = Eigen::HouseholderQR<RealMatrix>(m).householderQ();
  const ComplexMatrix oo = kron(o.cast<Complex>(), o.cast<Complex>());
  EXPECT_LT(max_abs_entry(oo * rho * oo.adjoint() - rho), 1e-13);
}

TEST(SqrtCoeffs, MatchPsdSqrt) {
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 4})
    for (int i = 0; i < 30; ++i) {
      const OrthoState s = random_physical_state(n, rng);
      const SqrtCoefficients r = sqrt_coeffs(s);
      EXPECT_LT(max_abs_entry(psd_sqrt(density_matrix(s)) - ortho_operator(n, r.a1, r.b1, r.c1)), 1e-10);
    }
}

TEST(SqrtCoeffs, VertexAndRejection) {
  const SqrtCoefficients r = sqrt_coeffs(OrthoState::from_ffhat(3, 1.0, 3.0));
  const ComplexMatrix root = ortho_operator(3, r.a1, r.b1, r.c1);
  EXPECT_LT(max_abs_entry(root - fhat_op(3) / 3.0), 1e-12); // pure state is its own root
  EXPECT_THROW(sqrt_coeffs(OrthoState::from_ffhat(3, 1.5, 0.0)), NonPhysicalError);
}

TEST(BlochCorrelation, ClosedFormMatchesDirect) {
  std::mt19937_64 rng(6);
  for (int n : {2, 3, 4}) {
    const GeneratorSet gs = gellmann(n);
    for (int i = 0; i < 10; ++i) {
      const OrthoState s = random_physical_state(n, rng);
      const BlochCorrelation closed = bloch_correlation(s, gs);
      const BlochCorrelation direct = bloch_correlation_direct(density_matrix(s), gs);
      EXPECT_LT(direct.x.cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((direct.t - closed.t).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
  EXPECT_THROW(bloch_correlation(maximally_mixed(3), gellmann(2)), DimensionError);
}

TEST(Slices, RangesAreTriangleEdges) {
  for (int n : {2, 3, 4, 5}) {
    const ParameterRange w = werner_range(n);
    EXPECT_NEAR(is_physical(werner(n, w.lo)).margin, 0.0, 1e-13);
    EXPECT_NEAR(is_physical(werner(n, w.hi)).margin, 0.0, 1e-13);
    const ParameterRange iso = isotropic_range(n);
    EXPECT_NEAR(is_physical(isotropic(n, iso.lo)).margin, 0.0, 1e-13);
    EXPECT_NEAR(is_physical(isotropic(n, iso.hi)).margin, 0.0, 1e-13);
    EXPECT_THROW(werner(n, w.hi + 1e-3), NonPhysicalError);
    EXPECT_THROW(isotropic(n, iso.lo - 1e-3), NonPhysicalError);
  }
  EXPECT_NEAR(werner_range(3).lo, -1.0 / 6.0, 1e-16);
  EXPECT_NEAR(werner_range(3).hi, 1.0 / 12.0, 1e-16);
  EXPECT_NEAR(isotropic_range(3).lo, -1.0 / 24.0, 1e-16);
  EXPECT_NEAR(isotropic_range(3).hi, 1.0 / 3.0, 1e-16);
}

TEST(ProjectToPhysical, InsideUnchangedOutsideOnBoundary) {
  const auto in = project_to_physical(3, 0.2, 1.0);
  EXPECT_EQ(in[0], 0.2);
  EXPECT_EQ(in[1], 1.0);
  const auto p = project_to_physical(3, 1.3, 1.0);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0, 1e-15);
  const auto corner = project_to_physical(3, -2.0, -1.0);
  EXPECT_NEAR(corner[0], -1.0, 1e-15);
  EXPECT_NEAR(corner[1], 0.0, 1e-15);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 4);
  for (int i = 0; i < 100; ++i) {
    const auto q = project_to_physical(3, u(rng), u(rng));
    EXPECT_GE(is_physical(3, q[0], q[1]).margin, -1e-12);
  }
}
