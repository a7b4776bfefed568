#include <gtest/gtest.h>

#include "nlft/reference/plane_wave.hpp"
#include "nlft/spectra.hpp"

using namespace nlft;

namespace {

PeriodicPotential decay(int B, double a, int N, std::uint64_t seed) {
  TestPotentialParams p;
  p.band_limit = B;
  p.amplitude = a;
  p.decay_order = N;
  p.seed = seed;
  return make_test_potential(TestPotentialKind::band_limited_decay, p);
}

}  // namespace

TEST(Spectra, ZeroPotentialWindow) {
  const auto w = build_window(PeriodicPotential(4), 8);
  ASSERT_EQ(w.entries.size(), 17u);
  for (int n = -8; n <= 8; ++n) {
    const auto& g = w.at(n);
    EXPECT_EQ(g.n, n);
    for (double v : {g.lam_minus, g.lam_plus, g.mu, g.lamdot, g.tau}) EXPECT_NEAR(v, n * kPi, 1e-10) << n;
    EXPECT_EQ(g.gamma, 0.0);
    EXPECT_TRUE(g.collapsed);
    EXPECT_TRUE(g.mu_in_gap);
  }
  EXPECT_EQ(w.c1, cplx{});
}

TEST(Spectra, PlaneWaveOracle) {
  const reference::PlaneWave pw(0.1, 1);
  const auto w = build_window(pw.potential(4), 16);
  for (int n = -16; n <= 16; ++n) {
    EXPECT_NEAR(w.at(n).lam_minus, pw.lam_minus(n), 1e-9) << n;
    EXPECT_NEAR(w.at(n).lam_plus, pw.lam_plus(n), 1e-9) << n;
    EXPECT_NEAR(w.at(n).mu, pw.mu(n), 1e-9) << n;
    EXPECT_NEAR(w.at(n).lamdot, pw.lamdot(n), 1e-9) << n;
  }
  EXPECT_NEAR(w.at(-1).gamma, 0.2, 1e-9);
  EXPECT_FALSE(w.at(-1).collapsed);
}

TEST(Spectra, AuditedInvariantsOnRandomPotential) {
  const auto w = build_window(decay(4, 0.8, 1, 21), 20);
  EXPECT_TRUE(audit_window(w).empty());
  for (int n = -20; n <= 20; ++n) {
    const auto& g = w.at(n);
    EXPECT_LE(g.lam_minus, g.lam_plus);
    EXPECT_TRUE(g.mu_in_gap) << n;
    EXPECT_GE(std::abs(g.delta_at_lamdot), 2.0 - 1e-9);
    EXPECT_GT(g.delta_at_lamdot * (n % 2 == 0 ? 1.0 : -1.0), 0.0);
    EXPECT_LE(g.identity_residual, 1e-8);
    if (n < 20) { EXPECT_LT(g.lam_plus, w.at(n + 1).lam_minus); }
  }
}

TEST(Spectra, CriticalPointsMoveLinearlyWithAmplitude) {
  const double a = 1e-3;
  const auto w = build_window(decay(4, a, 1, 2), 12);
  for (int n = -12; n <= 12; ++n) EXPECT_LE(std::abs(w.at(n).lamdot - n * kPi), 10.0 * a) << n;
}

TEST(Spectra, SmallAmplitudeTauMinusMu) {
  // tau_n - mu_n = -(phi1(-n) + phi2(n)) / 2 + O(a^2)
  for (double a : {1e-3, 5e-4}) {
    const auto p = decay(4, a, 1, 13);
    const auto w = build_window(p, 8);
    for (int n = -4; n <= 4; ++n) {
      const double lin = -0.5 * (p.coeff1(-n) + p.coeff2(n)).real();
      EXPECT_LT(std::abs(w.at(n).tau - w.at(n).mu - lin), 20.0 * a * a) << n;
    }
  }
}

TEST(Spectra, TranslationAndGaugeInvariance) {
  const auto p = decay(4, 0.6, 1, 5);
  const auto w = build_window(p, 12);
  for (const auto& q : {p.translated(0.29), p.gauged(1.7)}) {
    const auto v = build_window(q, 12);
    for (int n = -12; n <= 12; ++n) {
      EXPECT_NEAR(v.at(n).lam_minus, w.at(n).lam_minus, 1e-8) << n;
      EXPECT_NEAR(v.at(n).lam_plus, w.at(n).lam_plus, 1e-8) << n;
      EXPECT_NEAR(v.at(n).lamdot, w.at(n).lamdot, 1e-8) << n;
    }
  }
  // mu is a Dirichlet eigenvalue and moves under translation; it stays in its gap
  const auto v = build_window(p.translated(0.29), 12);
  for (int n = -12; n <= 12; ++n) EXPECT_TRUE(v.at(n).mu_in_gap);
}

TEST(Spectra, TauAsymptoticsUseC1) {
  const auto p = decay(4, 0.7, 1, 8);
  const auto w = build_window(p, 24);
  EXPECT_NEAR(std::abs(w.c1 - c1_invariant(p)), 0.0, 1e-16);
  for (int n = 12; n <= 24; ++n)
    for (int m : {-n, n}) EXPECT_LT(double(n) * n * std::abs(w.at(m).tau - m * kPi - w.c1.real() / m), 1.0) << m;
}

TEST(Spectra, PreconditionsAndErrors) {
  const auto p = decay(8, 0.3, 1, 1);
  try {
    build_window(p, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  PeriodicPotential complex_type(2);
  complex_type.set_coeff1(1, 0.1);
  EXPECT_THROW(build_window(complex_type, 8), Error);
}

TEST(Spectra, IdentityResidualCountsRootUncertainty) {
  // At a computed root mu the difference delta^2 - (Delta^2 - 4) is chi_D(mu) (m1 - m4 - m2 + m3);
  // moving mu well beyond its root accuracy must show up in the residual.
  const auto p = decay(4, 0.8, 1, 3);
  const ZsEvaluator ev(p);
  const auto g = locate_gap(ev, 2);
  const int steps = detail::index_steps(ev, 2);
  EXPECT_LE(dirichlet_identity_residual(ev.transfer(g.mu, true, steps), 1e-10), 1e-8);
  EXPECT_GT(dirichlet_identity_residual(ev.transfer(g.mu + 1e-5, true, steps), 1e-10), 1e-8);
}

TEST(Spectra, WindowCsvSchema) {
  const auto w = build_window(PeriodicPotential(0), 4);
  const auto csv = window_csv(w);
  EXPECT_EQ(csv.rfind("n,lam_minus,lam_plus,mu,lamdot,tau,gamma\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}
