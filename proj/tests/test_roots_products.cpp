#include <gtest/gtest.h>

#include "nlft/roots_products.hpp"

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

// max relative |sqrt_c^2 - (Delta^2 - 4)| on circles around the gaps
double square_error(const PeriodicPotential& p, const SpectralWindow& w, const ProductConfig& pc, int top) {
  const ZsEvaluator ev(p);
  double worst = 0.0;
  for (int n = -top; n <= top; ++n)
    for (int j = 0; j < 8; ++j) {
      const cplx lam = w.at(n).tau + std::polar(std::max(w.at(n).gamma, kPi / 16), 2.0 * kPi * (j + 0.5) / 8.0);
      const cplx c = canonical_root(lam, w, pc);
      const cplx ref = 4.0 * ev.discriminant(lam).disc_minus_one;
      worst = std::max(worst, std::abs(c * c - ref) / std::abs(ref));
    }
  return worst;
}

}  // namespace

TEST(StandardRoot, ClosedGapAndPrincipalBranch) {
  const auto w = build_window(decay(4, 0.5, 1, 2), 12);
  // beyond the window the gap is modelled closed
  EXPECT_EQ(standard_root(40, cplx(3.0, 1.0), w), detail::gap_shape(40, w).tau - cplx(3.0, 1.0));
  const auto& g = w.at(1);
  ASSERT_GT(g.gamma, 0.0);
  const double right = g.lam_plus + 0.3;
  const cplx v = standard_root(1, right, w);
  EXPECT_LT(v.real(), 0.0);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  EXPECT_NEAR(v.real(), (g.tau - right) * std::sqrt(1.0 - std::pow(0.5 * g.gamma / (g.tau - right), 2)), 1e-15);
  EXPECT_GT(standard_root(1, g.lam_minus - 0.3, w).real(), 0.0);
}

TEST(StandardRoot, CutAndUpperBoundaryValue) {
  const auto w = build_window(decay(4, 0.5, 1, 2), 12);
  const auto& g = w.at(1);
  try {
    standard_root(1, g.tau, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OnCutError);
  }
  for (double t : {-0.9, -0.2, 0.4, 0.8}) {
    const double l = g.tau + t * 0.5 * g.gamma;
    const cplx up = standard_root_upper(1, l, w);
    EXPECT_NEAR(std::abs(up - standard_root(1, cplx(l, 1e-13), w)), 0.0, 1e-6);
    EXPECT_NEAR(std::norm(up) , std::pow(0.5 * g.gamma, 2) - std::pow(l - g.tau, 2), 1e-15);
  }
}

TEST(ContinueSqrt, FollowsTheUnitCircle) {
  std::vector<cplx> sq;
  for (int i = 0; i <= 200; ++i) sq.push_back(std::polar(1.0, 2.0 * kPi * i / 100.0));
  const auto r = continue_sqrt(sq, 1.0);
  for (int i = 0; i <= 200; ++i) EXPECT_NEAR(std::abs(r[i] - std::polar(1.0, kPi * i / 100.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r[100] + 1.0), 0.0, 1e-12);  // one loop of the square flips the root
}

TEST(CanonicalRoot, ZeroPotential) {
  const auto w = build_window(PeriodicPotential(4), 10);
  for (const cplx lam : {cplx(0.4), cplx(2.0, 1.0), cplx(-7.0, -0.3), cplx(3 * kPi)}) {
    const cplx c = canonical_root(lam, w);
    EXPECT_LT(std::abs(c + 2.0 * kI * std::sin(lam)), 1e-12 * std::max(1.0, std::abs(std::sin(lam)))) << lam;
    EXPECT_LT(std::abs(c * c + 4.0 * std::sin(lam) * std::sin(lam)), 1e-8 * std::max(1.0, std::norm(std::sin(lam))));
  }
  for (int n = -3; n <= 3; ++n) EXPECT_NEAR(std::abs(delta_n_at_mu(n, w) - (n % 2 == 0 ? 1.0 : -1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(chi_n(cplx(0.3, 0.2), 2, w) - 1.0), 0.0, 1e-13);
}

TEST(CanonicalRoot, SquareIsDeltaSquaredMinusFour) {
  const auto p = decay(4, 1.0, 1, 17);
  const auto w = build_window(p, 20);
  EXPECT_LT(square_error(p, w, {}, 16), 1e-6);
}

TEST(CanonicalRoot, AsymptoticTailBeatsUnitTail) {
  const auto p = decay(4, 1.0, 1, 17);
  const auto w = build_window(p, 20);
  ProductConfig unit;
  unit.tail_mode = TailMode::unit;
  ProductConfig resummed;
  resummed.tail_mode = TailMode::sine_resummed;
  const double e_asym = square_error(p, w, {}, 16), e_unit = square_error(p, w, unit, 16);
  EXPECT_LT(e_asym, e_unit);
  EXPECT_EQ(square_error(p, w, resummed, 4), square_error(p, w, unit, 4));
}

TEST(CanonicalRoot, LargeImaginaryLambda) {
  // sqrt_c(iT) / (-2i sin(iT) prod_k (tau_k - iT) / (k pi - iT) * tail) -> 1;
  // replacing sqrt_s_k by tau_k - l costs about gamma_k^2 / (8 T^2) per factor
  const auto w = build_window(decay(4, 0.6, 1, 4), 16);
  const ProductConfig pc;
  double g2 = 0.0;
  for (int k = -16; k <= 16; ++k) g2 += w.at(k).gamma * w.at(k).gamma;
  for (double T : {20.0, 50.0, 200.0}) {
    const cplx lam(0.0, T);
    cplx ref = -2.0 * kI * std::sin(lam) * detail::tail_factor(lam, w, pc);
    for (int k = -16; k <= 16; ++k) ref *= (w.at(k).tau - lam) / (k * kPi - lam);
    EXPECT_LT(std::abs(canonical_root(lam, w) / ref - 1.0), g2 / (4.0 * T * T) + 1e-12) << T;
  }
}

TEST(CanonicalRoot, FactorsThroughDeltaN) {
  const auto w = build_window(decay(4, 0.6, 1, 4), 16);
  for (int n : {-3, 0, 2, 9})
    for (const cplx d : {cplx(0.3, 0.2), cplx(-0.2, -0.4)}) {
      const cplx lam = n * kPi + d;
      const cplx a = canonical_root(lam, w), b = 2.0 * kI * standard_root(n, lam, w) * delta_n(n, lam, w);
      EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a)) << n;
    }
}

TEST(StarRoot, AnchorAndSquare) {
  const auto p = decay(4, 0.8, 1, 9);
  const auto w = build_window(p, 16);
  const ZsEvaluator ev(p);
  for (int n = -4; n <= 4; ++n) {
    const auto& g = w.at(n);
    EXPECT_EQ(star_root_at(g.mu, n, w), cplx(g.delta_at_mu, 0.0));
    if (g.collapsed || anchor_degenerate(n, w)) continue;
    // the sign is fixed so that the root is continuous into the anchor
    const double l = g.mu + 1e-7 * (g.lam_minus - g.mu);
    EXPECT_LT(std::abs(star_root_at(l, n, w) - g.delta_at_mu), 1e-3 * std::abs(g.delta_at_mu) + 1e-9) << n;
    const double l2 = 0.5 * (g.lam_minus + g.mu);
    const cplx s = star_root_at(l2, n, w);
    EXPECT_LT(std::abs(s * s - 4.0 * ev.discriminant(l2).disc_minus_one), 1e-6 * std::norm(s) + 1e-14) << n;
  }
}

TEST(StarRoot, ClosedGapEpsilon) {
  auto w = build_window(PeriodicPotential(4), 8);
  w.at(2).mu = w.at(2).tau;
  EXPECT_THROW(epsilon(2, w), Error);
  EXPECT_THROW(star_sign(2, w), Error);  // needs an open gap
}

TEST(ProductConfig, Validation) {
  const auto w = build_window(PeriodicPotential(4), 8);
  ProductConfig pc;
  pc.K_tail = 4;
  EXPECT_THROW(pc.validate(w), Error);
  pc.K_tail = 0;
  pc.quad_nodes = 16;
  EXPECT_THROW(pc.validate(w), Error);
}
