#include <gtest/gtest.h>

#include "nlft/reference/plane_wave.hpp"
#include "nlft/zs_ode.hpp"

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

double mat_err(const Mat2& a, const Mat2& b) {
  return std::max({std::abs(a.a - b.a), std::abs(a.b - b.b), std::abs(a.c - b.c), std::abs(a.d - b.d)});
}

}  // namespace

TEST(ZsOde, ZeroPotentialIsDiagonal) {
  const ZsEvaluator ev(PeriodicPotential(4));
  for (const cplx lam : {cplx(0.0), cplx(1.3), cplx(-40.0), cplx(2.0, 0.7), cplx(90.0, -0.2)}) {
    const auto t = ev.transfer(lam, true);
    EXPECT_LT(mat_err(t.m, Mat2{std::exp(-kI * lam), 0.0, 0.0, std::exp(kI * lam)}), 1e-12) << lam;
    const auto e = discriminant_from(t);
    EXPECT_LT(std::abs(e.delta_trace - 2.0 * std::cos(lam)), 1e-12);
    EXPECT_LT(std::abs(e.delta_anti), 1e-14);
    EXPECT_LT(std::abs(e.dirichlet_char + 2.0 * kI * std::sin(lam)), 1e-12);
    EXPECT_LT(std::abs(e.delta_dot + 2.0 * std::sin(lam)), 1e-11);
  }
}

TEST(ZsOde, PlaneWaveOracle) {
  const reference::PlaneWave pw(cplx(0.06, 0.08), 1);
  const ZsEvaluator ev(pw.potential(4));
  for (const cplx lam : {cplx(0.3), cplx(-kPi), cplx(10.0), cplx(50.0), cplx(-100.0), cplx(3.0, 0.5)}) {
    const auto t = ev.transfer(lam, true);
    EXPECT_LT(mat_err(t.m, pw.monodromy(lam)), 1e-10) << lam;
    const auto a = discriminant_from(t), b = pw.discriminant(lam);
    EXPECT_LT(std::abs(a.delta_dot - b.delta_dot), 1e-9) << lam;
  }
}

TEST(ZsOde, WronskianAndRealTypeSymmetry) {
  const auto p = decay(4, 0.5, 1, 3);
  const ZsEvaluator ev(p);
  for (double x : {-70.0, -3.3, 0.0, 1.1, 25.0}) {
    const auto t = ev.transfer(x, false);
    EXPECT_LT(std::abs(t.wronskian() - 1.0), 1e-12);
    // real type on the real axis: M in SU(1,1)
    EXPECT_LT(std::abs(t.m.d - std::conj(t.m.a)), 1e-12);
    EXPECT_LT(std::abs(t.m.c - std::conj(t.m.b)), 1e-12);
    const auto e = discriminant_from(t);
    EXPECT_LT(std::abs(e.delta_trace.imag()), 1e-12);
    EXPECT_LT(std::abs(e.dirichlet_char.real()), 1e-12);
  }
  EXPECT_LT(std::abs(ev.transfer(cplx(4.0, 1.5), false).wronskian() - 1.0), 1e-12);
}

TEST(ZsOde, DeltaDotMatchesFiniteDifference) {
  const ZsEvaluator ev(decay(4, 0.5, 1, 4));
  const double h = 1e-5;
  for (double x : {-8.0, 0.4, 17.0}) {
    const int steps = ev.steps_for(x);
    const cplx fd = (ev.discriminant(x + h, steps).delta_trace - ev.discriminant(x - h, steps).delta_trace) / (2.0 * h);
    EXPECT_LT(std::abs(ev.discriminant(x, steps).delta_dot - fd), 1e-6) << x;
  }
}

TEST(ZsOde, StepDoublingSelfConsistency) {
  const auto p = decay(4, 0.5, 1, 6);
  for (double x : {0.0, 30.0}) {
    const auto a = integrate_transfer(p, x, 512, false), b = integrate_transfer(p, x, 1024, false),
               c = integrate_transfer(p, x, 2048, false);
    const double e1 = mat_err(a.m, b.m), e2 = mat_err(b.m, c.m);
    // fourth order: each doubling shrinks the change by ~16
    EXPECT_LT(e2, e1 / 8.0 + 1e-14) << x;
    const auto d = integrate_transfer(p, x, IntegratorConfig{}.steps_for(x), false);
    EXPECT_LT(mat_err(d.m, c.m), 16.0 * e2 + 1e-13);
  }
}

TEST(ZsOde, StepCountBelowBandThrows) {
  const auto p = decay(16, 0.1, 1, 1);
  EXPECT_THROW(integrate_transfer(p, 0.0, 32, false), Error);
  try {
    integrate_transfer(p, 0.0, 32, false);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepCountTooSmall);
  }
  EXPECT_THROW(integrate_transfer(p, cplx(std::nan(""), 0.0), 128, false), Error);
}

TEST(ZsOde, StepsRoundedToCacheFriendlyMultiples) {
  IntegratorConfig c;
  EXPECT_EQ(c.steps_for(0.0), 1024);
  EXPECT_EQ(c.steps_for(100.0) % 64, 0);
  EXPECT_GE(c.steps_for(100.0), 2000);
}
