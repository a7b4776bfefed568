#include <gtest/gtest.h>

#include "nlft/nls_evolve.hpp"

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

TEST(Evolve, ConstantSolution) {
  const cplx c(0.3, -0.4);
  PeriodicPotential u(0);
  u.set_real_type_coeff(0, c);
  EvolutionConfig cfg;
  cfg.T = 0.7;
  cfg.dt = 1e-3;
  const auto out = evolve(u, cfg);
  EXPECT_EQ(out.band_limit(), 0);
  EXPECT_LT(std::abs(out.coeff1(0) - c * std::polar(1.0, -2.0 * std::norm(c) * cfg.T)), 1e-13);
}

TEST(Evolve, FreeWaveKeepsItsMode) {
  // |a| small: the nonlinear phase is global, the linear phase is e^{-i (2 pi)^2 t}
  PeriodicPotential u(1);
  const double a = 1e-4;
  u.set_real_type_coeff(1, a);
  EvolutionConfig cfg;
  cfg.T = 0.01;
  const auto out = evolve(u, cfg);
  const double phase = -(4.0 * kPi * kPi + 2.0 * a * a) * cfg.T;
  EXPECT_LT(std::abs(out.coeff1(1) - a * std::polar(1.0, phase)), 1e-12);
}

TEST(Evolve, L2AndHamiltonian) {
  const auto u0 = decay(4, 0.05, 2, 1);
  const auto ev = evolve_detailed(u0, {});
  EXPECT_EQ(ev.steps, 10000);
  EXPECT_LT(std::abs(ev.l2_final - ev.l2_initial) / ev.l2_initial, 1e-10);
  EXPECT_LT(std::abs(l2_mass(ev.u) - l2_mass(u0)) / l2_mass(u0), 1e-10);
  EXPECT_LT(std::abs(hamiltonian(ev.u) - hamiltonian(u0)) / hamiltonian(u0), 1e-6);
  EXPECT_LT(ev.tail_mass, 1e-20);
  EXPECT_LE(ev.dropped_mass, 1e-24);
  EXPECT_TRUE(ev.u.real_type());
}

TEST(Evolve, HamiltonianDriftIsSecondOrderInDt) {
  const auto u0 = decay(4, 0.3, 1, 2);
  auto drift = [&](double dt) {
    EvolutionConfig cfg;
    cfg.T = 0.2;
    cfg.dt = dt;
    return std::abs(hamiltonian(evolve(u0, cfg)) - hamiltonian(u0));
  };
  const double d1 = drift(4e-4), d2 = drift(2e-4);
  EXPECT_NEAR(d1 / d2, 4.0, 1.0);
}

TEST(Evolve, Preconditions) {
  PeriodicPotential complex_type(1);
  complex_type.set_coeff1(1, 0.1);
  EXPECT_THROW(evolve(complex_type, {}), Error);
  EvolutionConfig cfg;
  cfg.M = 500;
  EXPECT_THROW(evolve(decay(4, 0.1, 1, 1), cfg), Error);
  cfg.M = 32;
  EXPECT_THROW(evolve(decay(9, 0.1, 1, 1), cfg), Error);
}

TEST(Evolve, TailEnergyOverflow) {
  // a rough, large potential on a coarse grid spills energy past M/4
  EvolutionConfig cfg;
  cfg.M = 32;
  cfg.T = 0.05;
  cfg.dt = 1e-4;
  try {
    evolve(decay(8, 20.0, 1, 3), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TailEnergyOverflow);
  }
}

TEST(Hamiltonian, ClosedForms) {
  EXPECT_EQ(hamiltonian(PeriodicPotential(3)), 0.0);
  PeriodicPotential c(0);
  c.set_real_type_coeff(0, cplx(0.3, 0.4));
  EXPECT_NEAR(hamiltonian(c), 0.0625, 1e-16);
  const double a = 0.01;
  PeriodicPotential u(1);
  u.set_real_type_coeff(1, a);
  EXPECT_NEAR(hamiltonian(u), 4.0 * kPi * kPi * a * a + std::pow(a, 4), 1e-18);
}
