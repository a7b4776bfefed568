#include <gtest/gtest.h>

#include "nlft/harness.hpp"

using namespace nlft;

namespace {

std::vector<std::pair<double, double>> samples(int lo, int hi, const std::function<double(int)>& f) {
  std::vector<std::pair<double, double>> s;
  for (int n = lo; n <= hi; ++n) s.emplace_back(n, f(n));
  return s;
}

}  // namespace

TEST(FitDecay, ExactPowerLaw) {
  const auto f = fit_decay(samples(1, 100, [](int n) { return std::pow(n, -3.0); }), 1);
  EXPECT_NEAR(f.slope, -3.0, 1e-10);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  // symmetric index sets fit on |n|
  auto s = samples(8, 32, [](int n) { return 2.0 * std::pow(n, -2.5); });
  for (int n = 8; n <= 32; ++n) s.emplace_back(-n, 2.0 * std::pow(n, -2.5));
  EXPECT_NEAR(fit_decay(s, 8).slope, -2.5, 1e-10);
}

TEST(FitDecay, PerturbedPowerLaw) {
  const auto f = fit_decay(samples(1, 128, [](int n) { return std::pow(n, -3.0) * (1.0 + 0.1 * (n % 2 ? -1.0 : 1.0)); }), 1);
  EXPECT_NEAR(f.slope, -3.0, 0.05);
}

TEST(FitDecay, Constant) {
  EXPECT_NEAR(fit_decay(samples(8, 64, [](int) { return 0.7; }), 8).slope, 0.0, 1e-10);
}

TEST(FitDecay, InsufficientSamples) {
  try {
    fit_decay(samples(8, 12, [](int n) { return 1.0 / n; }), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientSamples);
  }
  // zeros carry no decay information
  EXPECT_THROW(fit_decay(samples(8, 40, [](int n) { return n < 36 ? 0.0 : 1.0; }), 8), Error);
  // one dyadic bin only
  EXPECT_THROW(fit_decay(samples(16, 31, [](int n) { return 1.0 / n; }), 16), Error);
}

TEST(Harness, SuitesListEveryClaimOnce) {
  HarnessConfig cfg;
  cfg.potential.kind = TestPotentialKind::zero;
  cfg.potential.band_limit = 4;
  cfg.window = 16;
  cfg.report_max = 12;
  Harness h(cfg);
  const auto rep = h.run("spectrum");
  ASSERT_EQ(rep.claims.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(rep.claims[i].id, "C" + std::to_string(i + 1));
  EXPECT_EQ(rep.claims[0].status, ClaimStatus::pass) << rep.claims[0].summary();
  EXPECT_EQ(rep.claims[1].status, ClaimStatus::pass) << rep.claims[1].summary();
  for (std::size_t i = 2; i < 10; ++i) EXPECT_EQ(rep.claims[i].status, ClaimStatus::skipped);
  EXPECT_TRUE(rep.passed());
  EXPECT_THROW(h.run("nonsense"), Error);
}

TEST(Harness, FailingCheckFailsTheClaim) {
  HarnessConfig cfg;
  cfg.window = 16;
  cfg.report_max = 12;
  cfg.potential.band_limit = 4;
  cfg.tol.zero_discriminant = 1e-30;
  Harness h(cfg);
  const auto rec = h.run_claim("C1");
  EXPECT_EQ(rec.status, ClaimStatus::fail);
  EXPECT_FALSE(rec.checks.front().passed);
  EXPECT_EQ(h.run_claim("C99").status, ClaimStatus::fail);
}

TEST(Harness, ConfigValidation) {
  HarnessConfig cfg;
  cfg.report_max = 50;
  EXPECT_THROW(Harness{cfg}, Error);
  cfg = {};
  cfg.window = 20;  // band 32 needs window >= 36
  EXPECT_THROW(Harness{cfg}, Error);
}

TEST(Harness, PotentialHashIsStable) {
  PotentialSpec s;
  s.band_limit = 6;
  EXPECT_EQ(potential_hash(s.make()), potential_hash(s.make()));
  auto t = s;
  t.seed = 12;
  EXPECT_NE(potential_hash(s.make()), potential_hash(t.make()));
}
