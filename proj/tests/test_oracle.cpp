#include <gtest/gtest.h>

#include "spdc/oracle.hpp"

using namespace spdc;

namespace {

OpticalSystemSpec with(ApertureShape a, ApertureShape b, double d1 = 1000, Vec2 sA = {}, Vec2 sB = {}) {
  OpticalSystemSpec s;
  s.d1_mm = d1;
  s.aperture_A = {a, sA};
  s.aperture_B = {b, sB};
  return s;
}

DispersionParams params() { return dispersion_params(CrystalSpec{}); }

double max_diff(const OpticalSystemSpec& s, double L, const DispersionParams& p, int n = 101) {
  double LD = L * p.D, worst = 0;
  for (int i = 0; i < n; ++i) {
    double t = LD * i / (n - 1.0);
    worst = std::max(worst, std::abs(visibility_cw(t, L, s, p) - v_oracle(t, L, s, p)));
  }
  return worst;
}

}  // namespace

TEST(OracleKernel, Properties) {
  auto p = params();
  auto s = with(Circular{5}, Circular{5});
  double pre = p.omega_p0 / (2 * kSpeedOfLight * 1000);
  EXPECT_NEAR(std::abs(v_oracle_kernel(0, 0, s, p) - pre * pre), 0.0, 1e-12 * pre * pre);
  // exchanging z and z' conjugates the phase
  complex a = v_oracle_kernel(-0.3, -1.1, s, p), b = v_oracle_kernel(-1.1, -0.3, s, p);
  EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-12 * std::abs(a));
  // the normalization integrand is real and positive on the diagonal
  for (double z : {0.0, -0.4, -1.5}) {
    complex r = r0_kernel(z, z, s, p);
    EXPECT_NEAR(r.imag(), 0.0, 1e-15);
    EXPECT_GT(r.real(), 0.0);
  }
}

TEST(OracleKernel, PinholeLimitIsPurePhase) {
  auto p = params();
  auto s = with(Circular{1e-6}, Circular{1e-6});
  double pre = p.omega_p0 / (2 * kSpeedOfLight * 1000);
  double z = -0.7, zp = -0.2;
  double ph = -p.omega_p0 * p.M * p.M * (z * z - zp * zp) / (8 * kSpeedOfLight * 1000);
  EXPECT_NEAR(std::abs(v_oracle_kernel(z, zp, s, p) - pre * pre * std::polar(1.0, ph)), 0.0, 1e-9 * pre * pre);
}

TEST(Oracle, MatchesClosedFormAcrossFamilies) {
  auto p = params();
  EXPECT_LT(max_diff(with(Circular{5}, Circular{5}), 1.5, p), 1e-6);
  EXPECT_LT(max_diff(with(Circular{2}, Circular{3}), 1.5, p), 1e-6);
  EXPECT_LT(max_diff(with(Slit{1, 7, 0}, Slit{1, 7, 0}), 1.5, p), 1e-6);
  EXPECT_LT(max_diff(with(Slit{7, 1, 0.4}, Slit{7, 1, 0.4}), 1.5, p), 1e-6);
  EXPECT_LT(max_diff(with(Annular{2, 4}, Circular{7}, 750), 1.5, p), 1e-6);
  EXPECT_LT(max_diff(with(Circular{2.5}, Circular{2.5}, 750, {0, 0.8}, {0, -0.8}), 1.5, p), 1e-6);
  EXPECT_LT(max_diff(with(Circular{5}, Circular{5}), 3.0, p), 1e-6);
}

TEST(Oracle, FullCompensationAnchors) {
  auto p = params();
  double LD = 1.5 * p.D;
  auto s = with(Circular{5}, Circular{5});
  EXPECT_NEAR(v_oracle(LD / 2, 1.5, s, p), 0.1918006508, 1e-9);
  // plane-wave limit: one up to the sinc factor
  auto pw = with(Circular{0.01}, Circular{0.01});
  double v = v_oracle(LD / 2, 1.5, pw, p);
  EXPECT_NEAR(v, visibility_cw(LD / 2, 1.5, pw, p), 1e-12);
  EXPECT_NEAR(v, sinc(sinc_scale(1.5, p, 1000) / 2), 1e-5);
  EXPECT_LT(1 - v, 2e-4);
}

TEST(Oracle, OutsideSupportIsZero) {
  auto p = params();
  auto s = with(Circular{5}, Circular{5});
  double LD = 1.5 * p.D;
  EXPECT_EQ(v_oracle(-1.0, 1.5, s, p), 0.0);
  EXPECT_EQ(v_oracle(LD + 1.0, 1.5, s, p), 0.0);
}

TEST(Oracle, NormalizationPositive) {
  auto p = params();
  for (auto s : {with(Circular{5}, Circular{5}), with(Annular{2, 4}, Circular{7}, 750), with(Slit{1, 7, 0}, Slit{7, 1, 0})})
    for (double L : {0.1, 1.5, 5.0}) EXPECT_GT(oracle_r0(L, s, p), 0.0);
}

TEST(Oracle, ToleranceRefinementWithinEstimate) {
  auto p = params();
  auto s = with(Slit{7, 1, 0}, Slit{7, 1, 0});
  double LD = 1.5 * p.D;
  for (double f : {0.2, 0.5, 0.9}) {
    auto a = v_oracle_detail(f * LD, 1.5, s, p, 1e-8);
    auto b = v_oracle_detail(f * LD, 1.5, s, p, 5e-9);
    EXPECT_LE(std::abs(a.value - b.value), a.error + 1e-14);
  }
}

TEST(Oracle, ReportContents) {
  auto p = params();
  auto s = with(Circular{5}, Circular{5});
  std::vector<double> t = {0.0, 100.0, 200.0, 300.0};
  auto r = oracle_report(t, 1.5, s, p);
  EXPECT_EQ(r["rows"].size(), 4u);
  EXPECT_LT(r["max_abs_diff"].get<double>(), 1e-6);
  EXPECT_TRUE(r.contains("sign_convention"));
}

TEST(Direct, CircularToyAgreesWithClosedForm) {
  auto p = params();
  auto t = TinySystem::circular(0.32, 64, 1.5);
  auto s = t.closed_form_equivalent(true);
  double LD = 1.5 * p.D;
  std::vector<double> taus;
  for (double f : {0.1, 0.25, 0.5, 0.75, 0.9}) taus.push_back(f * LD);
  auto r = biphoton_direct(taus, t, p);
  EXPECT_TRUE(r.diagnostics.resolved);
  for (std::size_t i = 0; i < taus.size(); ++i) EXPECT_NEAR(r.v[i], visibility_cw(taus[i], 1.5, s, p), 5e-2);
}

TEST(Direct, PinholeGivesTriangle) {
  auto p = params();
  auto t = TinySystem::circular(0.02, 64, 1.5);
  double LD = 1.5 * p.D;
  for (double f : {0.25, 0.5, 0.75}) EXPECT_NEAR(biphoton_direct(f * LD, t, p), triangle(2 * f - 1), 5e-2) << f;
}

TEST(Direct, ThinCrystalHasFullVisibility) {
  auto p = params();
  // a coarse frequency grid keeps the wide thin-crystal band away from zero frequency
  auto t = TinySystem::circular(0.32, 64, 0.05);
  t.nnu = 8;
  EXPECT_NEAR(biphoton_direct(0.5 * 0.05 * p.D, t, p), 1.0, 5e-2);
}

TEST(Direct, SlitAsymmetrySignMatches) {
  auto p = params();
  auto t = TinySystem::slit(0.32, 64, 1.5);
  auto s = t.closed_form_equivalent(false);
  double LD = 1.5 * p.D;
  std::vector<double> taus = {0.25 * LD, 0.75 * LD};
  auto r = biphoton_direct(taus, t, p);
  double direct = r.v[0] - r.v[1];
  double closed = visibility_cw(taus[0], 1.5, s, p) - visibility_cw(taus[1], 1.5, s, p);
  EXPECT_GT(std::abs(closed), 1e-2);
  EXPECT_EQ(std::signbit(direct), std::signbit(closed));
}

TEST(Direct, UnderResolvedGridThrowsWhenStrict) {
  auto p = params();
  auto t = TinySystem::circular(0.32, 64, 1.5);
  t.nq = 8;
  EXPECT_THROW(biphoton_direct(100.0, t, p), NumericalError);
  t.strict = false;
  double one[] = {100.0};
  auto r = biphoton_direct(std::span<const double>(one), t, p);
  EXPECT_FALSE(r.diagnostics.resolved);
  EXPECT_FALSE(r.diagnostics.message.empty());
  t.nq = 128;
  EXPECT_THROW(biphoton_direct(100.0, t, p), DomainError);
}
