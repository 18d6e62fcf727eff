#include <gtest/gtest.h>

#include "spdc/interference.hpp"

using namespace spdc;

namespace {

OpticalSystemSpec circ(double b, double d1 = 1000) {
  OpticalSystemSpec s;
  s.d1_mm = d1;
  s.aperture_A = {Circular{b}, {}};
  s.aperture_B = s.aperture_A;
  return s;
}

OpticalSystemSpec slits(double a, double b, double rot = 0.0) {
  OpticalSystemSpec s;
  s.aperture_A = {Slit{a, b, rot}, {}};
  s.aperture_B = s.aperture_A;
  return s;
}

DispersionParams params_at(double nm) {
  CrystalSpec c;
  c.pump_wavelength_nm = nm;
  return dispersion_params(c);
}

// plain trapezoid over +-10 sigma; the integrand is smooth and Gaussian-damped
double pulsed_reference(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p,
                        const PulsedPlane& pump) {
  double LD = L * p.D, lam = triangle(2 * tau / LD - 1);
  double base = sinc_scale(L, p, s.d1_mm) * tau / LD;
  double sig = pump.spectral_sigma();
  const int n = 40000;
  double h = 20 * sig / n, num = 0, den = 0;
  for (int i = 0; i <= n; ++i) {
    double nu = -10 * sig + i * h;
    double g = std::exp(-0.5 * nu * nu / (sig * sig)) * (i == 0 || i == n ? 0.5 : 1.0);
    num += g * sinc((p.D_plus * L * nu + base) * lam);
    den += g;
  }
  return visibility_cw(tau, L, s, p, {.include_sinc = false}) * num / den;
}

}  // namespace

TEST(Visibility, VanishesOutsideSupport) {
  auto p = params_at(351.1);
  auto s = circ(5);
  double LD = 1.5 * p.D;
  for (double t : {-10.0, 0.0, LD, LD + 1, 2 * LD}) EXPECT_EQ(visibility_cw(t, 1.5, s, p), 0.0);
  EXPECT_GT(visibility_cw(0.01 * LD, 1.5, s, p), 0.0);
}

TEST(Visibility, PlanewaveLimitIsTriangle) {
  auto p = params_at(351.1);
  auto s = circ(0.01);
  double LD = 1.5 * p.D;
  double worst = 0;
  for (int i = 0; i <= 200; ++i) {
    double t = LD * (-0.25 + 1.5 * i / 200.0);
    worst = std::max(worst, std::abs(visibility_cw(t, 1.5, s, p) - triangle(2 * t / LD - 1)));
  }
  EXPECT_LT(worst, 1e-3);
  // the sinc factor keeps the centre just below one; the 10 um aperture costs ~6e-6 more
  double sinc_only = sinc(sinc_scale(1.5, p, 1000) / 2);
  EXPECT_NEAR(visibility_cw(LD / 2, 1.5, s, p), sinc_only, 1e-5);
  EXPECT_LT(1 - sinc_only, 2e-4);
}

TEST(Visibility, CircularFullCompensationValue) {
  auto p = params_at(351.1);
  auto s = circ(5);
  double LD = 1.5 * p.D;
  double x = 5.0 * transform_rate(p, 1000) * LD / 2;
  double want = std::pow(airy(x), 2) * sinc(sinc_scale(1.5, p, 1000) / 2);
  EXPECT_NEAR(visibility_cw(LD / 2, 1.5, s, p), want, 1e-14);
  EXPECT_NEAR(visibility_cw(LD / 2, 1.5, s, p), 0.1918006508, 1e-9);  // oracle value
  EXPECT_LT(visibility_cw(LD / 2, 1.5, s, p), 0.5);
}

TEST(Visibility, DecreasesWithApertureAtFullCompensation) {
  auto p = params_at(351.1);
  double LD = 1.5 * p.D, prev = 1.0;
  for (double b : {0.01, 1.0, 2.0, 3.0, 5.0}) {
    double v = visibility_cw(LD / 2, 1.5, circ(b), p);
    EXPECT_LT(v, prev) << b;
    prev = v;
  }
}

TEST(Visibility, BoundedOverPresetsLikeSystems) {
  auto p = params_at(351.1);
  std::vector<OpticalSystemSpec> sys = {circ(2), circ(5), circ(7, 750), slits(1, 7), slits(7, 1), slits(7, 1, deg(-90))};
  OpticalSystemSpec sh = circ(2.5, 750);
  sh.aperture_A.shift_mm = {0, 3};
  sys.push_back(sh);
  for (const auto& s : sys) {
    double LD = 1.5 * p.D;
    for (int i = 0; i <= 300; ++i) {
      double v = visibility_cw(LD * (-0.25 + 1.5 * i / 300.0), 1.5, s, p);
      EXPECT_LE(std::abs(v), 1.0);
    }
  }
}

TEST(Visibility, CircularPatternIsAsymmetric) {
  auto p = params_at(351.1);
  auto s = circ(5);
  double LD = 1.5 * p.D;
  double a = asymmetry_metric([&](double t) { return visibility_cw(t, 1.5, s, p); }, LD);
  EXPECT_GT(a, 1e-2);
  // near the plane-wave limit the triangle is symmetric up to the tiny aperture factor
  auto pw = circ(0.01);
  double a0 = asymmetry_metric([&](double t) { return visibility_cw(t, 1.5, pw, p, {.include_sinc = false}); }, LD);
  EXPECT_LT(a0, 1e-5);
}

TEST(Visibility, HorizontalSlitLessAsymmetricThanVertical) {
  auto p = params_at(351.1);
  double LD = 1.5 * p.D;
  auto h = slits(1, 7), v = slits(7, 1);
  double ah = asymmetry_metric([&](double t) { return visibility_cw(t, 1.5, h, p); }, LD);
  double av = asymmetry_metric([&](double t) { return visibility_cw(t, 1.5, v, p); }, LD);
  EXPECT_LT(ah, av);
  EXPECT_GT(visibility_cw(LD / 2, 1.5, h, p), visibility_cw(LD / 2, 1.5, v, p));
}

TEST(Visibility, SlitRotationMatchesSwappedSlit) {
  auto p = params_at(351.1);
  double LD = 1.5 * p.D;
  auto r = slits(7, 1, deg(-90)), w = slits(1, 7);
  for (int i = 1; i < 20; ++i) {
    double t = LD * i / 20.0;
    EXPECT_NEAR(visibility_cw(t, 1.5, r, p), visibility_cw(t, 1.5, w, p), 1e-12);
  }
}

TEST(Visibility, ThinCrystalLimit) {
  auto p = params_at(351.1);
  auto s = circ(5);
  for (double L : {0.05, 0.01}) EXPECT_GT(visibility_cw(0.5 * L * p.D, L, s, p), 0.99);
}

TEST(Visibility, DropSincGivesEnvelope) {
  auto p = params_at(351.1);
  auto s = circ(3);
  double LD = 1.5 * p.D, t = 0.3 * LD;
  double env = visibility_cw(t, 1.5, s, p, {.include_sinc = false});
  double lam = triangle(2 * t / LD - 1);
  EXPECT_NEAR(visibility_cw(t, 1.5, s, p), env * sinc(sinc_scale(1.5, p, 1000) * 0.3 * lam), 1e-15);
}

TEST(Visibility, ShiftedAperturesGoNegative) {
  auto p = params_at(351.1);
  OpticalSystemSpec s = circ(2.5, 750);
  s.aperture_A.shift_mm = {0, 3};
  double LD = 1.5 * p.D, vmin = 1;
  for (int i = 0; i <= 400; ++i) vmin = std::min(vmin, visibility_cw(LD * i / 400.0, 1.5, s, p));
  EXPECT_LT(vmin, 0.0);
}

TEST(Pulsed, MatchesIndependentSpectralAverage) {
  auto p = params_at(415);
  auto s = circ(5);
  PulsedPlane pump;
  EngineOptions wide;
  wide.spectral_half_width_sigmas = 8;
  for (double L : {0.5, 1.5, 3.0}) {
    double LD = L * p.D;
    for (double f : {0.1, 0.3, 0.5, 0.8}) {
      double t = f * LD, ref = pulsed_reference(t, L, s, p, pump);
      // the default +-5 sigma window truncates ~6e-7 of the spectrum
      EXPECT_NEAR(visibility_pulsed(t, L, s, p, pump), ref, 1e-6) << L << " " << f;
      EXPECT_NEAR(visibility_pulsed(t, L, s, p, pump, wide), ref, 1e-9) << L << " " << f;
    }
  }
}

TEST(Pulsed, LowerThanCwAndApproachesItForLongPulses) {
  auto p = params_at(415);
  auto s = circ(5);
  double L = 3.0, LD = L * p.D;
  PulsedPlane pump;
  double cw = visibility_cw(LD / 2, L, s, p);
  EXPECT_LT(visibility_pulsed(LD / 2, L, s, p, pump), cw);
  double prev = 1.0;
  for (double ratio : {1e-1, 1e-2, 1e-3}) {
    PulsedPlane lp{415, 80 / ratio};
    double err = std::abs(visibility_pulsed(LD / 2, L, s, p, lp) - cw);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(Pulsed, ThickerCrystalsLoseMore) {
  auto p = params_at(415);
  auto s = circ(0.01);
  PulsedPlane pump;
  double prev = 1.1;
  for (double L : {0.5, 1.5, 3.0}) {
    double v = visibility_pulsed(0.5 * L * p.D, L, s, p, pump);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Sweep, PulsedBelowCwPointwise) {
  CrystalSpec c;
  auto s = circ(3);
  std::vector<double> L;
  for (int i = 1; i <= 40; ++i) L.push_back(0.1 * i);
  auto cw = visibility_vs_thickness(L, s, c, CwPlane{415});
  auto pu = visibility_vs_thickness(L, s, c, PulsedPlane{});
  ASSERT_EQ(cw.size(), pu.size());
  for (std::size_t i = 0; i < cw.size(); ++i) EXPECT_LE(pu[i].V, cw[i].V + 1e-12) << L[i];
  std::vector<double> bad = {1.0, 0.5};
  EXPECT_THROW(visibility_vs_thickness(bad, s, c, CwPlane{}), DomainError);
}

TEST(Sweep, CwDecreasesWithThickness) {
  CrystalSpec c;
  auto s = circ(5);
  std::vector<double> L = {0.25, 0.5, 1.0, 1.5, 2.0};
  auto r = visibility_vs_thickness(L, s, c, CwPlane{});
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(r[i].V, r[i - 1].V);
}

TEST(Pattern, GridAndMetadata) {
  CrystalSpec c;
  auto s = circ(5);
  auto p = params_at(351.1);
  auto taus = default_tau_grid(1.5 * p.D, 101);
  EXPECT_DOUBLE_EQ(taus.front(), -0.25 * 1.5 * p.D);
  EXPECT_NEAR(taus.back(), 1.25 * 1.5 * p.D, 1e-12);
  auto g = pattern(s, c, FiniteBeam{351.1, 5}, taus);
  ASSERT_EQ(g.v.size(), 101u);
  for (std::size_t i = 0; i < g.v.size(); ++i) EXPECT_DOUBLE_EQ(g.r_normalized[i], 1.0 - g.v[i]);
  EXPECT_EQ(g.r_normalized.front(), 1.0);
  EXPECT_NEAR(g.visibility_at_full_compensation, 0.1918006508, 1e-9);
  for (const char* k : {"crystal", "pump", "system", "dispersion", "derived", "fresnel", "planewave", "options", "conventions"})
    EXPECT_TRUE(g.metadata.contains(k)) << k;
  EXPECT_TRUE(g.metadata["planewave"]["valid"].get<bool>());
  EXPECT_NEAR(g.metadata["planewave"]["ratio"].get<double>(), 0.0124, 2e-4);
  std::vector<double> unsorted = {1.0, 0.0};
  EXPECT_THROW(pattern(s, c, CwPlane{}, unsorted), DomainError);
  EXPECT_THROW(default_tau_grid(100, 1), DomainError);
}

TEST(Asymmetry, SignedAndAbsolute) {
  double LD = 10;
  auto ramp = [&](double t) { return t / LD; };
  EXPECT_NEAR(asymmetry_metric(ramp, LD, false), 0.25, 1e-12);
  EXPECT_NEAR(asymmetry_metric(ramp, LD, true), 0.25, 1e-12);
  auto down = [&](double t) { return -t / LD; };
  EXPECT_NEAR(asymmetry_metric(down, LD, false), -0.25, 1e-12);
}
