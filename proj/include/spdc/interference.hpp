#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <functional>
#include <span>
#include <vector>

#include "spdc/describe.hpp"
#include "spdc/optics.hpp"
#include "spdc/pump.hpp"
#include "spdc/pumpgeom.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

struct EngineOptions {
  bool include_sinc = true;
  double planewave_threshold = 0.1;
  double spectral_tolerance = 1e-10;
  double spectral_half_width_sigmas = 5.0;
};

inline double full_compensation_delay(double L, const DispersionParams& p) { return 0.5 * L * p.D; }

// Coefficient of the sinc argument, omega_p0 L^2 M^2 / (4 c d1).
inline double sinc_scale(double L, const DispersionParams& p, double d1) {
  return p.omega_p0 * L * L * p.M * p.M / (4.0 * kSpeedOfLight * d1);
}

namespace detail {

// Everything except the sinc factor.
inline double visibility_envelope(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p) {
  double LD = L * p.D;
  double lam = triangle(2.0 * tau / LD - 1.0);
  if (lam == 0.0) return 0.0;
  double Q = transform_rate(p, s.d1_mm) * tau;
  complex pa = ptilde_centered(s.aperture_A, {0.0, -Q});
  complex pb = ptilde_centered(s.aperture_B, {0.0, Q});
  return lam * std::real(pa * pb) * shift_modulation(tau, s.aperture_A.shift_mm, s.aperture_B.shift_mm, p, s.d1_mm);
}

}  // namespace detail

// Closed-form cw visibility. Transforms of unshifted apertures are combined
// with the shift cosine; exact for apertures with |p(x)| = |p(-x)|.
inline double visibility_cw(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p,
                            const EngineOptions& opt = {}) {
  double env = detail::visibility_envelope(tau, L, s, p);
  if (env == 0.0 || !opt.include_sinc) return env;
  double LD = L * p.D;
  double lam = triangle(2.0 * tau / LD - 1.0);
  return env * sinc(sinc_scale(L, p, s.d1_mm) * (tau / LD) * lam);
}

// Spectral average of the sinc factor over a Gaussian pump spectrum.
inline double pulsed_sinc_average(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p,
                                  const PulsedPlane& pump, const EngineOptions& opt = {}) {
  double LD = L * p.D;
  double lam = triangle(2.0 * tau / LD - 1.0);
  double base = sinc_scale(L, p, s.d1_mm) * (tau / LD);
  double sigma = pump.spectral_sigma();
  double w = opt.spectral_half_width_sigmas * sigma;
  auto g = [&](double nu) { return std::exp(-0.5 * nu * nu / (sigma * sigma)); };
  auto num = integrate([&](double nu) { return g(nu) * sinc((p.D_plus * L * nu + base) * lam); }, -w, w,
                       opt.spectral_tolerance);
  auto den = integrate(g, -w, w, opt.spectral_tolerance);
  return num.value / den.value;
}

inline double visibility_pulsed(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p,
                                const PulsedPlane& pump, const EngineOptions& opt = {}) {
  double env = detail::visibility_envelope(tau, L, s, p);
  if (env == 0.0 || !opt.include_sinc) return env;
  return env * pulsed_sinc_average(tau, L, s, p, pump, opt);
}

inline double visibility(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p,
                         const PumpSpec& pump, const EngineOptions& opt = {}) {
  if (auto* pp = std::get_if<PulsedPlane>(&pump)) return visibility_pulsed(tau, L, s, p, *pp, opt);
  return visibility_cw(tau, L, s, p, opt);
}

struct PatternGrid {
  std::vector<double> tau_fs;
  std::vector<double> v;
  std::vector<double> r_normalized;
  double visibility_at_full_compensation = 0.0;
  double LD_fs = 0.0;
  json metadata;
};

// Uniform grid over [-0.25 LD, 1.25 LD], endpoints included.
inline std::vector<double> default_tau_grid(double LD, std::size_t n = 512) {
  if (n < 2) throw DomainError("tau grid needs at least two samples");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = LD * (-0.25 + 1.5 * double(i) / double(n - 1));
  return t;
}

// (1/LD) int_0^{LD/2} (V(LD/2 + u) - V(LD/2 - u)) du, absolute or signed.
inline double asymmetry_metric(const std::function<double(double)>& v, double LD, bool absolute = true) {
  const int panels = 64;
  double h = 0.5 * LD / panels, total = 0.0;
  for (int k = 0; k < panels; ++k) {
    total += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double u) {
          double d = v(0.5 * LD + u) - v(0.5 * LD - u);
          return absolute ? std::abs(d) : d;
        },
        k * h, (k + 1) * h);
  }
  return total / LD;
}

inline json engine_metadata(const OpticalSystemSpec& s, const CrystalSpec& c, const PumpSpec& pump,
                            const DispersionParams& p, const EngineOptions& opt) {
  json m;
  m["crystal"] = describe(c);
  m["crystal"]["cut_angle_source"] = c.cut_angle_rad ? "configured" : "phase-matching solve";
  m["crystal"]["sellmeier"] = SellmeierTable::builtin().material(c.material).source;
  m["pump"] = describe(pump);
  m["system"] = describe(s);
  m["dispersion"] = describe(p);
  double LD = c.thickness_mm * p.D;
  m["derived"] = {{"LD_fs", LD},
                  {"full_compensation_delay_fs", 0.5 * LD},
                  {"sinc_scale", sinc_scale(c.thickness_mm, p, s.d1_mm)},
                  {"transform_argument_at_full_compensation_per_mm", transform_rate(p, s.d1_mm) * 0.5 * LD}};
  auto fc = fresnel_check(s, 4.0 * kPi * kSpeedOfLight / p.omega_p0);
  m["fresnel"] = {{"valid", fc.valid}, {"number", fc.number}, {"threshold", 1e-2}};
  if (auto* fb = std::get_if<FiniteBeam>(&pump)) {
    auto pv = planewave_valid(fb->diameter_mm, c.thickness_mm, p, opt.planewave_threshold);
    m["planewave"] = {{"valid", pv.valid}, {"ratio", pv.ratio}, {"threshold", pv.threshold},
                      {"breakdown_diameter_mm", planewave_breakdown_diameter(c.thickness_mm, p, pv.threshold)},
                      {"model", "plane-wave pattern; beam profile not propagated"}};
  } else {
    m["planewave"] = nullptr;
  }
  m["options"] = {{"include_sinc", opt.include_sinc},
                  {"planewave_threshold", opt.planewave_threshold},
                  {"spectral_tolerance", opt.spectral_tolerance},
                  {"spectral_half_width_sigmas", opt.spectral_half_width_sigmas}};
  m["conventions"] = {{"aperture_lengths", "b and a act as radius / half-width in the closed-form transforms"},
                      {"annular_transform", "closed form as printed, 2/(b-a) [J1(bq) - J1(aq)]/q"},
                      {"tau_origin", "engine units, dip support [0, LD]"},
                      {"M_sign", "M > 0 with e2 toward the optic axis"},
                      {"spectral_filter", "recorded only; closed form is the unfiltered case"},
                      {"prism", "not part of the transfer function"}};
  return m;
}

inline PatternGrid pattern(const OpticalSystemSpec& s, const CrystalSpec& c, const PumpSpec& pump,
                           std::span<const double> tau_grid, const EngineOptions& opt = {}) {
  s.validate();
  validate(pump);
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] >= tau_grid[i - 1])) throw DomainError("tau grid must be sorted ascending");
  CrystalSpec cs = c;
  cs.pump_wavelength_nm = pump_wavelength_nm(pump);
  DispersionParams p = dispersion_params(cs);
  const double L = cs.thickness_mm;
  PatternGrid g;
  g.LD_fs = L * p.D;
  g.tau_fs.assign(tau_grid.begin(), tau_grid.end());
  g.v.reserve(g.tau_fs.size());
  g.r_normalized.reserve(g.tau_fs.size());
  for (double t : g.tau_fs) {
    double v = visibility(t, L, s, p, pump, opt);
    g.v.push_back(v);
    g.r_normalized.push_back(1.0 - v);
  }
  g.visibility_at_full_compensation = visibility(0.5 * g.LD_fs, L, s, p, pump, opt);
  g.metadata = engine_metadata(s, cs, pump, p, opt);
  return g;
}

struct ThicknessPoint {
  double L_mm = 0.0;
  double V = 0.0;
};

inline std::vector<ThicknessPoint> visibility_vs_thickness(std::span<const double> L_grid, const OpticalSystemSpec& s,
                                                           const CrystalSpec& c, const PumpSpec& pump,
                                                           const EngineOptions& opt = {}) {
  s.validate();
  validate(pump);
  CrystalSpec cs = c;
  cs.pump_wavelength_nm = pump_wavelength_nm(pump);
  DispersionParams p = dispersion_params(cs);
  std::vector<ThicknessPoint> out;
  double prev = 0.0;
  for (double L : L_grid) {
    if (!(L > 0.0) || L < prev) throw DomainError("thickness grid must be positive and ascending");
    prev = L;
    out.push_back({L, visibility(0.5 * L * p.D, L, s, p, pump, opt)});
  }
  return out;
}

}  // namespace spdc
