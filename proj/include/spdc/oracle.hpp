#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spdc/describe.hpp"
#include "spdc/interference.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

// Integrand of the visibility numerator on the (z, z') square, for z, z' in [-L, 0].
inline complex v_oracle_kernel(double z, double zp, const OpticalSystemSpec& s, const DispersionParams& p) {
  double pre = p.omega_p0 / (2.0 * kSpeedOfLight * s.d1_mm);
  double a = p.omega_p0 * p.M / (4.0 * kSpeedOfLight * s.d1_mm);
  double phase = -p.omega_p0 * p.M * p.M * (z * z - zp * zp) / (8.0 * kSpeedOfLight * s.d1_mm);
  double arg = a * (z + zp);
  return pre * pre * std::polar(1.0, phase) * ptilde(s.aperture_A, {0.0, arg}) * ptilde(s.aperture_B, {0.0, -arg});
}

// Integrand of the normalization.
inline complex r0_kernel(double z, double zp, const OpticalSystemSpec& s, const DispersionParams& p) {
  double pre = p.omega_p0 / (2.0 * kSpeedOfLight * s.d1_mm);
  double a = p.omega_p0 * p.M / (4.0 * kSpeedOfLight * s.d1_mm);
  double phase = -p.omega_p0 * p.M * p.M * (z * z - zp * zp) / (8.0 * kSpeedOfLight * s.d1_mm);
  double arg = a * (z - zp);
  return pre * pre * std::polar(1.0, phase) * ptilde(s.aperture_A, {0.0, arg}) * ptilde(s.aperture_B, {0.0, -arg});
}

struct OracleValue {
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate, relative to R0
  double r0 = 0.0;
};

// The frequency integral of both expressions is a delta function: z = z' for
// the normalization and z + z' = -2 tau / D for the numerator. The common
// 2 pi / D factor cancels, leaving two 1-D integrals.
inline double oracle_r0(double L, const OpticalSystemSpec& s, const DispersionParams& p, double tol = 1e-12) {
  auto r = integrate([&](double z) { return std::real(r0_kernel(z, z, s, p)); }, -L, 0.0, tol);
  if (!(r.value > 0.0)) throw NumericalError("oracle normalization is not positive");
  return r.value;
}

inline OracleValue v_oracle_detail(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p,
                                   double tol = 1e-12) {
  OracleValue out;
  out.r0 = oracle_r0(L, s, p, tol);
  double sum = -2.0 * tau / p.D;
  double lo = std::max(-L, sum), hi = std::min(0.0, sum + L);
  if (!(hi > lo)) return out;
  auto r = integrate_complex([&](double z) { return v_oracle_kernel(z, sum - z, s, p); }, lo, hi, tol);
  out.value = std::real(r.value) / out.r0;
  out.error = r.error / out.r0;
  return out;
}

inline double v_oracle(double tau, double L, const OpticalSystemSpec& s, const DispersionParams& p,
                       double tol = 1e-12) {
  return v_oracle_detail(tau, L, s, p, tol).value;
}

// Comparison table between the closed form and the oracle.
inline json oracle_report(std::span<const double> taus, double L, const OpticalSystemSpec& s,
                          const DispersionParams& p, const EngineOptions& opt = {}) {
  json rows = json::array();
  double worst = 0.0;
  for (double t : taus) {
    double cf = visibility_cw(t, L, s, p, opt);
    auto o = v_oracle_detail(t, L, s, p);
    double d = std::abs(cf - o.value);
    worst = std::max(worst, d);
    rows.push_back({{"tau_fs", t}, {"closed_form", cf}, {"oracle", o.value}, {"abs_diff", d},
                    {"quadrature_error", o.error}});
  }
  json r;
  r["system"] = describe(s);
  r["dispersion"] = describe(p);
  r["thickness_mm"] = L;
  r["include_sinc"] = opt.include_sinc;
  r["sign_convention"] =
      "kernel signs as printed: the numerator constraint z + z' = -2 tau / D places the dip on [0, LD] "
      "and reproduces the closed form";
  r["max_abs_diff"] = worst;
  r["rows"] = std::move(rows);
  return r;
}

// Direct evaluation of the two-photon amplitude on a coarse grid with one
// transverse dimension (e2). The pupil amplitudes are sampled over [-b, b].
struct TinySystem {
  double L_mm = 1.5;
  double d1_mm = 64.0;
  double d2_mm = 100.0;
  double f_mm = 100.0;
  double half_width_mm = 0.32;
  std::function<double(double)> amplitude_A;
  std::function<double(double)> amplitude_B;
  std::size_t nq = 64;
  std::size_t nnu = 64;
  std::size_t ny = 64;
  double q_extent_factor = 1.6;  // q_max in units of omega_s b / (c d1)
  bool strict = true;            // throw when a sampling criterion fails

  // 1-D profile whose squared transform is 2 J1(bq)/(bq): the projection of a disk of radius b.
  static TinySystem circular(double b, double d1, double L) {
    TinySystem t;
    t.L_mm = L;
    t.d1_mm = d1;
    t.half_width_mm = b;
    auto prof = [b](double y) { return std::pow(std::max(b * b - y * y, 0.0), 0.25); };
    t.amplitude_A = prof;
    t.amplitude_B = prof;
    return t;
  }

  static TinySystem slit(double b, double d1, double L) {
    TinySystem t;
    t.L_mm = L;
    t.d1_mm = d1;
    t.half_width_mm = b;
    auto prof = [b](double y) { return std::abs(y) <= b ? 1.0 : 0.0; };
    t.amplitude_A = prof;
    t.amplitude_B = prof;
    return t;
  }

  // Equivalent 2-D system for the closed form.
  OpticalSystemSpec closed_form_equivalent(bool circular_profile) const {
    OpticalSystemSpec s;
    s.d1_mm = d1_mm;
    s.d2_mm = d2_mm;
    s.f_mm = f_mm;
    if (circular_profile) {
      s.aperture_A.shape = Circular{half_width_mm};
    } else {
      // a 1-D slit of half-width b along e2, unbounded along e1
      s.aperture_A.shape = Slit{half_width_mm, 1e-9, 0.0};
    }
    s.aperture_B = s.aperture_A;
    return s;
  }
};

struct DirectDiagnostics {
  double chirp_step = 0.0;     // largest Fresnel phase step between q samples, rad
  double aperture_step = 0.0;  // q step times aperture width, rad
  double pixel_step = 0.0;     // q_max times y step, rad
  bool resolved = true;
  std::string message;
};

struct DirectResult {
  std::vector<double> tau_fs;
  std::vector<double> v;
  double r0 = 0.0;
  DirectDiagnostics diagnostics;
};

inline DirectResult biphoton_direct(std::span<const double> taus, const TinySystem& t, const DispersionParams& p) {
  if (!(t.L_mm > 0.0 && t.d1_mm > 0.0 && t.f_mm > 0.0 && t.half_width_mm > 0.0))
    throw DomainError("tiny system needs positive L, d1, f and aperture width");
  if (t.nq < 4 || t.nnu < 2 || t.ny < 4) throw DomainError("tiny system grid too small");
  if (t.nq > 64 || t.nnu > 64) throw DomainError("tiny system limited to 64 q and 64 frequency samples");
  const double c = kSpeedOfLight;
  const double LD = t.L_mm * p.D;
  const double ws = p.omega_p0 / 2.0;
  const std::size_t nq = t.nq, nnu = t.nnu, ny = t.ny;

  const double b = t.half_width_mm;
  const double dy = 2.0 * b / double(ny);
  std::vector<double> y(ny), pa(ny), pb(ny);
  for (std::size_t i = 0; i < ny; ++i) {
    y[i] = (double(i) - 0.5 * double(ny - 1)) * dy;
    pa[i] = t.amplitude_A(y[i]);
    pb[i] = t.amplitude_B(y[i]);
  }
  const double qmax = t.q_extent_factor * ws * b / (c * t.d1_mm);
  const double dq = 2.0 * qmax / double(nq);
  std::vector<double> q(nq);
  for (std::size_t i = 0; i < nq; ++i) q[i] = (double(i) - 0.5 * double(nq - 1)) * dq;
  // frequency period 2 LD keeps the triangle support clear of its images
  const double dnu = kPi / (2.0 * LD);
  std::vector<double> nu(nnu);
  for (std::size_t i = 0; i < nnu; ++i) nu[i] = (double(i) - 0.5 * double(nnu - 1)) * dnu;
  // detector grid: DFT dual of the aperture grid, x = c f k / omega
  const std::size_t nk = ny;
  const double dk = 2.0 * kPi / (double(ny) * dy);
  std::vector<double> k(nk);
  for (std::size_t i = 0; i < nk; ++i) k[i] = (double(i) - double(ny / 2)) * dk;

  DirectResult res;
  auto& dg = res.diagnostics;
  const double w_min = ws - std::abs(nu.back());
  if (!(w_min > 0.0)) throw DomainError("frequency grid reaches zero frequency");
  dg.chirp_step = c * t.d1_mm * qmax * dq / w_min;
  dg.aperture_step = dq * 2.0 * b;
  dg.pixel_step = qmax * dy;
  if (dg.chirp_step > kPi / 2) dg.message += "Fresnel chirp under-sampled in q; ";
  if (dg.aperture_step > kPi) dg.message += "q step too coarse for the aperture width; ";
  if (dg.pixel_step > kPi) dg.message += "aperture sampling too coarse for q range; ";
  dg.resolved = dg.message.empty();
  if (!dg.resolved && t.strict) throw NumericalError("biphoton_direct: " + dg.message);

  // pupil sums P(k, q) = sum_y p(y) exp(-i (k - q) y) dy, independent of frequency
  auto pupil = [&](const std::vector<double>& prof) {
    std::vector<complex> P(nk * nq);
    for (std::size_t a = 0; a < nk; ++a)
      for (std::size_t j = 0; j < nq; ++j) {
        complex s = 0.0;
        for (std::size_t i = 0; i < ny; ++i)
          if (prof[i] != 0.0) s += prof[i] * std::polar(1.0, -(k[a] - q[j]) * y[i]);
        P[a * nq + j] = s * dy;
      }
    return P;
  };
  const auto PA = pupil(pa), PB = pupil(pb);

  // transfer function on the detector grid at frequency w
  auto transfer = [&](const std::vector<complex>& P, double w) {
    std::vector<complex> H(nk * nq);
    for (std::size_t a = 0; a < nk; ++a) {
      double x = c * t.f_mm * k[a] / w;
      complex lens = std::polar(1.0, w * (t.d1_mm + t.d2_mm + t.f_mm) / c -
                                         w * x * x * (t.d2_mm / t.f_mm - 1.0) / (2.0 * c * t.f_mm));
      for (std::size_t j = 0; j < nq; ++j)
        H[a * nq + j] = lens * std::polar(1.0, -c * t.d1_mm * q[j] * q[j] / (2.0 * w)) * P[a * nq + j];
    }
    return H;
  };

  // crystal factor: int_{-L}^0 exp(-i z Delta) dz
  auto phi = [&](double nu_o, double q_o) {
    double d = delta_mismatch(nu_o, {0.0, q_o}, p);
    return t.L_mm * sinc(t.L_mm * d / 2.0) * std::polar(1.0, t.L_mm * d / 2.0);
  };

  std::vector<double> s11(nnu), s22(nnu);
  std::vector<complex> s12(nnu);
  std::vector<complex> T1(nk * nk), T2(nk * nk), c1(nq), c2(nq);
  for (std::size_t n = 0; n < nnu; ++n) {
    const double wA = ws + nu[n], wB = p.omega_p0 - wA;
    const auto HA = transfer(PA, wA), HB = transfer(PB, wB);
    // e photon at A (q), o photon at B (-q): o detuning -nu
    // o photon at A (-q), e photon at B (q): o detuning +nu
    for (std::size_t j = 0; j < nq; ++j) {
      c1[j] = phi(-nu[n], -q[j]) * dq;
      c2[j] = phi(nu[n], -q[j]) * dq;
    }
    for (std::size_t a = 0; a < nk; ++a)
      for (std::size_t bb = 0; bb < nk; ++bb) {
        complex t1 = 0.0, t2 = 0.0;
        for (std::size_t j = 0; j < nq; ++j) {
          const std::size_t jm = nq - 1 - j;  // index of -q
          t1 += HA[a * nq + j] * c1[j] * HB[bb * nq + jm];
          t2 += HA[a * nq + jm] * c2[j] * HB[bb * nq + j];
        }
        T1[a * nk + bb] = t1;
        T2[a * nk + bb] = t2;
      }
    const double dxa = c * t.f_mm * dk / wA, dxb = c * t.f_mm * dk / wB;
    double a11 = 0.0, a22 = 0.0;
    complex a12 = 0.0;
    for (std::size_t i = 0; i < nk * nk; ++i) {
      a11 += std::norm(T1[i]);
      a22 += std::norm(T2[i]);
      a12 += T1[i] * std::conj(T2[i]);
    }
    s11[n] = a11 * dxa * dxb;
    s22[n] = a22 * dxa * dxb;
    s12[n] = a12 * dxa * dxb;
  }
  for (std::size_t n = 0; n < nnu; ++n) res.r0 += s11[n] + s22[n];
  if (!(res.r0 > 0.0)) throw NumericalError("biphoton_direct: zero normalization");
  for (double tau : taus) {
    complex cross = 0.0;
    for (std::size_t n = 0; n < nnu; ++n) cross += std::polar(1.0, -2.0 * nu[n] * tau) * s12[n];
    res.tau_fs.push_back(tau);
    res.v.push_back(2.0 * std::real(cross) / res.r0);
  }
  return res;
}

inline double biphoton_direct(double tau, const TinySystem& t, const DispersionParams& p) {
  double one[] = {tau};
  return biphoton_direct(std::span<const double>(one), t, p).v.front();
}

}  // namespace spdc
