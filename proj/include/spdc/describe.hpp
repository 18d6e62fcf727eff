#pragma once

#include <json.hpp>

#include "spdc/crystal.hpp"
#include "spdc/optics.hpp"
#include "spdc/pump.hpp"

namespace spdc {

using json = nlohmann::ordered_json;


inline json describe(const ApertureSpec& ap) {
  json j;
  j["shape"] = shape_name(ap.shape);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circular>) {
          j["b_mm"] = s.b_mm;
        } else if constexpr (std::is_same_v<T, Slit>) {
          j["a_mm"] = s.a_mm;
          j["b_mm"] = s.b_mm;
          j["rotation_deg"] = to_deg(s.rotation_rad);
        } else if constexpr (std::is_same_v<T, Annular>) {
          j["a_mm"] = s.a_mm;
          j["b_mm"] = s.b_mm;
        } else {
          j["file"] = s.source;
          j["rows"] = s.rows;
          j["cols"] = s.cols;
          j["pitch_mm"] = s.pitch_mm;
        }
      },
      ap.shape);
  j["shift_mm"] = {ap.shift_mm.e1, ap.shift_mm.e2};
  return j;
}

inline json describe(const SpectralFilter& f) {
  if (auto* g = std::get_if<GaussianFilter>(&f))
    return {{"type", "gaussian"}, {"center_rad_per_fs", g->center}, {"width_rad_per_fs", g->width}};
  return {{"type", "none"}};
}

inline json describe(const OpticalSystemSpec& s) {
  json j;
  j["d1_mm"] = s.d1_mm;
  j["d2_mm"] = s.d2_mm;
  j["f_mm"] = s.f_mm;
  j["aperture_A"] = describe(s.aperture_A);
  j["aperture_B"] = describe(s.aperture_B);
  j["spectral_filter"] = describe(s.filter);
  if (s.prism)
    j["prism"] = {{"material", s.prism->material},
                  {"apex_deg", to_deg(s.prism->apex_rad)},
                  {"phi0_deg", to_deg(s.prism->phi0_rad)},
                  {"center_wavelength_nm", s.prism->center_wavelength_nm}};
  else
    j["prism"] = nullptr;
  return j;
}

inline json describe(const PumpSpec& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CwPlane>) return {{"type", "cw"}, {"wavelength_nm", v.wavelength_nm}};
        else if constexpr (std::is_same_v<T, PulsedPlane>)
          return {{"type", "pulsed"},
                  {"center_wavelength_nm", v.center_wavelength_nm},
                  {"fwhm_fs", v.fwhm_duration_fs},
                  {"spectral_shape", "gaussian"},
                  {"transform_limited", true},
                  {"spectral_sigma_rad_per_fs", v.spectral_sigma()}};
        else
          return {{"type", "finite_beam"}, {"wavelength_nm", v.wavelength_nm}, {"diameter_mm", v.diameter_mm}};
      },
      p);
}

inline json describe(const CrystalSpec& c) {
  json j;
  j["material"] = c.material;
  j["thickness_mm"] = c.thickness_mm;
  j["cut_angle_deg"] = c.cut_angle_rad ? json(to_deg(*c.cut_angle_rad)) : json(nullptr);
  j["pump_wavelength_nm"] = c.pump_wavelength_nm;
  return j;
}

inline json describe(const DispersionParams& p) {
  return {{"omega_p0_rad_per_fs", p.omega_p0}, {"theta_oa_deg", to_deg(p.theta_oa)},
          {"K_o_per_mm", p.K_o},           {"K_e_per_mm", p.K_e},
          {"inv_u_o_fs_per_mm", p.inv_u_o}, {"inv_u_e_fs_per_mm", p.inv_u_e},
          {"inv_u_p_fs_per_mm", p.inv_u_p}, {"D_fs_per_mm", p.D},
          {"D_plus_fs_per_mm", p.D_plus},   {"M", p.M},
          {"M_p", p.M_p}};
}

}  // namespace spdc
