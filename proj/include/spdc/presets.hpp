#pragma once

#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include "spdc/scenario.hpp"

namespace spdc {

struct Preset {
  std::string id;
  std::string group;
  ScenarioConfig config;
};

namespace detail {

inline ApertureSpec circ(double b, Vec2 shift = {}) { return {Circular{b}, shift}; }
inline ApertureSpec slit(double a, double b, double rot_deg = 0.0, Vec2 shift = {}) {
  return {Slit{a, b, deg(rot_deg)}, shift};
}

inline ScenarioConfig base(const std::string& id, const std::string& desc, PumpSpec pump, double L, double d1,
                           ApertureSpec A, ApertureSpec B) {
  ScenarioConfig c;
  c.name = id;
  c.preset = id;
  c.description = desc;
  c.pump = pump;
  c.crystal.thickness_mm = L;
  c.crystal.pump_wavelength_nm = pump_wavelength_nm(pump);
  c.system.d1_mm = d1;
  c.system.aperture_A = std::move(A);
  c.system.aperture_B = std::move(B);
  return c;
}

inline std::string mm(double v) { return fmt(v) + "mm"; }

inline std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  const PumpSpec cw = CwPlane{351.1};
  const PumpSpec pulsed = PulsedPlane{415.0, 80.0};
  auto add = [&](std::string group, ScenarioConfig c) { out.push_back({c.name, std::move(group), std::move(c)}); };

  for (double b : {2.0, 3.0, 5.0})
    add("fig4", base("fig4-b" + mm(b), "cw circular aperture at 1 m", cw, 1.5, 1000, circ(b), circ(b)));
  add("fig4", base("fig4-planewave", "1-D plane-wave limit (10 um aperture)", cw, 1.5, 1000, circ(0.01), circ(0.01)));

  auto sweep = [&](const std::string& group, const std::string& id, const std::string& desc, PumpSpec pump, double b) {
    auto c = base(id, desc, pump, 1.5, 1000, circ(b), circ(b));
    c.kind = ScenarioKind::ThicknessSweep;
    c.sweep = {0.05, 5.0, 100};
    add(group, c);
  };
  for (double b : {2.0, 3.0, 5.0}) sweep("fig5", "fig5-b" + mm(b), "cw visibility vs thickness", cw, b);
  sweep("fig5", "fig5-planewave", "cw visibility vs thickness, plane-wave limit", cw, 0.01);

  for (double L : {0.5, 1.5, 3.0})
    add("fig6", base("fig6-L" + mm(L), "80 fs pulsed, 5 mm aperture at 1 m", pulsed, L, 1000, circ(5), circ(5)));

  for (double b : {2.0, 3.0, 5.0}) sweep("fig7", "fig7-b" + mm(b), "pulsed visibility vs thickness", pulsed, b);
  sweep("fig7", "fig7-planewave", "pulsed visibility vs thickness, plane-wave limit", pulsed, 0.01);

  add("fig8", base("fig8-horizontal-slit", "1x7 mm slit, narrow along e2", cw, 1.5, 1000, slit(1, 7), slit(1, 7)));
  add("fig8", base("fig8-vertical-slit", "1x7 mm slit, narrow along e1", cw, 1.5, 1000, slit(7, 1), slit(7, 1)));

  // crystal turned +45 deg in the lab: lab rotations -45/+45 are -90/0 in the crystal frame
  add("fig9", base("fig9-slit-minus45", "vertical slit rotated -45 deg in the lab", cw, 1.5, 1000,
                   slit(7, 1, -90), slit(7, 1, -90)));
  add("fig9", base("fig9-slit-plus45", "vertical slit rotated +45 deg in the lab", cw, 1.5, 1000,
                   slit(7, 1, 0), slit(7, 1, 0)));

  for (double b : {2.5, 5.0, 7.0})
    add("fig11", base("fig11-b" + mm(b), "cw circular aperture at 750 mm", cw, 1.5, 750, circ(b), circ(b)));
  for (double b : {2.5, 5.0, 7.0})
    add("fig12", base("fig12-b" + mm(b), "80 fs pulsed, circular aperture at 750 mm", pulsed, 1.5, 750, circ(b),
                      circ(b)));

  for (double a : {5.0, 1.5, 0.2}) {
    add("fig13", base("fig13-pump" + mm(a), "pump diameter study, 2.5 mm aperture at 750 mm",
                      FiniteBeam{351.1, a}, 1.5, 750, circ(2.5), circ(2.5)));
  }
  for (double a : {5.0, 1.5, 0.2}) {
    add("fig14", base("fig14-pump" + mm(a), "pump diameter study, 5 mm aperture at 750 mm",
                      FiniteBeam{351.1, a}, 1.5, 750, circ(5), circ(5)));
  }

  add("fig15", base("fig15-horizontal-slits", "1x7 mm horizontal slits at 750 mm", cw, 1.5, 750, slit(1, 7),
                    slit(1, 7)));
  add("fig15", base("fig15-vertical-slits-shifted", "1x7 mm vertical slits, relative shift 1.6 mm along e2", cw,
                    1.5, 750, slit(7, 1, 0, {0, 0.8}), slit(7, 1, 0, {0, -0.8})));

  for (double s : {0.0, 1.0, 2.0, 3.0}) {
    add("fig16", base("fig16-shift" + mm(s), "annulus 2/4 mm shifted along e2 vs 7 mm circle", cw, 1.5, 750,
                      {Annular{2, 4}, {0, s}}, circ(7)));
  }
  return out;
}

}  // namespace detail

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = detail::build_presets();
  return p;
}

inline std::vector<std::string> preset_groups() {
  std::vector<std::string> g;
  for (const auto& p : presets())
    if (g.empty() || g.back() != p.group) g.push_back(p.group);
  return g;
}

// Group ids expand to their members; order follows the registry.
inline std::vector<const Preset*> resolve_presets(const std::vector<std::string>& ids) {
  std::vector<const Preset*> out;
  for (const auto& id : ids) {
    bool found = false;
    for (const auto& p : presets())
      if (p.id == id || p.group == id) {
        if (std::find(out.begin(), out.end(), &p) == out.end()) out.push_back(&p);
        found = true;
      }
    if (!found) {
      std::string msg = "unknown preset '" + id + "'; available:";
      for (const auto& g : preset_groups()) msg += " " + g;
      for (const auto& p : presets()) msg += " " + p.id;
      throw UnknownPresetError(msg);
    }
  }
  return out;
}

struct SuiteOptions {
  std::optional<std::size_t> tau_samples;
  bool svg = false;
  bool drop_sinc = false;
  bool parallel = true;
  bool write_files = true;
};

inline ScenarioConfig apply_overrides(ScenarioConfig c, const SuiteOptions& o) {
  if (o.tau_samples) c.tau.samples = *o.tau_samples;
  if (o.drop_sinc) c.options.include_sinc = false;
  return c;
}

inline json run_preset_suite(const std::vector<std::string>& ids, const std::filesystem::path& out_dir,
                             const SuiteOptions& o = {}) {
  json report;
  report["format"] = "spdc-suite/1";
  report["presets"] = json::array();
  if (ids.empty()) return report;
  auto chosen = resolve_presets(ids);
  RunOptions ro{o.write_files, o.svg};
  std::vector<std::future<ScenarioResult>> jobs;
  for (const Preset* p : chosen) {
    ScenarioConfig c = apply_overrides(p->config, o);
    auto job = [c, out_dir, ro] { return run_scenario(c, out_dir, ro); };
    jobs.push_back(std::async(o.parallel ? std::launch::async : std::launch::deferred, job));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    ScenarioResult r = jobs[i].get();
    json e;
    e["id"] = chosen[i]->id;
    e["group"] = chosen[i]->group;
    e["description"] = chosen[i]->config.description;
    e["csv"] = r.name + ".csv";
    e["summary"] = r.summary;
    report["presets"].push_back(std::move(e));
  }
  if (o.write_files) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir / "summary.json", std::ios::binary) << report.dump(2) << "\n";
  }
  return report;
}

}  // namespace spdc
