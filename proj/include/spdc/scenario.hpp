#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spdc/describe.hpp"
#include "spdc/format.hpp"
#include "spdc/interference.hpp"
#include "spdc/svg.hpp"

namespace spdc {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& msg, int line = 0)
      : std::runtime_error(compose(field, msg, line)), field_(field), line_(line) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string compose(const std::string& field, const std::string& msg, int line) {
    std::string s = "config error";
    if (line > 0) s += " at line " + std::to_string(line);
    if (!field.empty()) s += " in '" + field + "'";
    return s + ": " + msg;
  }
  std::string field_;
  int line_;
};

class UnknownPresetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { Pattern, ThicknessSweep };

// Delay grid in units of LD.
struct TauGridSpec {
  std::size_t samples = 512;
  double start_LD = -0.25;
  double stop_LD = 1.25;
};

struct SweepSpec {
  double start_mm = 0.05;
  double stop_mm = 5.0;
  std::size_t samples = 100;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::optional<std::string> preset;
  std::string description;
  ScenarioKind kind = ScenarioKind::Pattern;
  CrystalSpec crystal;
  PumpSpec pump = CwPlane{};
  OpticalSystemSpec system;
  TauGridSpec tau;
  SweepSpec sweep;
  EngineOptions options;
};

namespace detail {

inline int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + int(std::count(text.begin(), text.begin() + std::ptrdiff_t(offset), '\n'));
}

// Strict object reader: typed access by key, unknown keys rejected.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void allow(const std::string& key) { used_.insert(key); }  // optional, may be null
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(path(key), "missing required key");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    used_.insert(key);
    return has(key) ? number(key) : fallback;
  }
  double positive(const std::string& key) {
    double v = number(key);
    if (!(v > 0.0)) throw ConfigError(path(key), "must be > 0, got " + fmt(v));
    return v;
  }
  double positive(const std::string& key, double fallback) {
    used_.insert(key);
    return has(key) ? positive(key) : fallback;
  }
  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 1) {
    used_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < (long long)min)
      throw ConfigError(path(key), "expected an integer >= " + std::to_string(min));
    return v.get<std::size_t>();
  }
  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    return has(key) ? text(key) : fallback;
  }
  bool flag(const std::string& key, bool fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw ConfigError(path(key), "expected true or false");
    return j_.at(key).get<bool>();
  }
  Vec2 vec2(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return {};
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(path(key), "expected [e1, e2]");
    return {v[0].get<double>(), v[1].get<double>()};
  }
  Fields object(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(path(key), "missing required section");
    return Fields(j_.at(key), path(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(path(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline ApertureSpec parse_aperture(Fields f, const std::filesystem::path& base_dir) {
  ApertureSpec ap;
  std::string shape = f.text("shape");
  if (shape == "circular") {
    ap.shape = Circular{f.positive("b_mm")};
  } else if (shape == "slit") {
    double a = f.positive("a_mm"), b = f.positive("b_mm");
    ap.shape = Slit{a, b, deg(f.number("rotation_deg", 0.0))};
  } else if (shape == "annular") {
    double a = f.positive("a_mm"), b = f.positive("b_mm");
    if (!(a < b)) throw ConfigError(f.path("a_mm"), "inner radius must be below outer radius");
    ap.shape = Annular{a, b};
  } else if (shape == "mask") {
    std::string file = f.text("file");
    std::filesystem::path p = file;
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw ConfigError(f.path("file"), "mask file not found: " + p.string());
    try {
      Mask m = load_mask_file(p.string());
      m.source = file;
      ap.shape = std::move(m);
    } catch (const std::exception& e) {
      throw ConfigError(f.path("file"), e.what());
    }
  } else {
    throw ConfigError(f.path("shape"), "unknown shape '" + shape + "' (circular, slit, annular, mask)");
  }
  ap.shift_mm = f.vec2("shift_mm");
  f.finish();
  return ap;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir = ".") {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", e.what(), detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  detail::Fields f(root, "");
  ScenarioConfig c;
  c.name = f.text("name", "scenario");
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("name", "must be a non-empty file-name stem");
  f.allow("preset");
  if (f.has("preset")) c.preset = f.text("preset");
  c.description = f.text("description", "");
  std::string kind = f.text("kind", "pattern");
  if (kind == "pattern") c.kind = ScenarioKind::Pattern;
  else if (kind == "thickness-sweep") c.kind = ScenarioKind::ThicknessSweep;
  else throw ConfigError("kind", "expected 'pattern' or 'thickness-sweep'");

  {
    auto cr = f.object("crystal");
    c.crystal.material = cr.text("material", "BBO");
    if (c.crystal.material != "BBO") throw ConfigError("crystal.material", "only BBO is supported");
    c.crystal.thickness_mm = cr.positive("thickness_mm");
    if (cr.has("cut_angle_deg")) {
      double a = cr.number("cut_angle_deg");
      if (!(a > 0.0 && a < 90.0)) throw ConfigError("crystal.cut_angle_deg", "must lie in (0, 90)");
      c.crystal.cut_angle_rad = deg(a);
    } else {
      cr.allow("cut_angle_deg");
    }
    cr.finish();
  }
  {
    auto pf = f.object("pump");
    std::string type = pf.text("type");
    if (type == "cw") {
      c.pump = CwPlane{pf.positive("wavelength_nm")};
    } else if (type == "pulsed") {
      double l = pf.positive("center_wavelength_nm");
      c.pump = PulsedPlane{l, pf.positive("fwhm_fs")};
    } else if (type == "finite_beam") {
      double l = pf.positive("wavelength_nm");
      c.pump = FiniteBeam{l, pf.positive("diameter_mm")};
    } else {
      throw ConfigError("pump.type", "expected 'cw', 'pulsed' or 'finite_beam'");
    }
    pf.finish();
    c.crystal.pump_wavelength_nm = pump_wavelength_nm(c.pump);
  }
  {
    auto g = f.object("geometry");
    c.system.d1_mm = g.positive("d1_mm");
    c.system.d2_mm = g.positive("d2_mm", 100.0);
    c.system.f_mm = g.positive("f_mm", 100.0);
    g.finish();
  }
  {
    auto a = f.object("apertures");
    c.system.aperture_A = detail::parse_aperture(a.object("A"), base_dir);
    c.system.aperture_B = detail::parse_aperture(a.object("B"), base_dir);
    a.finish();
  }
  if (f.has("spectral_filter")) {
    auto sf = f.object("spectral_filter");
    std::string type = sf.text("type");
    if (type == "gaussian") {
      double center = sf.positive("center_rad_per_fs");
      c.system.filter = GaussianFilter{center, sf.positive("width_rad_per_fs")};
    } else if (type != "none") {
      throw ConfigError("spectral_filter.type", "expected 'none' or 'gaussian'");
    }
    sf.finish();
  } else {
    f.allow("spectral_filter");
  }
  if (f.has("prism")) {
    auto pr = f.object("prism");
    std::string mat = pr.text("material", "FusedSilica");
    if (mat != "FusedSilica") throw ConfigError("prism.material", "only FusedSilica is supported");
    double apex = pr.positive("apex_deg", 60.0);
    if (!(apex < 180.0)) throw ConfigError("prism.apex_deg", "must be below 180");
    double lc = pr.positive("center_wavelength_nm", 2.0 * c.crystal.pump_wavelength_nm);
    try {
      c.system.prism = PrismSpec::make(deg(apex), lc);
    } catch (const std::exception& e) {
      throw ConfigError("prism", e.what());
    }
    pr.finish();
  } else {
    f.allow("prism");
  }
  if (f.has("tau")) {
    auto t = f.object("tau");
    c.tau.samples = t.count("samples", 512, 2);
    c.tau.start_LD = t.number("start_LD", -0.25);
    c.tau.stop_LD = t.number("stop_LD", 1.25);
    if (!(c.tau.stop_LD > c.tau.start_LD)) throw ConfigError("tau.stop_LD", "must exceed start_LD");
    t.finish();
  } else {
    f.allow("tau");
  }
  if (f.has("thickness_sweep")) {
    auto s = f.object("thickness_sweep");
    c.sweep.start_mm = s.positive("start_mm", 0.05);
    c.sweep.stop_mm = s.positive("stop_mm", 5.0);
    c.sweep.samples = s.count("samples", 100, 2);
    if (!(c.sweep.stop_mm > c.sweep.start_mm))
      throw ConfigError("thickness_sweep.stop_mm", "must exceed start_mm");
    s.finish();
  } else {
    f.allow("thickness_sweep");
  }
  if (f.has("options")) {
    auto o = f.object("options");
    c.options.include_sinc = o.flag("include_sinc", true);
    c.options.planewave_threshold = o.positive("planewave_threshold", 0.1);
    c.options.spectral_tolerance = o.positive("spectral_tolerance", 1e-10);
    c.options.spectral_half_width_sigmas = o.positive("spectral_half_width_sigmas", 5.0);
    o.finish();
  } else {
    f.allow("options");
  }
  f.finish();

  try {
    c.crystal.validate();
    validate(c.pump);
    c.system.validate();
  } catch (const DomainError& e) {
    throw ConfigError("", e.what());
  }
  return c;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

inline json describe_config_aperture(const ApertureSpec& ap) {
  json j = describe(ap);
  if (std::holds_alternative<Mask>(ap.shape)) {
    json m;
    m["shape"] = "mask";
    m["file"] = std::get<Mask>(ap.shape).source;
    m["shift_mm"] = j["shift_mm"];
    return m;
  }
  return j;
}

// Fully resolved config in the input schema; parses back to the same scenario.
inline json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  if (c.preset) j["preset"] = *c.preset;
  if (!c.description.empty()) j["description"] = c.description;
  j["kind"] = c.kind == ScenarioKind::Pattern ? "pattern" : "thickness-sweep";
  j["crystal"] = {{"material", c.crystal.material}, {"thickness_mm", c.crystal.thickness_mm}};
  if (c.crystal.cut_angle_rad) j["crystal"]["cut_angle_deg"] = to_deg(*c.crystal.cut_angle_rad);
  json pump = describe(c.pump);
  if (pump.contains("spectral_shape")) {
    pump.erase("spectral_shape");
    pump.erase("transform_limited");
    pump.erase("spectral_sigma_rad_per_fs");
  }
  j["pump"] = pump;
  j["geometry"] = {{"d1_mm", c.system.d1_mm}, {"d2_mm", c.system.d2_mm}, {"f_mm", c.system.f_mm}};
  j["apertures"] = {{"A", describe_config_aperture(c.system.aperture_A)},
                    {"B", describe_config_aperture(c.system.aperture_B)}};
  j["spectral_filter"] = describe(c.system.filter);
  if (c.system.prism)
    j["prism"] = {{"material", c.system.prism->material},
                  {"apex_deg", to_deg(c.system.prism->apex_rad)},
                  {"center_wavelength_nm", c.system.prism->center_wavelength_nm}};
  j["tau"] = {{"samples", c.tau.samples}, {"start_LD", c.tau.start_LD}, {"stop_LD", c.tau.stop_LD}};
  if (c.kind == ScenarioKind::ThicknessSweep)
    j["thickness_sweep"] = {{"start_mm", c.sweep.start_mm}, {"stop_mm", c.sweep.stop_mm},
                            {"samples", c.sweep.samples}};
  j["options"] = {{"include_sinc", c.options.include_sinc},
                  {"planewave_threshold", c.options.planewave_threshold},
                  {"spectral_tolerance", c.options.spectral_tolerance},
                  {"spectral_half_width_sigmas", c.options.spectral_half_width_sigmas}};
  return j;
}

inline std::vector<double> tau_grid(const ScenarioConfig& c, double LD) {
  std::vector<double> t(c.tau.samples);
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = LD * (c.tau.start_LD + (c.tau.stop_LD - c.tau.start_LD) * double(i) / double(t.size() - 1));
  return t;
}

struct ScenarioResult {
  std::string name;
  ScenarioKind kind = ScenarioKind::Pattern;
  PatternGrid grid;
  std::vector<ThicknessPoint> sweep;
  json summary;
  json metadata;
  std::string csv;
  std::vector<std::filesystem::path> files;
};

struct RunOptions {
  bool write_files = true;
  bool svg = false;
};

inline std::string pattern_csv(const PatternGrid& g) {
  std::string s = "tau_fs,V,R_over_R0\n";
  for (std::size_t i = 0; i < g.tau_fs.size(); ++i)
    s += fmt(g.tau_fs[i]) + "," + fmt(g.v[i]) + "," + fmt(g.r_normalized[i]) + "\n";
  return s;
}

inline std::string sweep_csv(const std::vector<ThicknessPoint>& pts) {
  std::string s = "L_mm,V\n";
  for (const auto& p : pts) s += fmt(p.L_mm) + "," + fmt(p.V) + "\n";
  return s;
}

inline json pattern_summary(const ScenarioConfig& c, const PatternGrid& g) {
  CrystalSpec cs = c.crystal;
  cs.pump_wavelength_nm = pump_wavelength_nm(c.pump);
  DispersionParams p = dispersion_params(cs);
  const double L = cs.thickness_mm, LD = g.LD_fs;
  auto v = [&](double t) { return visibility(t, L, c.system, p, c.pump, c.options); };
  std::size_t imin = std::min_element(g.v.begin(), g.v.end()) - g.v.begin();
  std::size_t imax = std::max_element(g.v.begin(), g.v.end()) - g.v.begin();
  json s;
  s["LD_fs"] = LD;
  s["visibility_at_full_compensation"] = g.visibility_at_full_compensation;
  s["max_V"] = g.v[imax];
  s["tau_at_max_V_fs"] = g.tau_fs[imax];
  s["min_V"] = g.v[imin];
  s["tau_at_min_V_fs"] = g.tau_fs[imin];
  s["min_R_over_R0"] = g.r_normalized[imax];
  s["asymmetry_metric"] = asymmetry_metric(v, LD, true);
  s["signed_asymmetry"] = asymmetry_metric(v, LD, false);
  s["peak_present"] = g.v[imin] < 0.0;
  s["fresnel_valid"] = g.metadata["fresnel"]["valid"];
  if (!g.metadata["planewave"].is_null()) s["planewave_valid"] = g.metadata["planewave"]["valid"];
  return s;
}

inline ScenarioResult run_scenario(const ScenarioConfig& c, const std::filesystem::path& out_dir,
                                   const RunOptions& ro = {}) {
  ScenarioResult r;
  r.name = c.name;
  r.kind = c.kind;
  try {
    CrystalSpec cs = c.crystal;
    cs.pump_wavelength_nm = pump_wavelength_nm(c.pump);
    DispersionParams p = dispersion_params(cs);
    json meta;
    meta["format"] = "spdc-scenario/1";
    meta["scenario"] = to_json(c);
    meta["engine"] = engine_metadata(c.system, cs, c.pump, p, c.options);
    if (c.kind == ScenarioKind::Pattern) {
      double LD = cs.thickness_mm * p.D;
      auto taus = tau_grid(c, LD);
      r.grid = pattern(c.system, cs, c.pump, taus, c.options);
      r.summary = pattern_summary(c, r.grid);
      r.csv = pattern_csv(r.grid);
      meta["csv_columns"] = {"tau_fs", "V", "R_over_R0"};
    } else {
      std::vector<double> Ls(c.sweep.samples);
      for (std::size_t i = 0; i < Ls.size(); ++i)
        Ls[i] = c.sweep.start_mm + (c.sweep.stop_mm - c.sweep.start_mm) * double(i) / double(Ls.size() - 1);
      r.sweep = visibility_vs_thickness(Ls, c.system, cs, c.pump, c.options);
      bool mono = true;
      for (std::size_t i = 1; i < r.sweep.size(); ++i) mono = mono && r.sweep[i].V <= r.sweep[i - 1].V;
      r.summary = {{"V_first", r.sweep.front().V},
                   {"V_last", r.sweep.back().V},
                   {"monotone_decreasing", mono}};
      for (const auto& pt : r.sweep)
        if (std::abs(pt.L_mm - 1.5) < 1e-9) r.summary["V_at_1.5mm"] = pt.V;
      r.csv = sweep_csv(r.sweep);
      meta["csv_columns"] = {"L_mm", "V"};
    }
    meta["summary"] = r.summary;
    r.metadata = meta;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError("scenario '" + c.name + "': " + e.what());
  }
  if (ro.write_files) {
    std::filesystem::create_directories(out_dir);
    auto csv = out_dir / (c.name + ".csv");
    std::ofstream(csv, std::ios::binary) << r.csv;
    r.files.push_back(csv);
    auto js = out_dir / (c.name + ".json");
    std::ofstream(js, std::ios::binary) << r.metadata.dump(2) << "\n";
    r.files.push_back(js);
    if (ro.svg) {
      auto sv = out_dir / (c.name + ".svg");
      std::ofstream out(sv, std::ios::binary);
      if (c.kind == ScenarioKind::Pattern)
        write_svg(out, {{c.name, r.grid.tau_fs, r.grid.r_normalized}}, c.name, "tau (fs)", "R/R0");
      else {
        std::vector<double> x, y;
        for (const auto& pt : r.sweep) {
          x.push_back(pt.L_mm);
          y.push_back(pt.V);
        }
        write_svg(out, {{c.name, x, y}}, c.name, "L (mm)", "V(LD/2)");
      }
      r.files.push_back(sv);
    }
  }
  return r;
}

}  // namespace spdc
