#include <CLI11.hpp>

#include <iostream>

#include "spdc/spdc.hpp"

namespace {

struct Common {
  std::string out_dir = "out";
  std::size_t tau_samples = 0;
  bool svg = false;
  bool drop_sinc = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out-dir", c.out_dir, "Directory for CSV/JSON/SVG output");
  cmd->add_option("--tau-samples", c.tau_samples, "Override the number of delay samples")->check(CLI::Range(2, 1 << 20));
  cmd->add_flag("--svg", c.svg, "Also write SVG line plots");
  cmd->add_flag("--drop-sinc", c.drop_sinc, "Replace the sinc factor by unity");
}

void print_summary(const std::string& name, const spdc::json& s) {
  std::cout << name << ": " << s.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference patterns of type-II SPDC with apertures"};
  app.require_subcommand(1);

  Common common;
  std::string config_path;
  std::vector<std::string> ids;
  double prism_apex = 60.0, prism_center = 702.0, prism_qmax = 50.0;
  int prism_samples = 41;

  auto* run = app.add_subcommand("run", "Run a scenario config (JSON)");
  run->add_option("config", config_path, "Scenario file")->required();
  add_common(run, common);

  auto* preset = app.add_subcommand("preset", "Run figure presets (ids or groups)");
  preset->add_option("ids", ids, "Preset ids or groups, e.g. fig4 fig8-vertical-slit");
  add_common(preset, common);

  auto* list = app.add_subcommand("list-presets", "List preset ids");

  auto* oracle = app.add_subcommand("oracle-check", "Compare the closed form against the oracle");
  oracle->add_option("config", config_path, "Scenario file")->required();
  oracle->add_option("--out-dir", common.out_dir, "Directory for the JSON report");
  oracle->add_option("--tau-samples", common.tau_samples, "Number of delay samples (default 101)");

  auto* prism = app.add_subcommand("prism-map", "Write the prism q -> q' table as CSV");
  prism->add_option("--out-dir", common.out_dir, "Output directory");
  prism->add_option("--apex-deg", prism_apex, "Apex angle");
  prism->add_option("--center-nm", prism_center, "Centre wavelength");
  prism->add_option("--q-max", prism_qmax, "Largest |q| in 1/mm");
  prism->add_option("--samples", prism_samples, "Number of q samples");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = spdc::load_scenario(config_path);
      if (common.tau_samples) cfg.tau.samples = common.tau_samples;
      if (common.drop_sinc) cfg.options.include_sinc = false;
      auto r = spdc::run_scenario(cfg, common.out_dir, {true, common.svg});
      print_summary(r.name, r.summary);
      for (const auto& f : r.files) std::cout << "wrote " << f.string() << "\n";
    } else if (*preset) {
      spdc::SuiteOptions o;
      if (common.tau_samples) o.tau_samples = common.tau_samples;
      o.svg = common.svg;
      o.drop_sinc = common.drop_sinc;
      auto report = spdc::run_preset_suite(ids, common.out_dir, o);
      for (const auto& e : report["presets"]) print_summary(e["id"].get<std::string>(), e["summary"]);
      if (!ids.empty()) std::cout << "wrote " << (std::filesystem::path(common.out_dir) / "summary.json").string() << "\n";
    } else if (*list) {
      for (const auto& p : spdc::presets())
        std::cout << p.id << "  [" << p.group << "]  " << p.config.description << "\n";
    } else if (*oracle) {
      auto cfg = spdc::load_scenario(config_path);
      if (!std::holds_alternative<spdc::CwPlane>(cfg.pump))
        throw spdc::ConfigError("pump.type", "oracle-check needs a cw pump");
      auto p = spdc::dispersion_params(cfg.crystal);
      double LD = cfg.crystal.thickness_mm * p.D;
      std::size_t n = common.tau_samples ? common.tau_samples : 101;
      std::vector<double> taus(n);
      for (std::size_t i = 0; i < n; ++i) taus[i] = LD * double(i) / double(n - 1);
      auto rep = spdc::oracle_report(taus, cfg.crystal.thickness_mm, cfg.system, p, cfg.options);
      std::filesystem::create_directories(common.out_dir);
      auto path = std::filesystem::path(common.out_dir) / (cfg.name + ".oracle.json");
      std::ofstream(path, std::ios::binary) << rep.dump(2) << "\n";
      std::cout << cfg.name << ": max |closed form - oracle| = " << rep["max_abs_diff"].get<double>() << "\n";
      std::cout << "wrote " << path.string() << "\n";
    } else if (*prism) {
      auto ps = spdc::PrismSpec::make(spdc::deg(prism_apex), prism_center);
      std::filesystem::create_directories(common.out_dir);
      auto path = std::filesystem::path(common.out_dir) / "prism_map.csv";
      std::ofstream out(path, std::ios::binary);
      spdc::write_prism_map_csv(out, ps, prism_qmax, prism_samples,
                                {prism_center - 5.0, prism_center, prism_center + 5.0});
      std::cout << "beta = " << spdc::beta_dispersion(ps, spdc::omega_from_wavelength_nm(prism_center)) << " s\n";
      std::cout << "wrote " << path.string() << "\n";
    }
  } catch (const spdc::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const spdc::UnknownPresetError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
