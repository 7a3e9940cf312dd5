// spdc-rates: pair-rate, spectrum and sweep tables for single-mode SPDC.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdc/commands.hpp"
#include "spdc/config.hpp"
#include "spdc/csv.hpp"
#include "spdc/errors.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  bool force = false;
  std::vector<std::string> overrides;
  std::string material_db = SPDC_DEFAULT_MATERIAL_DB;
  std::string angle_convention;
};

spdc::rates::SourceConfig load(const CommonFlags& flags) {
  if (flags.config_path.empty()) {
    throw spdc::Error(spdc::ErrorCode::ValidationError,
                      "this command needs --config PATH");
  }
  spdc::config::LoadOptions options;
  options.material_db = flags.material_db;
  options.overrides = flags.overrides;
  if (!flags.angle_convention.empty()) {
    options.angle_convention =
        spdc::config::parse_angle_convention(flags.angle_convention);
  }
  return spdc::config::load_config(flags.config_path, options);
}

json manifest_base(const std::string& command, const CommonFlags& flags) {
  json m = json::object();
  m["tool"] = "spdc-rates";
  m["command"] = command;
  m["config_path"] = flags.config_path.empty() ? json(nullptr) : json(flags.config_path);
  m["material_db"] = flags.material_db;
  m["overrides"] = flags.overrides;
  m["angle_convention_flag"] =
      flags.angle_convention.empty() ? json(nullptr) : json(flags.angle_convention);
  return m;
}

void attach_config(json& m, const spdc::rates::SourceConfig& cfg) {
  m["normalized_config"] = json::parse(spdc::config::to_json_text(cfg));
}

void finish(spdc::cli::OutputDir& out, json manifest, const std::string& command) {
  const std::string name = command + ".manifest.json";
  manifest["outputs"] = out.written();
  out.write(name, manifest.dump(2) + "\n");
}

json grid_json(const spdc::cli::PhiZGrid& g) {
  return {{"xi", g.xis}, {"delta_phi_min", g.dphi_min},
          {"delta_phi_max", g.dphi_max}, {"points", g.points}};
}
json grid_json(const spdc::cli::XiGrid& g) {
  return {{"xi_min", g.xi_min}, {"xi_max", g.xi_max}, {"points", g.points}};
}
json grid_json(const spdc::cli::GammaGrid& g) {
  return {{"gamma_min", g.gamma_min}, {"gamma_max", g.gamma_max}, {"points", g.points}};
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int report_error(const std::string& code, int status, const std::string& what) {
  std::cerr << "spdc-rates: error[" << code << "] exit=" << status << ": "
            << one_line(what) << "\n";
  return status;
}

void print_rate_summary(const spdc::rates::RateReport& r) {
  std::cout << "Xi                 " << r.Xi << "\n"
            << "S                  " << r.S << "\n"
            << "R_T [1/s]          " << r.R_T << "\n";
  if (r.R_T_thin) std::cout << "R_T thin [1/s]     " << *r.R_T_thin << "\n";
  std::cout << "efficiency [1/mm]  " << r.efficiency_per_mm << "\n";
  if (r.efficiency_per_mm_sr) {
    std::cout << "efficiency [1/(mm sr)] " << *r.efficiency_per_mm_sr << "\n";
  }
  for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Absolute SPDC pair rates into single Gaussian modes", "spdc-rates"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags flags;
  app.add_option("--config", flags.config_path, "Source configuration (JSON)");
  app.add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--force", flags.force, "Overwrite existing output files");
  app.add_option("--set", flags.overrides, "Override a config field, KEY=VALUE")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--material-db", flags.material_db, "Material database (JSON)")
      ->capture_default_str();
  app.add_option("--angle-convention", flags.angle_convention,
                 "How the external collection angle enters the geometry")
      ->check(CLI::IsMember({"internal", "external"}));

  auto* rate = app.add_subcommand("rate", "Total rate, efficiencies and spectrum");
  std::size_t spectral_points = 4001;
  rate->add_option("--spectral-points", spectral_points, "Spectral samples")
      ->capture_default_str();

  spdc::cli::PhiZGrid phi_grid;
  auto* spectrum = app.add_subcommand(
      "spectrum", "Longitudinal overlap Phi_z/l versus phase mismatch");
  spectrum->add_option("--xi", phi_grid.xis, "Walk-off parameters")->expected(1, -1);
  spectrum->add_option("--dphi-min", phi_grid.dphi_min)->capture_default_str();
  spectrum->add_option("--dphi-max", phi_grid.dphi_max)->capture_default_str();
  spectrum->add_option("--points", phi_grid.points)->capture_default_str();

  spdc::cli::XiGrid xi_grid;
  auto* sweep_xi = app.add_subcommand("sweep-xi", "Spectral integral S versus Xi");
  sweep_xi->add_option("--xi-min", xi_grid.xi_min)->capture_default_str();
  sweep_xi->add_option("--xi-max", xi_grid.xi_max)->capture_default_str();
  sweep_xi->add_option("--points", xi_grid.points)->capture_default_str();

  spdc::cli::GammaGrid gamma_grid;
  auto* sweep_gamma =
      app.add_subcommand("sweep-gamma", "Relative rate versus pump/collection waist ratio");
  sweep_gamma->add_option("--gamma-min", gamma_grid.gamma_min)->capture_default_str();
  sweep_gamma->add_option("--gamma-max", gamma_grid.gamma_max)->capture_default_str();
  sweep_gamma->add_option("--points", gamma_grid.points)->capture_default_str();

  auto* figures = app.add_subcommand("figures", "All figure datasets at default grids");
  auto* compare = app.add_subcommand("compare-experiment",
                                     "Model versus measured and reference values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", 2, e.what());
  }

  try {
    spdc::cli::OutputDir out(flags.out_dir, flags.force);

    if (*rate) {
      const auto cfg = load(flags);
      out.check({"rate.csv", "spectral_density.csv", "rate.manifest.json"});
      spdc::rates::RateOptions options;
      options.spectral_points = spectral_points;
      const auto report = spdc::rates::total_rate(cfg, options);
      out.write("rate.csv", spdc::cli::rate_report_csv(cfg, report));
      out.write("spectral_density.csv", spdc::cli::spectral_density_csv(report));
      auto m = manifest_base("rate", flags);
      attach_config(m, cfg);
      m["spectral_points"] = spectral_points;
      print_rate_summary(report);
      finish(out, m, "rate");
    } else if (*spectrum) {
      std::optional<spdc::rates::SourceConfig> cfg;
      if (!flags.config_path.empty()) cfg = load(flags);
      out.check({"phi_z.csv", "spectral_density.csv", "spectrum.manifest.json"});
      out.write("phi_z.csv", spdc::cli::phi_z_csv(phi_grid));
      auto m = manifest_base("spectrum", flags);
      m["grid"] = grid_json(phi_grid);
      if (cfg) {
        const auto report = spdc::rates::total_rate(*cfg);
        out.write("spectral_density.csv", spdc::cli::spectral_density_csv(report));
        attach_config(m, *cfg);
      }
      finish(out, m, "spectrum");
    } else if (*sweep_xi) {
      out.check({"sweep_xi.csv", "sweep-xi.manifest.json"});
      out.write("sweep_xi.csv", spdc::cli::xi_sweep_csv(xi_grid));
      auto m = manifest_base("sweep-xi", flags);
      m["grid"] = grid_json(xi_grid);
      finish(out, m, "sweep-xi");
    } else if (*sweep_gamma) {
      out.check({"sweep_gamma.csv", "sweep-gamma.manifest.json"});
      out.write("sweep_gamma.csv", spdc::cli::gamma_sweep_csv(gamma_grid));
      auto m = manifest_base("sweep-gamma", flags);
      m["grid"] = grid_json(gamma_grid);
      finish(out, m, "sweep-gamma");
    } else if (*figures) {
      const spdc::cli::PhiZGrid g2;
      const spdc::cli::XiGrid g3;
      const spdc::cli::GammaGrid g4;
      out.check({"fig2_phi_z.csv", "fig3_spectral_integral.csv", "fig4_gamma.csv",
                 "figures.manifest.json"});
      out.write("fig2_phi_z.csv", spdc::cli::phi_z_csv(g2));
      out.write("fig3_spectral_integral.csv", spdc::cli::xi_sweep_csv(g3));
      out.write("fig4_gamma.csv", spdc::cli::gamma_sweep_csv(g4));
      auto m = manifest_base("figures", flags);
      m["fig2"] = grid_json(g2);
      m["fig3"] = grid_json(g3);
      m["fig4"] = grid_json(g4);
      finish(out, m, "figures");
    } else if (*compare) {
      const auto cfg = load(flags);
      out.check({"comparison.csv", "comparison.txt", "compare-experiment.manifest.json"});
      const auto result = spdc::cli::compare_experiment_report(cfg);
      std::cout << result.text;
      out.write("comparison.csv", result.csv);
      out.write("comparison.txt", result.text);
      auto m = manifest_base("compare-experiment", flags);
      attach_config(m, cfg);
      finish(out, m, "compare-experiment");
    }
  } catch (const spdc::Error& e) {
    return report_error(std::string(spdc::to_string(e.code())),
                        spdc::exit_status(e.code()), e.what());
  } catch (const std::exception& e) {
    return report_error("InternalError", 3, e.what());
  }
  return 0;
}
