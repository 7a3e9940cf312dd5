#include "spdc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "spdc/constants.hpp"
#include "spdc/csv.hpp"
#include "spdc/errors.hpp"
#include "spdc/modes.hpp"

namespace spdc::cli {
namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = n == 1 ? lo
                    : lo + (hi - lo) * static_cast<double>(k) /
                               static_cast<double>(n - 1);
  }
  return out;
}

void require_grid(double lo, double hi, std::size_t points, const char* what) {
  if (!(hi > lo) || points < 2 || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::ValidationError,
                std::string(what) + ": need min < max and at least 2 points");
  }
}

std::string sci(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

}  // namespace

std::vector<double> parallel_map(std::size_t count,
                                 const std::function<double(std::size_t)>& fn,
                                 std::size_t threads) {
  std::vector<double> out(count);
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t k = t; k < count; k += threads) {
        try {
          out[k] = fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string phi_z_csv(const PhiZGrid& grid) {
  require_grid(grid.dphi_min, grid.dphi_max, grid.points, "delta_phi grid");
  if (grid.xis.empty()) {
    throw Error(ErrorCode::ValidationError, "at least one Xi value is required");
  }
  const auto dphi = linspace(grid.dphi_min, grid.dphi_max, grid.points);
  csv::Table table({"xi", "delta_phi", "phi_z_over_l"});
  for (double xi : grid.xis) {
    const auto values = parallel_map(dphi.size(), [&](std::size_t k) {
      return modes::phi_z(xi, dphi[k]);
    });
    for (std::size_t k = 0; k < dphi.size(); ++k) {
      table.add_row({xi, dphi[k], values[k]});
    }
  }
  return table.text();
}

std::string spectral_density_csv(const rates::RateReport& report) {
  csv::Table table({"omega_s", "wavelength_nm", "spectral_density"});
  for (const auto& s : report.spectral_samples) {
    const double lambda_nm = 2.0 * std::numbers::pi * constants::c / s.omega_s * 1e9;
    table.add_row({s.omega_s, lambda_nm, s.density});
  }
  return table.text();
}

std::string xi_sweep_csv(const XiGrid& grid) {
  if (!(grid.xi_min >= 0.0)) {
    throw Error(ErrorCode::ValidationError, "xi grid: xi_min must be >= 0");
  }
  require_grid(grid.xi_min, grid.xi_max, grid.points, "xi grid");
  const auto xis = linspace(grid.xi_min, grid.xi_max, grid.points);
  const auto s = parallel_map(xis.size(), [&](std::size_t k) {
    return modes::spectral_integral_S(xis[k]);
  });
  csv::Table table({"xi", "S"});
  for (std::size_t k = 0; k < xis.size(); ++k) table.add_row({xis[k], s[k]});
  return table.text();
}

std::string gamma_sweep_csv(const GammaGrid& grid) {
  const auto curve = rates::gamma_sweep(grid.gamma_min, grid.gamma_max, grid.points);
  std::size_t best = 0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    if (curve[k].relative_rate > curve[best].relative_rate) best = k;
  }
  csv::Table table({"gamma", "relative_rate", "is_argmax"});
  for (std::size_t k = 0; k < curve.size(); ++k) {
    table.add_row({curve[k].gamma, curve[k].relative_rate, k == best ? 1.0 : 0.0});
  }
  return table.text();
}

std::string rate_report_csv(const rates::SourceConfig& config,
                            const rates::RateReport& r) {
  csv::Table table({"quantity", "value", "unit"});
  auto row = [&](const std::string& name, double v, const std::string& unit) {
    table.add_row({name, csv::format_double(v), unit});
  };
  row("pump_power", config.pump_power, "W");
  row("d_eff", r.d_eff, "m/V");
  row("n_p", r.n_p, "1");
  row("n_s", r.n_s, "1");
  row("n_i", r.n_i, "1");
  row("theta_s", r.theta_s, "rad");
  row("theta_i", r.theta_i, "rad");
  row("xi", r.Xi, "1");
  row("S", r.S, "1");
  row("R_T", r.R_T, "1/s");
  if (r.R_T_thin) row("R_T_thin", *r.R_T_thin, "1/s");
  row("efficiency_per_mm", r.efficiency_per_mm, "1/mm");
  if (r.efficiency_per_mm_sr) row("efficiency_per_mm_sr", *r.efficiency_per_mm_sr, "1/(mm sr)");
  row("dispersion_difference", r.dispersion_difference, "1");
  row("delta_k_z_degenerate", r.delta_k_z_degenerate, "1/m");
  row("omega_s_phase_matched", r.omega_s_phase_matched, "rad/s");
  return table.text();
}

ComparisonOutput compare_experiment_report(const rates::SourceConfig& config) {
  const auto cmp = rates::compare_experiment(config);
  const auto& r = cmp.report;

  std::map<std::string, double> reference(config.experiment.reference.begin(),
                                          config.experiment.reference.end());
  struct Line {
    std::string key;
    std::string label;
    std::optional<double> model;
    std::string unit;
  };
  std::vector<Line> lines = {
      {"xi", "walk-off parameter Xi", r.Xi, "1"},
      {"S", "spectral integral S", r.S, "1"},
      {"rate_per_mw", "pair rate R_T per mW", cmp.rate_per_mw, "1/(mW s)"},
      {"observable_rate_per_mw", "observable rate per mW", cmp.observable_rate_per_mw,
       "1/(mW s)"},
      {"efficiency_per_mm", "pairs per pump photon per mm", r.efficiency_per_mm, "1/mm"},
      {"efficiency_per_mm_sr", "pairs per pump photon per mm per sr",
       r.efficiency_per_mm_sr, "1/(mm sr)"},
  };
  if (config.experiment.observed_rate_per_mw) {
    lines.push_back({"observed_rate_per_mw", "measured rate per mW (input)",
                     std::nullopt, "1/(mW s)"});
    reference.emplace("observed_rate_per_mw", *config.experiment.observed_rate_per_mw);
  }

  csv::Table table({"quantity", "model", "reference", "relative_deviation", "unit"});
  std::ostringstream text;
  text << "experiment comparison: " << (config.name.empty() ? "(unnamed)" : config.name)
       << "\n";
  text << "  angle convention: " << rates::to_string(config.angle_convention)
       << ", polarization: " << rates::to_string(config.polarization_assignment)
       << "\n";
  text << "  decay paths: " << config.experiment.decay_paths
       << ", pair-to-singles ratio: " << *config.experiment.pair_to_singles_ratio
       << "\n";
  for (const Line& line : lines) {
    const auto ref = reference.find(line.key);
    std::string ref_cell;
    std::string dev_cell;
    text << "  " << line.label << ": "
         << (line.model ? sci(*line.model) : std::string("-"));
    if (ref != reference.end()) {
      ref_cell = csv::format_double(ref->second);
      text << "  (reference " << sci(ref->second);
      if (line.model && ref->second != 0.0) {
        const double dev = (*line.model - ref->second) / ref->second;
        dev_cell = csv::format_double(dev);
        text << ", deviation " << sci(100.0 * dev, 3) << "%";
      }
      text << ")";
    }
    text << " [" << line.unit << "]\n";
    table.add_row({line.key, line.model ? csv::format_double(*line.model) : "",
                   ref_cell, dev_cell, line.unit});
  }
  if (config.experiment.observed_rate_per_mw && cmp.observable_rate_per_mw > 0.0) {
    text << "  measured / model observable: "
         << sci(*config.experiment.observed_rate_per_mw / cmp.observable_rate_per_mw, 3)
         << "\n";
  }
  for (const auto& w : cmp.warnings) text << "  warning: " << w << "\n";
  return {text.str(), table.text()};
}

OutputDir::OutputDir(std::filesystem::path dir, bool force)
    : dir_(std::move(dir)), force_(force) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::IoError,
                "cannot create output directory '" + dir_.string() + "'");
  }
}

void OutputDir::check(const std::vector<std::string>& names) const {
  if (force_) return;
  for (const auto& name : names) {
    if (std::filesystem::exists(dir_ / name)) {
      throw Error(ErrorCode::IoError,
                  "refusing to overwrite '" + (dir_ / name).string() +
                      "' (pass --force)");
    }
  }
}

void OutputDir::write(const std::string& name, const std::string& content) {
  check({name});
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  }
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
  written_.push_back(name);
}

}  // namespace spdc::cli
