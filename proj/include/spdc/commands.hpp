#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spdc/rates.hpp"

namespace spdc::cli {

struct PhiZGrid {
  std::vector<double> xis{0.0, 0.5, 1.0, 2.0, 4.0};
  double dphi_min = -15.0;
  double dphi_max = 15.0;
  std::size_t points = 2001;
};

struct XiGrid {
  double xi_min = 0.0;
  double xi_max = 5.0;
  std::size_t points = 251;
};

struct GammaGrid {
  double gamma_min = 0.1;
  double gamma_max = 3.0;
  std::size_t points = 581;
};

/// Evaluates fn(0..count-1) on up to `threads` workers; results are stored
/// by index so the output never depends on scheduling.
std::vector<double> parallel_map(std::size_t count,
                                 const std::function<double(std::size_t)>& fn,
                                 std::size_t threads = 0);

/// Columns xi,delta_phi,phi_z_over_l (one block per Xi).
std::string phi_z_csv(const PhiZGrid& grid);

/// Columns omega_s,wavelength_nm,spectral_density.
std::string spectral_density_csv(const rates::RateReport& report);

/// Columns xi,S.
std::string xi_sweep_csv(const XiGrid& grid);

/// Columns gamma,relative_rate,is_argmax.
std::string gamma_sweep_csv(const GammaGrid& grid);

/// Columns quantity,value,unit.
std::string rate_report_csv(const rates::SourceConfig& config,
                            const rates::RateReport& report);

struct ComparisonOutput {
  std::string text;
  std::string csv;  // quantity,model,reference,relative_deviation,unit
};

ComparisonOutput compare_experiment_report(const rates::SourceConfig& config);

/// Writes files into one output directory, refusing to replace existing
/// files unless `force` is set.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, bool force);

  /// IoError naming the first file that exists (when not forcing).
  void check(const std::vector<std::string>& names) const;
  void write(const std::string& name, const std::string& content);
  const std::vector<std::string>& written() const noexcept { return written_; }
  const std::filesystem::path& path() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  bool force_;
  std::vector<std::string> written_;
};

}  // namespace spdc::cli
