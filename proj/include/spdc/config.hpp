#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/materials.hpp"
#include "spdc/rates.hpp"

namespace spdc::config {

struct LoadOptions {
  std::filesystem::path material_db = SPDC_DEFAULT_MATERIAL_DB;
  // "dotted.key=value" edits applied to the parsed document before
  // validation; values are read as JSON and fall back to plain strings.
  std::vector<std::string> overrides;
  std::optional<rates::AngleConvention> angle_convention;
};

rates::AngleConvention parse_angle_convention(std::string_view text);
rates::PolarizationAssignment parse_polarization_assignment(std::string_view text);

/// Reads, validates and normalises a source configuration file.
///
/// Field names carry their units (power_mw, wavelength_nm, waist_um,
/// length_mm, *_deg); everything is converted to SI. Refractive indices are
/// evaluated at the nominal wavelengths and the collection angle is turned
/// into internal angles according to the angle convention.
rates::SourceConfig load_config(const std::filesystem::path& path,
                                const LoadOptions& options = {});

rates::SourceConfig parse_config(std::string_view json_text,
                                 const materials::MaterialDatabase& db,
                                 const LoadOptions& options = {},
                                 std::string_view origin = "<memory>");

/// Serialises the normalised configuration back into the file schema.
/// parse_config(to_json_text(c)) reproduces c.
std::string to_json_text(const rates::SourceConfig& config);

/// Sets the internal signal/idler angles from the external collection angle.
void apply_angle_convention(rates::SourceConfig& config,
                            rates::AngleConvention convention);

}  // namespace spdc::config
