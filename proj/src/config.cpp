#include "spdc/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spdc/errors.hpp"

namespace spdc::config {
namespace {

using nlohmann::json;
using rates::AngleConvention;
using rates::Polarization;
using rates::PolarizationAssignment;
using rates::SourceConfig;

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorCode::ValidationError, msg);
}

struct Unit {
  const char* suffix;
  double to_si;
};

constexpr Unit kLengthUnits[] = {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
constexpr Unit kPowerUnits[] = {{"w", 1.0}, {"mw", 1e-3}};
constexpr Unit kAngleUnits[] = {{"rad", 1.0}, {"deg", kDeg}};
constexpr Unit kSolidAngleUnits[] = {{"sr", 1.0}};
constexpr Unit kNonlinearityUnits[] = {{"m_per_V", 1.0}, {"pm_per_V", 1e-12}};

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

/// Tracks which keys of an object were consumed so leftovers can be
/// reported as unknown fields.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) invalid(label() + ": expected an object");
  }

  std::string label() const { return path_.empty() ? "<root>" : path_; }
  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return node_.contains(key); }

  const json& get(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  template <std::size_t N>
  std::optional<double> quantity(const std::string& base, const Unit (&units)[N]) {
    std::optional<double> value;
    std::string found;
    for (const Unit& u : units) {
      const std::string key = base + "_" + u.suffix;
      if (!has(key)) continue;
      if (value) {
        invalid(join_path(path_, base) + ": given twice (" + found + ", " + key + ")");
      }
      const json& v = get(key);
      if (!v.is_number()) invalid(join_path(path_, key) + ": expected a number");
      value = v.get<double>() * u.to_si;
      found = key;
      if (!std::isfinite(*value)) invalid(join_path(path_, key) + ": must be finite");
    }
    return value;
  }

  template <std::size_t N>
  double required_quantity(const std::string& base, const Unit (&units)[N]) {
    auto v = quantity(base, units);
    if (!v) {
      std::string allowed;
      for (const Unit& u : units) {
        allowed += (allowed.empty() ? "" : ", ") + base + "_" + u.suffix;
      }
      invalid(join_path(path_, base) + ": missing (expected one of " + allowed + ")");
    }
    return *v;
  }

  template <std::size_t N>
  double positive_quantity(const std::string& base, const Unit (&units)[N]) {
    const double v = required_quantity(base, units);
    if (!(v > 0.0)) invalid(join_path(path_, field_name(base, units)) + " must be > 0");
    return v;
  }

  std::optional<std::string> string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = get(key);
    if (!v.is_string()) invalid(join_path(path_, key) + ": expected a string");
    return v.get<std::string>();
  }

  std::optional<double> number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = get(key);
    if (!v.is_number()) invalid(join_path(path_, key) + ": expected a number");
    return v.get<double>();
  }

  Section child(const std::string& key) {
    if (!has(key)) invalid(join_path(path_, key) + ": missing section");
    return Section(get(key), join_path(path_, key));
  }

  void reject_unknown() const {
    for (const auto& item : node_.items()) {
      if (!used_.count(item.key())) {
        invalid(join_path(path_, item.key()) + ": unknown field");
      }
    }
  }

 private:
  template <std::size_t N>
  std::string field_name(const std::string& base, const Unit (&units)[N]) const {
    for (const Unit& u : units) {
      const std::string key = base + "_" + u.suffix;
      if (has(key)) return key;
    }
    return base;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

Polarization parse_polarization(std::string_view text, const std::string& where) {
  if (text == "ordinary") return Polarization::Ordinary;
  if (text == "extraordinary") return Polarization::Extraordinary;
  invalid(where + ": '" + std::string(text) +
          "' is not a polarization (allowed: ordinary, extraordinary)");
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    invalid("override '" + assignment + "' must have the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) invalid("override key '" + key + "' has an empty component");
    if (!node->is_object()) invalid("override key '" + key + "' walks into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

double index_for(const materials::CrystalSpec& crystal, Polarization pol,
                 double lambda) {
  return pol == Polarization::Ordinary
             ? materials::index_ordinary(crystal, lambda)
             : materials::index_extraordinary(crystal, lambda, crystal.theta_c);
}

}  // namespace

AngleConvention parse_angle_convention(std::string_view text) {
  if (text == "internal" || text == "internal_physics") {
    return AngleConvention::InternalPhysics;
  }
  if (text == "external" || text == "external_as_internal") {
    return AngleConvention::ExternalAsInternal;
  }
  invalid("angle_convention: '" + std::string(text) +
          "' not recognised (allowed: internal, external)");
}

PolarizationAssignment parse_polarization_assignment(std::string_view text) {
  if (text == "signal_ordinary") return PolarizationAssignment::SignalOrdinary;
  if (text == "signal_extraordinary") {
    return PolarizationAssignment::SignalExtraordinary;
  }
  invalid("polarization_assignment: '" + std::string(text) +
          "' not recognised (allowed: signal_ordinary, signal_extraordinary)");
}

void apply_angle_convention(SourceConfig& config, AngleConvention convention) {
  config.angle_convention = convention;
  const double ext = config.external_collection_angle;
  if (convention == AngleConvention::ExternalAsInternal) {
    config.signal.theta = ext;
    config.idler.theta = ext;
  } else {
    config.signal.theta = materials::internal_angle(ext, config.signal.n);
    config.idler.theta = materials::internal_angle(ext, config.idler.n);
  }
}

SourceConfig parse_config(std::string_view json_text,
                          const materials::MaterialDatabase& db,
                          const LoadOptions& options, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string(origin) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError,
                std::string(origin) + ": top level must be an object");
  }
  for (const std::string& o : options.overrides) apply_override(doc, o);

  Section root(doc, "");
  SourceConfig cfg;
  if (auto v = root.number("version"); v && *v != 1.0) {
    invalid("version: unsupported configuration version");
  }
  cfg.name = root.string("name").value_or("");
  const auto material_name = root.string("material");
  if (!material_name) invalid("material: missing");
  cfg.material = *material_name;

  const auto convention_text = root.string("angle_convention");
  if (options.angle_convention) {
    cfg.angle_convention = *options.angle_convention;
  } else if (convention_text) {
    cfg.angle_convention = parse_angle_convention(*convention_text);
  } else {
    cfg.angle_convention = rates::AngleConvention::InternalPhysics;
  }

  const auto assignment = root.string("polarization_assignment");
  if (!assignment) {
    invalid("polarization_assignment: missing (allowed: signal_ordinary, "
            "signal_extraordinary)");
  }
  cfg.polarization_assignment = parse_polarization_assignment(*assignment);

  Section pump = root.child("pump");
  cfg.pump_power = pump.positive_quantity("power", kPowerUnits);
  cfg.pump.lambda_vac = pump.positive_quantity("wavelength", kLengthUnits);
  cfg.pump.waist = pump.positive_quantity("waist", kLengthUnits);
  cfg.pump_polarization =
      parse_polarization(pump.string("polarization").value_or("extraordinary"),
                         "pump.polarization");
  pump.reject_unknown();

  Section signal = root.child("signal");
  Section idler = root.child("idler");
  cfg.signal.waist = signal.positive_quantity("waist", kLengthUnits);
  cfg.idler.waist = idler.positive_quantity("waist", kLengthUnits);
  cfg.signal.lambda_vac =
      signal.quantity("wavelength", kLengthUnits).value_or(2.0 * cfg.pump.lambda_vac);
  cfg.idler.lambda_vac =
      idler.quantity("wavelength", kLengthUnits).value_or(2.0 * cfg.pump.lambda_vac);
  signal.reject_unknown();
  idler.reject_unknown();

  Section crystal = root.child("crystal");
  const double length = crystal.positive_quantity("length", kLengthUnits);
  const double theta_c = crystal.required_quantity("theta_c", kAngleUnits);
  const double phi_c = crystal.required_quantity("phi_c", kAngleUnits);
  const auto d_eff = crystal.quantity("d_eff", kNonlinearityUnits);
  crystal.reject_unknown();
  cfg.crystal = materials::CrystalSpec::from_material(db.find(cfg.material),
                                                      length, theta_c, phi_c);
  if (d_eff) {
    cfg.d_eff = *d_eff;
  } else if (cfg.material == "BBO") {
    cfg.d_eff = materials::effective_nonlinearity_bbo(cfg.crystal);
  } else {
    invalid("crystal.d_eff_pm_per_V: required for materials other than BBO");
  }

  Section collection = root.child("collection");
  cfg.external_collection_angle =
      collection.required_quantity("external_angle", kAngleUnits);
  if (!(cfg.external_collection_angle >= 0.0 &&
        cfg.external_collection_angle < std::numbers::pi / 2)) {
    invalid("collection.external_angle: must lie in [0, 90) degrees");
  }
  cfg.solid_angle = collection.quantity("solid_angle", kSolidAngleUnits);
  collection.reject_unknown();

  if (auto eps = root.number("degeneracy_epsilon")) {
    if (!(*eps > 0.0)) invalid("degeneracy_epsilon must be > 0");
    cfg.degeneracy_epsilon = *eps;
  }

  if (root.has("experiment")) {
    Section exp = root.child("experiment");
    cfg.experiment.pair_to_singles_ratio = exp.number("pair_to_singles_ratio");
    if (cfg.experiment.pair_to_singles_ratio &&
        !(*cfg.experiment.pair_to_singles_ratio > 0.0 &&
          *cfg.experiment.pair_to_singles_ratio <= 1.0)) {
      invalid("experiment.pair_to_singles_ratio must lie in (0, 1]");
    }
    if (auto paths = exp.number("decay_paths")) {
      if (!(*paths >= 1.0) || std::floor(*paths) != *paths) {
        invalid("experiment.decay_paths must be a positive integer");
      }
      cfg.experiment.decay_paths = static_cast<int>(*paths);
    }
    cfg.experiment.observed_rate_per_mw = exp.number("observed_rate_per_mw");
    if (exp.has("reference")) {
      const json& ref = exp.get("reference");
      if (!ref.is_object()) invalid("experiment.reference: expected an object");
      for (const auto& item : ref.items()) {
        if (!item.value().is_number()) {
          invalid("experiment.reference." + item.key() + ": expected a number");
        }
        cfg.experiment.reference.emplace_back(item.key(), item.value().get<double>());
      }
    }
    exp.reject_unknown();
  }
  root.reject_unknown();

  // Roles and indices.
  cfg.pump.role = modes::Role::Pump;
  cfg.signal.role = modes::Role::Signal;
  cfg.idler.role = modes::Role::Idler;
  cfg.pump.theta = 0.0;
  const bool signal_ordinary =
      cfg.polarization_assignment == PolarizationAssignment::SignalOrdinary;
  cfg.pump.n = index_for(cfg.crystal, cfg.pump_polarization, cfg.pump.lambda_vac);
  cfg.signal.n = index_for(cfg.crystal,
                           signal_ordinary ? Polarization::Ordinary
                                           : Polarization::Extraordinary,
                           cfg.signal.lambda_vac);
  cfg.idler.n = index_for(cfg.crystal,
                          signal_ordinary ? Polarization::Extraordinary
                                          : Polarization::Ordinary,
                          cfg.idler.lambda_vac);
  apply_angle_convention(cfg, cfg.angle_convention);
  cfg.validate();
  return cfg;
}

SourceConfig load_config(const std::filesystem::path& path,
                         const LoadOptions& options) {
  const auto db = materials::MaterialDatabase::load(options.material_db);
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open config '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), db, options, path.string());
}

std::string to_json_text(const SourceConfig& c) {
  json doc = json::object();
  doc["version"] = 1;
  doc["name"] = c.name;
  doc["material"] = c.material;
  doc["angle_convention"] = std::string(rates::to_string(c.angle_convention));
  doc["polarization_assignment"] =
      std::string(rates::to_string(c.polarization_assignment));
  doc["pump"] = {{"power_w", c.pump_power},
                 {"wavelength_m", c.pump.lambda_vac},
                 {"waist_m", c.pump.waist},
                 {"polarization", std::string(rates::to_string(c.pump_polarization))}};
  doc["signal"] = {{"wavelength_m", c.signal.lambda_vac}, {"waist_m", c.signal.waist}};
  doc["idler"] = {{"wavelength_m", c.idler.lambda_vac}, {"waist_m", c.idler.waist}};
  doc["crystal"] = {{"length_m", c.crystal.length},
                    {"theta_c_rad", c.crystal.theta_c},
                    {"phi_c_rad", c.crystal.phi_c},
                    {"d_eff_m_per_V", c.d_eff}};
  doc["collection"] = {{"external_angle_rad", c.external_collection_angle}};
  if (c.solid_angle) doc["collection"]["solid_angle_sr"] = *c.solid_angle;
  doc["degeneracy_epsilon"] = c.degeneracy_epsilon;

  json exp = json::object();
  if (c.experiment.pair_to_singles_ratio) {
    exp["pair_to_singles_ratio"] = *c.experiment.pair_to_singles_ratio;
  }
  exp["decay_paths"] = c.experiment.decay_paths;
  if (c.experiment.observed_rate_per_mw) {
    exp["observed_rate_per_mw"] = *c.experiment.observed_rate_per_mw;
  }
  if (!c.experiment.reference.empty()) {
    json ref = json::object();
    for (const auto& [k, v] : c.experiment.reference) ref[k] = v;
    exp["reference"] = ref;
  }
  doc["experiment"] = exp;
  return doc.dump(2) + "\n";
}

}  // namespace spdc::config
