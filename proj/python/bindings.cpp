#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "spdc/commands.hpp"
#include "spdc/config.hpp"
#include "spdc/errors.hpp"
#include "spdc/materials.hpp"
#include "spdc/modes.hpp"
#include "spdc/numerics.hpp"
#include "spdc/rates.hpp"

namespace py = pybind11;
using namespace spdc;

namespace {

rates::SourceConfig load(const std::string& path, const std::vector<std::string>& overrides,
                         const std::optional<std::string>& angle_convention,
                         const std::optional<std::string>& material_db) {
  config::LoadOptions opts;
  opts.overrides = overrides;
  if (angle_convention) opts.angle_convention = config::parse_angle_convention(*angle_convention);
  if (material_db) opts.material_db = *material_db;
  return config::load_config(path, opts);
}

rates::RateOptions rate_options(std::size_t spectral_points) {
  rates::RateOptions o;
  o.spectral_points = spectral_points;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Absolute SPDC pair rates into single Gaussian modes";

  // Leaked on purpose: the type lives as long as the interpreter.
  static PyObject* error_type =
      PyErr_NewException("spdc_rates._core.SpdcError", PyExc_RuntimeError, nullptr);
  m.attr("SpdcError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(py::str(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      exc.attr("exit_status") = exit_status(e.code());
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def("erf", &numerics::erf, py::arg("x"));
  m.def("sinc", &numerics::sinc, py::arg("x"));
  m.def(
      "integrate",
      [](const std::function<double(double)>& f, double a, double b, double rel_tol,
         double abs_tol) {
        const auto r = numerics::integrate_finite(f, a, b, rel_tol, abs_tol);
        return py::make_tuple(r.value, r.abs_error_estimate, r.evaluations);
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("rel_tol") = numerics::kDefaultRelTol,
      py::arg("abs_tol") = numerics::kDefaultAbsTol,
      "Adaptive Gauss-Kronrod integral; returns (value, error estimate, evaluations).");

  m.def("normalization_alpha", &modes::normalization_alpha, py::arg("waist"));
  m.def("confinement_correction", &modes::confinement_correction, py::arg("waist"),
        py::arg("lambda_vac"), py::arg("n"));
  m.def("phi_z", &modes::phi_z, py::arg("xi"), py::arg("delta_phi"));
  m.def("phi_z_thin", &modes::phi_z_thin, py::arg("delta_phi"));
  m.def("phi_z_thick", &modes::phi_z_thick, py::arg("xi"));
  m.def("spectral_integral", &modes::spectral_integral_S, py::arg("xi"));
  m.def(
      "walk_off",
      [](double waist, double theta_s, double theta_i, double length) {
        const modes::GaussianMode p{waist, 1.0, 0.0, 1.0, modes::Role::Pump};
        const modes::GaussianMode s{waist, 1.0, theta_s, 1.0, modes::Role::Signal};
        const modes::GaussianMode i{waist, 1.0, theta_i, 1.0, modes::Role::Idler};
        return modes::geometry_coefficients(p, s, i, length).Xi;
      },
      py::arg("waist"), py::arg("theta_s"), py::arg("theta_i"), py::arg("length"),
      "Xi for equal waists and internal angles (radians).");

  m.def("waist_scaling", &rates::waist_scaling, py::arg("pump_waist"),
        py::arg("signal_waist"), py::arg("idler_waist"));
  m.def("gamma_rate_factor", &rates::gamma_rate_factor, py::arg("gamma"));
  m.def("optimal_gamma", &rates::optimal_gamma);
  m.def(
      "gamma_sweep",
      [](double lo, double hi, std::size_t n) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : rates::gamma_sweep(lo, hi, n)) out.emplace_back(p.gamma, p.relative_rate);
        return out;
      },
      py::arg("gamma_min"), py::arg("gamma_max"), py::arg("points"));

  py::class_<rates::SourceConfig>(m, "SourceConfig")
      .def_readonly("name", &rates::SourceConfig::name)
      .def_readonly("material", &rates::SourceConfig::material)
      .def_readwrite("pump_power", &rates::SourceConfig::pump_power)
      .def_readwrite("d_eff", &rates::SourceConfig::d_eff)
      .def_property_readonly("crystal_length", [](const rates::SourceConfig& c) { return c.crystal.length; })
      .def_property_readonly("waists", [](const rates::SourceConfig& c) {
        return py::make_tuple(c.pump.waist, c.signal.waist, c.idler.waist);
      })
      .def_property_readonly("indices", [](const rates::SourceConfig& c) {
        return py::make_tuple(c.pump.n, c.signal.n, c.idler.n);
      })
      .def_property_readonly("angles", [](const rates::SourceConfig& c) {
        return py::make_tuple(c.signal.theta, c.idler.theta);
      })
      .def_property_readonly("angle_convention", [](const rates::SourceConfig& c) {
        return std::string(rates::to_string(c.angle_convention));
      })
      .def("to_json", &config::to_json_text);

  py::class_<rates::RateReport>(m, "RateReport")
      .def_readonly("xi", &rates::RateReport::Xi)
      .def_readonly("S", &rates::RateReport::S)
      .def_readonly("R_T", &rates::RateReport::R_T)
      .def_readonly("R_T_thin", &rates::RateReport::R_T_thin)
      .def_readonly("efficiency_per_mm", &rates::RateReport::efficiency_per_mm)
      .def_readonly("efficiency_per_mm_sr", &rates::RateReport::efficiency_per_mm_sr)
      .def_readonly("warnings", &rates::RateReport::warnings)
      .def_readonly("d_eff", &rates::RateReport::d_eff)
      .def_readonly("omega_s_phase_matched", &rates::RateReport::omega_s_phase_matched)
      .def_property_readonly("spectrum", [](const rates::RateReport& r) {
        std::vector<std::pair<double, double>> out;
        out.reserve(r.spectral_samples.size());
        for (const auto& s : r.spectral_samples) out.emplace_back(s.omega_s, s.density);
        return out;
      });

  m.def("load_config", &load, py::arg("path"), py::arg("overrides") = std::vector<std::string>{},
        py::arg("angle_convention") = py::none(), py::arg("material_db") = py::none());
  m.def(
      "parse_config",
      [](const std::string& text, const std::string& material_db) {
        const auto db = materials::MaterialDatabase::load(material_db);
        return config::parse_config(text, db);
      },
      py::arg("text"), py::arg("material_db"));
  m.def(
      "total_rate",
      [](const rates::SourceConfig& c, std::size_t points) {
        return rates::total_rate(c, rate_options(points));
      },
      py::arg("config"), py::arg("spectral_points") = 4001);
  m.def(
      "thin_crystal_total", [](const rates::SourceConfig& c) { return rates::thin_crystal_rates(c).total; },
      py::arg("config"));
  m.def("spectral_rate_density", &rates::spectral_rate_density, py::arg("config"),
        py::arg("omega_s"));
  m.def(
      "compare_experiment",
      [](const rates::SourceConfig& c) {
        const auto cmp = rates::compare_experiment(c, rate_options(0));
        py::dict d;
        d["xi"] = cmp.report.Xi;
        d["S"] = cmp.report.S;
        d["rate_per_mw"] = cmp.rate_per_mw;
        d["observable_rate_per_mw"] = cmp.observable_rate_per_mw;
        d["efficiency_per_mm"] = cmp.report.efficiency_per_mm;
        d["efficiency_per_mm_sr"] = cmp.report.efficiency_per_mm_sr;
        d["warnings"] = cmp.warnings;
        return d;
      },
      py::arg("config"));

  m.def(
      "xi_sweep_csv",
      [](double lo, double hi, std::size_t n) {
        return cli::xi_sweep_csv({lo, hi, n});
      },
      py::arg("xi_min") = 0.0, py::arg("xi_max") = 5.0, py::arg("points") = 251);
}
