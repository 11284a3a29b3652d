#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "satflux/config.hpp"
#include "satflux/driver.hpp"
#include "satflux/dual_solver.hpp"
#include "satflux/errors.hpp"
#include "satflux/flux.hpp"
#include "satflux/fronts.hpp"
#include "satflux/io.hpp"
#include "satflux/validation.hpp"
#include "satflux/waves.hpp"

namespace py = pybind11;
using namespace satflux;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

}  // namespace

PYBIND11_MODULE(_satflux, mod) {
  mod.doc() = "Flux-saturated Keller-Segel solver in mass coordinates";
  mod.attr("__version__") = "0.1.0";

  auto base = py::register_exception<Error>(mod, "SatfluxError", PyExc_RuntimeError);
  py::register_exception<ParameterError>(mod, "ParameterError", base);
  auto domain = py::register_exception<DomainError>(mod, "DomainError", base);
  // Derived types after their bases: pybind11 tries the most recently registered translator first.
  py::register_exception<SaturationDomainError>(mod, "SaturationDomainError", domain);
  py::register_exception<CompatibilityError>(mod, "CompatibilityError", base);
  py::register_exception<NoSteadyStateError>(mod, "NoSteadyStateError", base);
  py::register_exception<AdmissibilityError>(mod, "AdmissibilityError", base);
  py::register_exception<UnrepresentableError>(mod, "UnrepresentableError", base);
  py::register_exception<ConfigError>(mod, "ConfigError", base);
  py::register_exception<PositivityLoss>(mod, "PositivityLoss", base);

  py::class_<FluxModel>(mod, "FluxModel")
      .def_static("classical", &FluxModel::classical, py::arg("nu") = 1.0, py::arg("c") = 1.0)
      .def_static("custom", &FluxModel::custom, py::arg("phi"), py::arg("dphi"), py::arg("c"), py::arg("alpha"),
                  py::arg("k_tail"), py::arg("family") = "custom")
      .def("phi", &FluxModel::phi)
      .def("dphi", &FluxModel::dphi)
      .def("g", &FluxModel::g)
      .def("G", &FluxModel::G)
      .def("G_difference", &FluxModel::G_difference)
      .def("g_by_inversion", &FluxModel::g_by_inversion)
      .def("G_by_quadrature", &FluxModel::G_by_quadrature)
      .def_property_readonly("c", &FluxModel::c)
      .def_property_readonly("alpha", &FluxModel::alpha)
      .def_property_readonly("k_tail", &FluxModel::k_tail)
      .def_property_readonly("nu", &FluxModel::nu)
      .def_property_readonly("family", &FluxModel::family)
      .def_property_readonly("closed_form", &FluxModel::closed_form);

  py::class_<HypothesisCheck>(mod, "HypothesisCheck")
      .def_readonly("name", &HypothesisCheck::name)
      .def_readonly("passed", &HypothesisCheck::passed)
      .def_readonly("value", &HypothesisCheck::value)
      .def_readonly("tolerance", &HypothesisCheck::tolerance)
      .def_readonly("detail", &HypothesisCheck::detail);
  py::class_<HypothesisReport>(mod, "HypothesisReport")
      .def_readonly("checks", &HypothesisReport::checks)
      .def("all_passed", &HypothesisReport::all_passed)
      .def("at", &HypothesisReport::at, py::return_value_policy::copy);
  mod.def("validate_hypotheses", &validate_hypotheses, py::arg("flux"), py::arg("n_samples") = 256,
          py::arg("y_max") = 1e4);

  py::class_<ModelParams>(mod, "ModelParams")
      .def(py::init([](double a, double m, double M, const FluxModel& flux) {
             ModelParams p{a, m, M, flux};
             p.validate();
             return p;
           }),
           py::arg("a") = 1.0, py::arg("m") = 0.0, py::arg("M") = 1.0, py::arg("flux") = FluxModel::classical(1.0, 1.0))
      .def_readwrite("a", &ModelParams::a)
      .def_readwrite("m", &ModelParams::m)
      .def_readwrite("M", &ModelParams::M)
      .def_readwrite("flux", &ModelParams::flux)
      .def("validate", &ModelParams::validate);

  py::enum_<InterfaceMean>(mod, "InterfaceMean")
      .value("arithmetic", InterfaceMean::arithmetic)
      .value("geometric", InterfaceMean::geometric)
      .value("harmonic", InterfaceMean::harmonic);

  py::class_<SchemeConfig>(mod, "SchemeConfig")
      .def(py::init<>())
      .def_readwrite("N", &SchemeConfig::N)
      .def_readwrite("eps", &SchemeConfig::eps)
      .def_readwrite("kappa_bc", &SchemeConfig::kappa_bc)
      .def_readwrite("lambda_env", &SchemeConfig::lambda_env)
      .def_readwrite("cfl", &SchemeConfig::cfl)
      .def_readwrite("t_end", &SchemeConfig::t_end)
      .def_readwrite("snapshot_dt", &SchemeConfig::snapshot_dt)
      .def_readwrite("mean", &SchemeConfig::mean)
      .def_readwrite("support_floor", &SchemeConfig::support_floor)
      .def_readwrite("max_steps", &SchemeConfig::max_steps)
      .def("validate", &SchemeConfig::validate);

  py::class_<DualState>(mod, "DualState")
      .def_readonly("t", &DualState::t)
      .def_readonly("params", &DualState::params)
      .def_property_readonly("v", [](const DualState& s) { return as_array(s.v); })
      .def_property_readonly("d_eta", &DualState::d_eta)
      .def_property_readonly("eta", [](const DualState& s) {
        std::vector<double> e(s.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.eta(i);
        return as_array(e);
      })
      .def("length", &DualState::length)
      .def("__len__", &DualState::size);

  py::class_<FrontState>(mod, "FrontState")
      .def_readonly("t", &FrontState::t)
      .def_readonly("sigma_minus", &FrontState::sigma_minus)
      .def_readonly("sigma_plus", &FrontState::sigma_plus)
      .def_property_readonly("ell", &FrontState::ell);

  py::class_<DiagnosticsRow>(mod, "DiagnosticsRow")
      .def_readonly("t", &DiagnosticsRow::t)
      .def_readonly("sigma_minus", &DiagnosticsRow::sigma_minus)
      .def_readonly("sigma_plus", &DiagnosticsRow::sigma_plus)
      .def_readonly("ell", &DiagnosticsRow::ell)
      .def_readonly("mu_bar", &DiagnosticsRow::mu_bar)
      .def_readonly("sigma_c", &DiagnosticsRow::sigma_c)
      .def_readonly("mass_center", &DiagnosticsRow::mass_center)
      .def_readonly("vmin", &DiagnosticsRow::vmin)
      .def_readonly("vmax", &DiagnosticsRow::vmax)
      .def_readonly("mass_law_residual", &DiagnosticsRow::mass_law_residual)
      .def_readonly("bv_seminorm", &DiagnosticsRow::bv_seminorm)
      .def_readonly("rh_minus", &DiagnosticsRow::rh_minus)
      .def_readonly("rh_plus", &DiagnosticsRow::rh_plus);

  py::class_<TrajectoryRecord>(mod, "TrajectoryRecord")
      .def_readonly("state", &TrajectoryRecord::state)
      .def_readonly("fronts", &TrajectoryRecord::fronts)
      .def_readonly("diag", &TrajectoryRecord::diag);

  py::class_<Trajectory>(mod, "Trajectory")
      .def_readonly("params", &Trajectory::params)
      .def_readonly("config", &Trajectory::config)
      .def_readonly("eps", &Trajectory::eps)
      .def_readonly("eps_bc", &Trajectory::eps_bc)
      .def_readonly("initial_length", &Trajectory::initial_length)
      .def_readonly("records", &Trajectory::records)
      .def_property_readonly("reason", [](const Trajectory& t) { return std::string(to_string(t.reason)); })
      .def_readonly("termination_time", &Trajectory::termination_time)
      .def_readonly("detail", &Trajectory::detail)
      .def_readonly("steps", &Trajectory::steps)
      .def("mass_slope", &Trajectory::mass_slope);

  mod.def("sample_state", &sample_state, py::arg("params"), py::arg("N"), py::arg("v0"));
  mod.def("stable_time_step", &stable_time_step, py::arg("state"), py::arg("config"));
  mod.def("step", &step, py::arg("state"), py::arg("config"));
  mod.def("run", py::overload_cast<const ModelParams&, const SchemeConfig&, const Sampler&, double>(&run),
          py::arg("params"), py::arg("config"), py::arg("v0"), py::arg("sigma_minus0") = 0.0,
          py::call_guard<py::gil_scoped_release>());
  mod.def("run_from_state", py::overload_cast<const DualState&, const SchemeConfig&, double>(&run), py::arg("initial"),
          py::arg("config"), py::arg("sigma_minus0") = 0.0, py::call_guard<py::gil_scoped_release>());
  mod.def("steady_jump_profile", &steady_jump_profile, py::arg("params"), py::arg("v_edge"), py::arg("N"));

  py::class_<PhysicalSnapshot>(mod, "PhysicalSnapshot")
      .def_readonly("t", &PhysicalSnapshot::t)
      .def_property_readonly("x", [](const PhysicalSnapshot& s) { return as_array(s.x); })
      .def_property_readonly("u", [](const PhysicalSnapshot& s) { return as_array(s.u); })
      .def_property_readonly("mu", [](const PhysicalSnapshot& s) { return as_array(s.mu); })
      .def_readonly("mu_bar", &PhysicalSnapshot::mu_bar)
      .def_readonly("sigma_minus", &PhysicalSnapshot::sigma_minus)
      .def_readonly("sigma_plus", &PhysicalSnapshot::sigma_plus)
      .def_readonly("sigma_c", &PhysicalSnapshot::sigma_c)
      .def_readonly("mass_center", &PhysicalSnapshot::mass_center)
      .def_readonly("ell", &PhysicalSnapshot::ell);

  py::class_<SupportForecast>(mod, "SupportForecast")
      .def_readonly("slope", &SupportForecast::slope)
      .def_readonly("t_star", &SupportForecast::t_star)
      .def_property_readonly("regime", [](const SupportForecast& f) { return std::string(to_string(f.regime)); });

  py::class_<CenterDiagnostics>(mod, "CenterDiagnostics")
      .def_readonly("sigma_c", &CenterDiagnostics::sigma_c)
      .def_readonly("mass_center", &CenterDiagnostics::mass_center)
      .def_readonly("identity_residual", &CenterDiagnostics::identity_residual)
      .def_readonly("sigma_c_rate", &CenterDiagnostics::sigma_c_rate);

  mod.def("mu_bar", &mu_bar, py::arg("state"));
  mod.def("reconstruct", py::overload_cast<const DualState&, const FrontState&>(&reconstruct), py::arg("state"),
          py::arg("fronts"));
  mod.def("predict_support", &predict_support, py::arg("params"), py::arg("ell0"));
  mod.def("center_diagnostics", &center_diagnostics, py::arg("snapshot"), py::arg("params"));

  py::class_<WaveProfile>(mod, "WaveProfile")
      .def_property_readonly("kind", [](const WaveProfile& w) { return std::string(to_string(w.kind)); })
      .def_readonly("tau", &WaveProfile::tau)
      .def_readonly("v_edge", &WaveProfile::v_edge)
      .def_property_readonly("kappa", [](const WaveProfile& w) { return as_array(w.kappa); })
      .def_property_readonly("U", [](const WaveProfile& w) { return as_array(w.U); })
      .def_property_readonly("xi", [](const WaveProfile& w) { return as_array(w.xi); })
      .def_readonly("sigma", &WaveProfile::sigma)
      .def_readonly("kappa_bar", &WaveProfile::kappa_bar)
      .def_readonly("entropic", &WaveProfile::entropic)
      .def_readonly("ode_residual", &WaveProfile::ode_residual)
      .def_readonly("mass_residual", &WaveProfile::mass_residual)
      .def_property_readonly("ell", &WaveProfile::ell);

  py::class_<AdmissibilityReport>(mod, "AdmissibilityReport")
      .def_readonly("mass_ok", &AdmissibilityReport::mass_ok)
      .def_readonly("sigma_range_ok", &AdmissibilityReport::sigma_range_ok)
      .def_readonly("h_positive", &AdmissibilityReport::h_positive)
      .def_readonly("entropic", &AdmissibilityReport::entropic)
      .def_readonly("kappa_star", &AdmissibilityReport::kappa_star)
      .def_readonly("messages", &AdmissibilityReport::messages)
      .def("admissible", &AdmissibilityReport::admissible);

  mod.def("admissibility", &admissibility, py::arg("params"), py::arg("M"), py::arg("tau"));
  mod.def("continuous_profile", &continuous_profile, py::arg("params"), py::arg("M"), py::arg("tau"),
          py::arg("xi_minus") = 0.0, py::arg("N") = 2001);
  mod.def("jump_profile", &jump_profile, py::arg("params"), py::arg("v_edge"), py::arg("xi_minus") = 0.0,
          py::arg("N") = 2001);
  mod.def("entropic_speed", &entropic_speed, py::arg("kappa_bar"), py::arg("M"), py::arg("a"));
  mod.def("profile_value", &profile_value, py::arg("profile"), py::arg("kappa"));
  mod.def("to_dual_state", &to_dual_state, py::arg("profile"), py::arg("N"));

  py::class_<InvariantEntry>(mod, "InvariantEntry")
      .def_readonly("name", &InvariantEntry::name)
      .def_readonly("max_residual", &InvariantEntry::max_residual)
      .def_readonly("tolerance", &InvariantEntry::tolerance)
      .def_readonly("passed", &InvariantEntry::passed)
      .def_readonly("worst_t", &InvariantEntry::worst_t)
      .def_readonly("worst_eta", &InvariantEntry::worst_eta)
      .def_readonly("detail", &InvariantEntry::detail);
  py::class_<InvariantReport>(mod, "InvariantReport")
      .def_readonly("entries", &InvariantReport::entries)
      .def("all_passed", &InvariantReport::all_passed)
      .def("at", &InvariantReport::at, py::return_value_policy::copy);
  mod.def("validate_trajectory", [](const Trajectory& tr) { return validate_trajectory(tr); }, py::arg("trajectory"));

  py::class_<BlowupFit>(mod, "BlowupFit")
      .def_readonly("applicable", &BlowupFit::applicable)
      .def_readonly("t_star", &BlowupFit::t_star)
      .def_readonly("t_fit", &BlowupFit::t_fit)
      .def_readonly("rel_error", &BlowupFit::rel_error);
  mod.def("fit_blowup", [](const Trajectory& tr) { return fit_blowup(tr); }, py::arg("trajectory"));

  py::class_<ObservedOrderReport>(mod, "ObservedOrderReport")
      .def_readonly("grids", &ObservedOrderReport::grids)
      .def_readonly("errors", &ObservedOrderReport::errors)
      .def_readonly("errors_l1", &ObservedOrderReport::errors_l1)
      .def_readonly("orders", &ObservedOrderReport::orders)
      .def_readonly("fitted_order", &ObservedOrderReport::fitted_order)
      .def_readonly("fitted_order_l1", &ObservedOrderReport::fitted_order_l1)
      .def_readonly("monotone", &ObservedOrderReport::monotone)
      .def_readonly("passed", &ObservedOrderReport::passed);
  mod.def(
      "convergence_study",
      [](const ModelParams& p, const SchemeConfig& cfg, const std::vector<int>& grids, double v_edge) {
        return convergence_study(p, cfg, grids, v_edge);
      },
      py::arg("params"), py::arg("config"), py::arg("grids"), py::arg("v_edge") = 1.0,
      py::call_guard<py::gil_scoped_release>());

  mod.def(
      "simulate_config",
      [](const std::string& text) { return simulate(parse_run_config(text)); }, py::arg("text"),
      "Parses a table-format run configuration and runs it.");
  mod.def(
      "diagnostics_csv", [](const Trajectory& tr) { return diagnostics_csv(tr); }, py::arg("trajectory"));
}
