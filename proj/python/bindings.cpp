#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ampsim/acceptance.hpp"
#include "ampsim/bitlattice.hpp"
#include "ampsim/dynamics.hpp"
#include "ampsim/errors.hpp"
#include "ampsim/fkm.hpp"
#include "ampsim/ming.hpp"
#include "ampsim/observable.hpp"
#include "ampsim/runconfig.hpp"
#include "ampsim/thermolimit.hpp"

namespace py = pybind11;
using namespace ampsim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cyclic-shift amplifier and harmonic-chain autocorrelation simulator";
  m.attr("__version__") = kToolVersion;

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<NonPrimeOrder>(m, "NonPrimeOrder", error.ptr());
  py::register_exception<Overflow>(m, "Overflow", error.ptr());
  py::register_exception<NotNormalized>(m, "NotNormalized", error.ptr());
  py::register_exception<UnsupportedInitialState>(m, "UnsupportedInitialState", error.ptr());
  py::register_exception<IndefiniteForm>(m, "IndefiniteForm", error.ptr());
  py::register_exception<ZeroMode>(m, "ZeroMode", error.ptr());
  py::register_exception<DegenerateFit>(m, "DegenerateFit", error.ptr());
  py::register_exception<ConfigInvalid>(m, "ConfigInvalid", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());

  // bitlattice
  m.def("is_prime", &is_prime);
  m.def("shift_index", &shift_index, py::arg("n"), py::arg("index"), py::arg("t") = 1);
  m.def(
      "shift_digits",
      [](const std::string& digits, long long t) { return shift(BitConfig::from_string(digits), t).to_string(); },
      py::arg("digits"), py::arg("t") = 1, "Shift a digit string written d_0 first.");
  py::class_<OrbitDecomposition>(m, "OrbitDecomposition")
      .def_property_readonly("sites", &OrbitDecomposition::sites)
      .def_property_readonly("orbit_count", &OrbitDecomposition::orbit_count)
      .def_property_readonly("representatives", &OrbitDecomposition::representatives)
      .def_property_readonly("fixed_points", &OrbitDecomposition::fixed_points)
      .def("orbit_of", &OrbitDecomposition::orbit_of)
      .def("phase_of", &OrbitDecomposition::phase_of)
      .def("orbit", &OrbitDecomposition::orbit);
  m.def("decompose_orbits", &decompose_orbits, py::arg("n"), py::arg("dense_max_sites") = kDenseMaxSites);

  // ming
  m.def("ming_block", [](int n, double h) { return build_block(n, h).entries; }, py::arg("n"), py::arg("h") = 1.0);
  m.def(
      "verify_exponential", [](const Eigen::MatrixXcd& a, double h) {
        return verify_exponential(MingBlock{static_cast<int>(a.rows()), h, a});
      },
      py::arg("block"), py::arg("h") = 1.0);
  m.def("cyclic_permutation", &cyclic_permutation);
  m.def("rescaled_h", &rescaled_h);
  m.def(
      "propagator_matrix",
      [](int n, double t, double h0) { return assemble_propagator(decompose_orbits(n), t, rescaled_h(n, h0)).matrix(); },
      py::arg("n"), py::arg("t"), py::arg("h0") = 1.0);

  // observable
  py::class_<CockedSet>(m, "CockedSet")
      .def(py::init<int, double>(), py::arg("n"), py::arg("epsilon") = 0.0)
      .def_property_readonly("sites", &CockedSet::sites)
      .def_property_readonly("epsilon", &CockedSet::epsilon)
      .def_property_readonly("allowed_deviations", &CockedSet::allowed_deviations)
      .def("contains", py::overload_cast<std::uint64_t>(&CockedSet::contains, py::const_))
      .def("contains_digits",
           [](const CockedSet& s, const std::string& digits) { return s.contains(BitConfig::from_string(digits)); })
      .def("strict_index", [](const CockedSet& s) { return s.strict_state().index(); });
  m.def("default_epsilon", &default_epsilon);
  m.def(
      "f_n",
      [](const std::map<std::uint64_t, std::complex<double>>& amp0, const std::map<std::uint64_t, std::complex<double>>& amp1,
         std::complex<double> a0, std::complex<double> a1, const CockedSet& set, bool normalize) {
        AmplifierState s0(set.sites());
        AmplifierState s1(set.sites());
        for (const auto& [i, v] : amp0) s0.add(i, v);
        for (const auto& [i, v] : amp1) s1.add(i, v);
        return f_n(CombinedState(a0, a1, s0, s1), PointerVariable{set},
                   normalize ? Normalization::kAuto : Normalization::kStrict);
      },
      py::arg("amp0"), py::arg("amp1"), py::arg("a0"), py::arg("a1"), py::arg("cocked"), py::arg("normalize") = false,
      "Pointer reading of a0 psi_0 (x) amp0 + a1 psi_1 (x) amp1; amplifier states map index -> amplitude.");

  // dynamics
  py::class_<BranchAmplitudes>(m, "BranchAmplitudes")
      .def(py::init([](std::complex<double> a0, std::complex<double> a1) { return BranchAmplitudes{a0, a1}; }),
           py::arg("a0"), py::arg("a1"))
      .def_readwrite("a0", &BranchAmplitudes::a0)
      .def_readwrite("a1", &BranchAmplitudes::a1)
      .def_property_readonly("born_weight", &BranchAmplitudes::born_weight);
  py::class_<TimeAverageResult>(m, "TimeAverageResult")
      .def_readonly("n", &TimeAverageResult::n)
      .def_readonly("horizon", &TimeAverageResult::horizon)
      .def_readonly("mean", &TimeAverageResult::mean)
      .def_readonly("per_step", &TimeAverageResult::per_step)
      .def_readonly("closed_form", &TimeAverageResult::closed_form)
      .def_readonly("cocked_visits", &TimeAverageResult::cocked_visits);
  m.def(
      "time_average",
      [](const BranchAmplitudes& a, int n, double epsilon, std::optional<long long> horizon, int substeps) {
        const CockedSet set(n, epsilon);
        TimeAverageOptions opts;
        opts.substeps = substeps;
        opts.record_series = true;
        return time_average_f(cocked_initial_state(a, set), PointerVariable{set}, horizon.value_or(n), opts);
      },
      py::arg("a"), py::arg("n"), py::arg("epsilon") = 0.0, py::arg("horizon") = py::none(), py::arg("substeps") = 1,
      "Time average of f_n from the strict cocked state; the horizon defaults to one period.");
  m.def("orbit_compressed_average", py::overload_cast<const BranchAmplitudes&, int, double>(&orbit_compressed_average),
        py::arg("a"), py::arg("n"), py::arg("epsilon") = 0.0);
  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("n", &SweepRow::n)
      .def_readonly("mean", &SweepRow::mean)
      .def_readonly("born_weight", &SweepRow::born_weight)
      .def_readonly("abs_error", &SweepRow::abs_error)
      .def_property_readonly("path", [](const SweepRow& r) { return to_string(r.path); });
  m.def(
      "born_limit_sweep",
      [](const BranchAmplitudes& a, const std::vector<int>& ns, double epsilon, int periods) {
        SweepOptions opts;
        opts.epsilon_schedule = [epsilon](int) { return epsilon; };
        opts.periods = periods;
        return born_limit_sweep(a, ns, opts);
      },
      py::arg("a"), py::arg("n"), py::arg("epsilon") = 0.0, py::arg("periods") = 1);

  // thermolimit
  py::class_<TwoPointSystem>(m, "TwoPointSystem").def_readonly("w0", &TwoPointSystem::w0).def_readonly("w1", &TwoPointSystem::w1);
  m.def("limit_system", &limit_system);
  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("limit_expectation", &ConvergenceReport::limit_expectation)
      .def_readonly("fitted_intercept", &ConvergenceReport::fitted_intercept)
      .def_readonly("decay_exponent", &ConvergenceReport::decay_exponent)
      .def_readonly("final_error", &ConvergenceReport::final_error)
      .def_readonly("pass_", &ConvergenceReport::pass);
  m.def("compare_limit", [](const BranchAmplitudes& a, const std::vector<SweepRow>& rows, double tol) {
    return compare_limit(a, rows, tol);
  });

  // fkm
  py::class_<HarmonicChain>(m, "HarmonicChain")
      .def_static("ring", &HarmonicChain::ring, py::arg("n"), py::arg("onsite"), py::arg("kappa"), py::arg("beta") = 1.0)
      .def_static("scaled_ring", &HarmonicChain::scaled_ring, py::arg("n"), py::arg("beta") = 1.0,
                  py::arg("kappa0") = 1.0, py::arg("onsite") = 1.0)
      .def_readonly("n", &HarmonicChain::n)
      .def_readonly("coupling", &HarmonicChain::coupling)
      .def_readonly("beta", &HarmonicChain::beta);
  py::class_<NormalModes>(m, "NormalModes")
      .def_readonly("omega_sq", &NormalModes::omega_sq)
      .def_readonly("omega", &NormalModes::omega)
      .def_readonly("vectors", &NormalModes::vectors);
  m.def("normal_modes", &normal_modes);
  m.def("characteristic_period", &characteristic_period);
  m.def("uniform_grid", &uniform_grid);
  py::class_<AutocorrCurve>(m, "AutocorrCurve")
      .def_readonly("tau", &AutocorrCurve::tau)
      .def_readonly("values", &AutocorrCurve::values)
      .def_readonly("standard_errors", &AutocorrCurve::standard_errors)
      .def_property_readonly("kind", [](const AutocorrCurve& c) { return to_string(c.kind); });
  m.def("phase_autocorrelation", [](const HarmonicChain& c, const std::vector<double>& grid) {
    return phase_autocorrelation(c, grid);
  });
  m.def(
      "phase_autocorrelation_mc",
      [](const HarmonicChain& c, const std::vector<double>& grid, std::uint64_t samples, std::uint64_t seed) {
        py::gil_scoped_release release;
        return phase_autocorrelation_mc(c, normal_modes(c), grid, samples, seed);
      },
      py::arg("chain"), py::arg("grid"), py::arg("samples"), py::arg("seed") = 42);
  py::class_<OuFit>(m, "OuFit")
      .def_readonly("gamma", &OuFit::gamma)
      .def_readonly("amplitude", &OuFit::amplitude)
      .def_readonly("residual", &OuFit::residual)
      .def_readonly("window_max", &OuFit::window_max)
      .def_readonly("points", &OuFit::points);
  m.def(
      "ou_fit",
      [](const std::vector<double>& tau, const std::vector<double>& values, std::optional<double> tau_max) {
        AutocorrCurve c;
        c.tau = tau;
        c.values = values;
        return ou_fit(c, tau_max);
      },
      py::arg("tau"), py::arg("values"), py::arg("tau_max") = py::none());

  // cli
  m.def(
      "run",
      [](const std::string& config_json) -> py::tuple {
        std::ostringstream out, err;
        RunConfig config;
        try {
          config = config_from_json(nlohmann::json::parse(config_json));
        } catch (const ConfigInvalid& e) {
          return py::make_tuple(static_cast<int>(kExitConfig), std::string(), std::string("config error: ") + e.what());
        }
        const int code = run(config, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("config_json"), "Run a JSON run config; returns (exit_code, stdout, stderr).");
}
