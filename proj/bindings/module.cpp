#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "qepi/diffusion.hpp"
#include "qepi/epi.hpp"
#include "qepi/fisher.hpp"
#include "qepi/fock.hpp"
#include "qepi/phase_space.hpp"
#include "qepi/report.hpp"
#include "qepi/suites.hpp"

namespace py = pybind11;
using namespace qepi;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entropy power inequality toolkit for bosonic quantum systems";

  py::register_exception<Error>(m, "QepiError");

  // --- reports --------------------------------------------------------------
  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("name", &CheckReport::name)
      .def_readonly("inputs", &CheckReport::inputs)
      .def_readonly("margin", &CheckReport::margin)
      .def_readonly("tolerance", &CheckReport::tolerance)
      .def_readonly("passed", &CheckReport::passed)
      .def_readonly("diagnostics", &CheckReport::diagnostics)
      .def("__repr__", [](const CheckReport& r) {
        return "<CheckReport " + r.name + (r.passed ? " passed" : " FAILED") +
               " margin=" + format_double(r.margin) + ">";
      });

  // --- phase space ----------------------------------------------------------
  py::class_<GaussianState>(m, "GaussianState")
      .def(py::init<Vec, Mat>(), py::arg("d"), py::arg("gamma"))
      .def_static("vacuum", &GaussianState::vacuum, py::arg("n_modes"))
      .def_static("thermal", &GaussianState::thermal, py::arg("n_modes"),
                  py::arg("mean_photon"))
      .def_readonly("n", &GaussianState::n)
      .def_readonly("d", &GaussianState::d)
      .def_readonly("gamma", &GaussianState::gamma);

  m.def("symplectic_form", &symplectic_form, py::arg("n_modes"));
  m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("gamma"));
  m.def("mean_photon", &mean_photon, py::arg("nu"));
  m.def("g_entropy", &g_entropy, py::arg("mean_photon"));
  m.def("gaussian_entropy", &gaussian_entropy, py::arg("state"));
  m.def("weak_submajorization_check", &weak_submajorization_check,
        py::arg("A"), py::arg("B"));
  m.def("gaussian_qepi_prime_check", &gaussian_qepi_prime_check, py::arg("x"),
        py::arg("y"), py::arg("lam"), py::arg("tolerance") = 1e-9);
  m.def("gaussian_qepi_power_check", &gaussian_qepi_power_check, py::arg("x"),
        py::arg("y"), py::arg("tolerance") = 1e-9);

  // --- fock backend ---------------------------------------------------------
  py::class_<FockSpace, std::shared_ptr<FockSpace>>(m, "FockSpace")
      .def(py::init([](int modes, int cutoff) {
             return std::const_pointer_cast<FockSpace>(
                 make_space(modes, cutoff));
           }),
           py::arg("modes"), py::arg("cutoff"))
      .def_property_readonly("modes", &FockSpace::modes)
      .def_property_readonly("cutoff", &FockSpace::cutoff)
      .def_property_readonly("dim", &FockSpace::dim)
      .def("annihilation", &FockSpace::annihilation, py::arg("mode"))
      .def("quadrature", &FockSpace::quadrature, py::arg("k"));

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<FockPtr, CMat>(), py::arg("space"), py::arg("mat"))
      .def_readonly("mat", &DensityMatrix::mat)
      .def_property_readonly(
          "space",
          [](const DensityMatrix& rho) {
            return std::const_pointer_cast<FockSpace>(rho.space);
          })
      .def("tail_mass", &DensityMatrix::tail_mass);

  const double kB = kDefaultTruncationBudget;
  m.def("vacuum", &make_vacuum, py::arg("space"));
  m.def("thermal", &make_thermal, py::arg("space"), py::arg("mean_photon"),
        py::arg("budget") = kB);
  m.def("coherent", &make_coherent, py::arg("space"), py::arg("alpha"),
        py::arg("budget") = kB);
  m.def("fock", &make_fock, py::arg("space"), py::arg("photons"));
  m.def("cat", &make_cat, py::arg("space"), py::arg("alpha"),
        py::arg("phase") = 0.0, py::arg("budget") = kB);
  m.def(
      "random_state",
      [](FockPtr space, std::uint64_t seed, int rank) {
        return random_state(std::move(space), seed, rank);
      },
      py::arg("space"), py::arg("seed"), py::arg("rank"));
  m.def("mix", &mix, py::arg("rho"), py::arg("sigma"), py::arg("w"));
  m.def("tensor", &tensor, py::arg("rho_x"), py::arg("rho_y"));
  m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("keep"));
  m.def("beamsplitter_combine", &beamsplitter_combine, py::arg("rho_x"),
        py::arg("rho_y"), py::arg("lam"), py::arg("budget") = kB);

  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
  m.def("relative_entropy", &relative_entropy, py::arg("rho"),
        py::arg("sigma"));
  m.def("trace_distance", &trace_distance, py::arg("rho"), py::arg("sigma"));
  m.def("characteristic_fn", &characteristic_fn, py::arg("rho"),
        py::arg("xi"));
  m.def("q_function", &q_function, py::arg("rho"), py::arg("xi"));
  m.def(
      "moments",
      [](const DensityMatrix& rho) {
        const Moments mom = moments(rho);
        return py::make_tuple(mom.d, mom.gamma);
      },
      py::arg("rho"));
  m.def("gaussify", &gaussify, py::arg("rho"));

  // --- diffusion ------------------------------------------------------------
  py::class_<EvolveOptions>(m, "EvolveOptions")
      .def(py::init<>())
      .def_readwrite("tol", &EvolveOptions::tol)
      .def_readwrite("budget", &EvolveOptions::budget);

  m.def("evolve_ode", &evolve_ode, py::arg("rho"), py::arg("t"),
        py::arg("opts") = EvolveOptions{});
  m.def("evolve_spectral", &evolve_spectral, py::arg("rho"), py::arg("t"),
        py::arg("budget") = kB);
  m.def("evolve_random_displacement", &evolve_random_displacement,
        py::arg("rho"), py::arg("t"), py::arg("order"),
        py::arg("budget") = kB);
  m.def("check_beamsplitter_compatibility", &check_beamsplitter_compatibility,
        py::arg("rho_x"), py::arg("rho_y"), py::arg("lam"), py::arg("t_x"),
        py::arg("t_y"), py::arg("opts") = EvolveOptions{});
  m.def("check_scaling_bounds", &check_scaling_bounds, py::arg("rho"),
        py::arg("t"), py::arg("opts") = EvolveOptions{});
  m.def("check_asymptotics", &check_asymptotics, py::arg("rho"),
        py::arg("t_grid"), py::arg("opts") = EvolveOptions{});
  m.def("gaussification_gap", &gaussification_gap, py::arg("rho"),
        py::arg("t"), py::arg("opts") = EvolveOptions{});

  // --- fisher ---------------------------------------------------------------
  m.def("fisher_directional_commutator", &fisher_directional_commutator,
        py::arg("rho"), py::arg("direction"));
  m.def("fisher_directional_fd", &fisher_directional_fd, py::arg("rho"),
        py::arg("direction"), py::arg("h") = 5e-3);
  m.def("fisher_total", &fisher_total, py::arg("rho"));
  m.def("regularize", &regularize, py::arg("rho"), py::arg("eps") = 1e-3);
  m.def("check_reparametrization", &check_reparametrization, py::arg("rho"),
        py::arg("direction"), py::arg("c"));
  m.def("check_data_processing", &check_data_processing, py::arg("rho"),
        py::arg("direction"), py::arg("channel"),
        py::arg("channel_name") = "channel", py::arg("h") = 5e-3);
  m.def("check_stam", &check_stam, py::arg("rho_x"), py::arg("rho_y"));
  m.def("check_convexity", &check_convexity, py::arg("rho_x"),
        py::arg("rho_y"), py::arg("lam"));
  m.def("check_weighted_convexity", &check_weighted_convexity,
        py::arg("rho_x"), py::arg("rho_y"), py::arg("lam"), py::arg("w_x"),
        py::arg("w_y"));
  m.def("check_translation_compatibility", &check_translation_compatibility,
        py::arg("rho_x"), py::arg("rho_y"), py::arg("lam"), py::arg("w_x"),
        py::arg("w_y"), py::arg("theta"), py::arg("direction"));

  // --- entropy power inequalities -------------------------------------------
  m.def("de_bruijn_residual", &de_bruijn_residual, py::arg("rho"),
        py::arg("t"), py::arg("h"), py::arg("opts") = EvolveOptions{});
  m.def("qepi_prime_check", &qepi_prime_check, py::arg("rho_x"),
        py::arg("rho_y"), py::arg("lam"), py::arg("tolerance") = 1e-6);
  m.def("qepi_power_check", &qepi_power_check, py::arg("rho_x"),
        py::arg("rho_y"), py::arg("tolerance") = 1e-6);

  py::class_<DeltaTrace>(m, "DeltaTrace")
      .def_readonly("t", &DeltaTrace::t)
      .def_readonly("delta", &DeltaTrace::delta);
  m.def(
      "delta_monotonicity_trace",
      [](const DensityMatrix& x, const DensityMatrix& y, double lam,
         const std::vector<double>& grid, const EvolveOptions& opts) {
        DeltaTrace trace;
        CheckReport r = delta_monotonicity_trace(x, y, lam, grid, opts, &trace);
        return py::make_tuple(r, trace);
      },
      py::arg("rho_x"), py::arg("rho_y"), py::arg("lam"), py::arg("t_grid"),
      py::arg("opts") = EvolveOptions{});

  py::class_<BlachmanOptions>(m, "BlachmanOptions")
      .def(py::init<>())
      .def_readwrite("t_max", &BlachmanOptions::t_max)
      .def_readwrite("grid_points", &BlachmanOptions::grid_points)
      .def_readwrite("clock_horizon", &BlachmanOptions::clock_horizon)
      .def_readwrite("evolve", &BlachmanOptions::evolve)
      .def_readwrite("ode_tol", &BlachmanOptions::ode_tol)
      .def_readwrite("profile_points", &BlachmanOptions::profile_points)
      .def_readwrite("record_stam", &BlachmanOptions::record_stam);
  py::class_<BlachmanTrace>(m, "BlachmanTrace")
      .def_readonly("t", &BlachmanTrace::t)
      .def_readonly("F", &BlachmanTrace::F)
      .def_readonly("G", &BlachmanTrace::G)
      .def_readonly("H", &BlachmanTrace::H)
      .def_readonly("E_x", &BlachmanTrace::E_x)
      .def_readonly("E_y", &BlachmanTrace::E_y)
      .def_readonly("E_z", &BlachmanTrace::E_z)
      .def_readonly("delta", &BlachmanTrace::delta)
      .def_readonly("stam_slack", &BlachmanTrace::stam_slack);
  m.def(
      "blachman_replay",
      [](const DensityMatrix& x, const DensityMatrix& y,
         const BlachmanOptions& opts) {
        BlachmanTrace trace;
        CheckReport r = blachman_replay(x, y, opts, &trace);
        return py::make_tuple(r, trace);
      },
      py::arg("rho_x"), py::arg("rho_y"),
      py::arg("opts") = BlachmanOptions{});

  // --- suites ---------------------------------------------------------------
  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("suite", &RunConfig::suite)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("trials", &RunConfig::trials)
      .def_readwrite("cutoff", &RunConfig::cutoff)
      .def_readwrite("lambda_grid", &RunConfig::lambda_grid)
      .def_readwrite("t_grid", &RunConfig::t_grid)
      .def_readwrite("tolerances", &RunConfig::tolerances)
      .def_readwrite("out", &RunConfig::out)
      .def_readwrite("format", &RunConfig::format);
  m.def("suite_names", [] { return suite_names(); });
  m.def("run_suite", &run_suite, py::arg("config"));
  m.def("describe_state", &describe_state, py::arg("spec"),
        py::arg("cutoff") = 24);
}
