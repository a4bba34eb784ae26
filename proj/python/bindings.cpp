#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drfsim/angular_momentum.hpp"
#include "drfsim/classical_walk.hpp"
#include "drfsim/coherent_analysis.hpp"
#include "drfsim/harness.hpp"
#include "drfsim/nnls.hpp"
#include "drfsim/quantum_drf.hpp"
#include "drfsim/selftest.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

drfsim::SpinLabel spin(int twice_j) { return drfsim::SpinLabel(twice_j); }

drfsim::CouplingBranch branch(const std::string& name) {
  if (name == "+" || name == "plus") return drfsim::CouplingBranch::Plus;
  if (name == "-" || name == "minus") return drfsim::CouplingBranch::Minus;
  throw py::value_error("branch must be '+' or '-'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum directional reference frame degradation and its random-walk model";
  m.attr("__version__") = std::string(drfsim::library_version());

  py::register_exception<drfsim::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<drfsim::AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
  py::register_exception<drfsim::ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<drfsim::ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

  // angular momentum
  m.def(
      "cg_coefficient",
      [](int twice_j, int twice_m, bool s_up, const std::string& b) {
        return drfsim::cg_coefficient(spin(twice_j), {twice_m}, s_up, branch(b)).value();
      },
      "twice_j"_a, "twice_m"_a, "s_up"_a, "branch"_a);
  m.def(
      "projector_element",
      [](int twice_j, const std::string& b, int a, int bb, int twice_m_row, int twice_m_col) {
        if ((a != 0 && a != 1) || (bb != 0 && bb != 1)) throw py::value_error("qubit index must be 0 or 1");
        return drfsim::projector_element(spin(twice_j), branch(b), static_cast<drfsim::QubitState>(a),
                                         static_cast<drfsim::QubitState>(bb), {twice_m_row}, {twice_m_col});
      },
      "twice_j"_a, "branch"_a, "a"_a, "b"_a, "twice_m_row"_a, "twice_m_col"_a);
  m.def(
      "coherent_populations",
      [](int twice_j, double theta) { return drfsim::coherent_populations(spin(twice_j), theta); },
      "twice_j"_a, "theta"_a);

  // quantum frame
  m.def(
      "closed_form_fidelity", [](int twice_j, std::int64_t n) { return drfsim::closed_form_fidelity(spin(twice_j), n); },
      "twice_j"_a, "n"_a);
  m.def(
      "evolve",
      [](int twice_j, std::int64_t n_max) {
        const drfsim::FidelitySeries s = drfsim::evolve(spin(twice_j), n_max);
        std::vector<double> map, closed;
        for (const auto& e : s.entries) {
          map.push_back(e.map);
          closed.push_back(e.closed);
        }
        return py::make_tuple(map, closed);
      },
      "twice_j"_a, "n_max"_a, "Returns (F_map, F_closed) lists for n = 0 .. n_max.");
  m.def(
      "evolved_populations",
      [](int twice_j, std::int64_t n) { return drfsim::evolved_populations(spin(twice_j), n); }, "twice_j"_a, "n"_a);
  m.def(
      "apply_map",
      [](int twice_j, const Eigen::MatrixXcd& rho) {
        const auto j = spin(twice_j);
        return drfsim::apply_map(drfsim::FrameState::from_matrix(j, rho), drfsim::build_kraus(j)).matrix();
      },
      "twice_j"_a, "rho"_a, "One use of the frame on a dense density matrix.");
  m.def(
      "quantum_fidelity",
      [](int twice_j, const Eigen::MatrixXcd& rho) {
        const auto j = spin(twice_j);
        return drfsim::quantum_fidelity(drfsim::FrameState::from_matrix(j, rho), drfsim::build_kraus(j));
      },
      "twice_j"_a, "rho"_a);
  m.def(
      "kraus_operators",
      [](int twice_j) {
        const drfsim::KrausSet k = drfsim::build_kraus(spin(twice_j));
        py::dict out;
        for (const char* c : {"+", "-"})
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              out[py::make_tuple(c, a, b)] = k.op(branch(c), static_cast<drfsim::QubitState>(a),
                                                  static_cast<drfsim::QubitState>(b))
                                                 .dense();
        return out;
      },
      "twice_j"_a, "Dense E_ab^c keyed by (c, a, b).");
  m.def(
      "sample_trajectory",
      [](int twice_j, std::int64_t n_max, std::uint64_t seed) {
        const drfsim::Trajectory t = drfsim::sample_trajectory(spin(twice_j), n_max, seed);
        std::string outcomes;
        for (auto c : t.record.outcomes) outcomes += c == drfsim::CouplingBranch::Plus ? '+' : '-';
        return py::dict("outcomes"_a = outcomes, "probabilities"_a = t.record.probabilities,
                        "fidelities"_a = t.fidelities, "populations"_a = t.final_state.populations());
      },
      "twice_j"_a, "n_max"_a, "seed"_a);
  m.def(
      "trajectory_statistics",
      [](int twice_j, std::int64_t n_max, std::uint64_t seed, std::int64_t samples) {
        const auto s = drfsim::trajectory_fidelity_statistics(spin(twice_j), n_max, seed, samples);
        return py::make_tuple(s.mean, s.std_error);
      },
      "twice_j"_a, "n_max"_a, "seed"_a, "samples"_a, "Returns (mean, std_error) of the conditional fidelity per step.");

  // classical walk
  m.def("fitted_step", [](int twice_j) { return drfsim::fitted_step(spin(twice_j)); }, "twice_j"_a);
  m.def(
      "initial_spectrum",
      [](int twice_j, std::optional<int> l_max) {
        const auto j = spin(twice_j);
        const auto s = drfsim::initial_spectrum(j, l_max ? *l_max : drfsim::default_l_max(j));
        return std::vector<double>(s.coeffs().begin(), s.coeffs().end());
      },
      "twice_j"_a, "l_max"_a = py::none());
  m.def(
      "walk_evolve",
      [](std::vector<double> coeffs, double alpha, std::int64_t n) {
        const auto s = drfsim::walk_evolve(drfsim::LegendreSpectrum(std::move(coeffs)), drfsim::WalkParameters(alpha, n));
        return std::vector<double>(s.coeffs().begin(), s.coeffs().end());
      },
      "coeffs"_a, "alpha"_a, "n"_a);
  m.def(
      "classical_fidelity",
      [](std::vector<double> coeffs) { return drfsim::classical_fidelity(drfsim::LegendreSpectrum(std::move(coeffs))); },
      "coeffs"_a);
  m.def(
      "classical_fidelity_series",
      [](int twice_j, std::int64_t n_max, std::optional<double> alpha) {
        const auto j = spin(twice_j);
        std::vector<double> f;
        for (const auto& r : drfsim::classical_fidelity_series(j, alpha ? *alpha : drfsim::fitted_step(j), n_max))
          f.push_back(r.pipeline);
        return f;
      },
      "twice_j"_a, "n_max"_a, "alpha"_a = py::none());
  m.def("angular_variance", [](int twice_j) { return drfsim::angular_variance(spin(twice_j)); }, "twice_j"_a);
  m.def(
      "gaussian_approximation_gap", [](int twice_j) { return drfsim::gaussian_approximation_gap(spin(twice_j)); },
      "twice_j"_a);
  m.def("half_life", [](int twice_j) { return drfsim::half_life(spin(twice_j)); }, "twice_j"_a);

  // convex decomposition
  m.def(
      "nnls",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
        const auto s = drfsim::nnls(a, b);
        return py::make_tuple(s.x, s.residual);
      },
      "a"_a, "b"_a, "Lawson-Hanson NNLS. Returns (x, residual).");
  m.def(
      "convexity_test",
      [](int twice_j, std::int64_t n, std::optional<int> nodes) {
        const auto j = spin(twice_j);
        const auto r = drfsim::convexity_test(j, n, nodes ? *nodes : drfsim::default_node_count(j));
        return py::dict("weights"_a = r.weights, "residual"_a = r.residual, "weight_sum_gap"_a = r.weight_sum_gap);
      },
      "twice_j"_a, "n"_a, "nodes"_a = py::none());

  m.def(
      "selftest",
      [](std::uint64_t seed, int max_twice_j) {
        const auto r = drfsim::run_selftest(seed, max_twice_j);
        return py::make_tuple(r.passed, r.failed);
      },
      "seed"_a = 20070131, "max_twice_j"_a = 20);
}
