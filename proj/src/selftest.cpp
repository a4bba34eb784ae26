#include "drfsim/selftest.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "drfsim/angular_momentum.hpp"
#include "drfsim/classical_walk.hpp"
#include "drfsim/errors.hpp"
#include "drfsim/parallel.hpp"
#include "drfsim/quantum_drf.hpp"
#include "drfsim/random.hpp"
#include "drfsim/tolerances.hpp"

namespace drfsim {

namespace {

constexpr std::array<CouplingBranch, 2> kBranches{CouplingBranch::Plus, CouplingBranch::Minus};
constexpr std::array<QubitState, 2> kQubit{QubitState::Up, QubitState::Down};

Eigen::MatrixXcd random_density_matrix(int dim, Engine& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = {standard_normal(rng), standard_normal(rng)};
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

Eigen::VectorXd random_populations(int dim, Engine& rng) {
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) p[i] = -std::log(1.0 - uniform01(rng));
  return p / p.sum();
}

// Pi_c on the coupled space, basis index 2 * (j + m) + a.
Eigen::MatrixXd assemble_projector(SpinLabel j, CouplingBranch c) {
  const int dim = j.dim();
  Eigen::MatrixXd pi(2 * dim, 2 * dim);
  for (int r = 0; r < dim; ++r)
    for (QubitState a : kQubit)
      for (int col = 0; col < dim; ++col)
        for (QubitState b : kQubit)
          pi(2 * r + static_cast<int>(a), 2 * col + static_cast<int>(b)) =
              projector_element(j, c, a, b, magnetic_from_index(j, r), magnetic_from_index(j, col));
  return pi;
}

struct Check {
  std::string name;
  std::function<bool(SpinLabel, Engine&)> body;
};

std::vector<Check> checks() {
  return {
      {"kraus_completeness",
       [](SpinLabel j, Engine&) {
         const Eigen::MatrixXd c = build_kraus(j).completeness();
         return (c - Eigen::MatrixXd::Identity(j.dim(), j.dim())).cwiseAbs().maxCoeff() <= tol::kStructural;
       }},
      {"projector_completeness",
       [](SpinLabel j, Engine&) {
         const Eigen::MatrixXd sum = assemble_projector(j, CouplingBranch::Plus) +
                                     assemble_projector(j, CouplingBranch::Minus);
         return (sum - Eigen::MatrixXd::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() <=
                tol::kStructural;
       }},
      {"projector_algebra",
       [](SpinLabel j, Engine&) {
         bool ok = true;
         for (CouplingBranch c : kBranches) {
           const Eigen::MatrixXd pi = assemble_projector(j, c);
           ok &= (pi * pi - pi).cwiseAbs().maxCoeff() <= tol::kStructural;
           ok &= (pi - pi.transpose()).cwiseAbs().maxCoeff() <= tol::kStructural;
           const double expected = c == CouplingBranch::Plus ? j.twice_j() + 2 : j.twice_j();
           ok &= std::abs(pi.trace() - expected) <= tol::kStructural;
         }
         return ok;
       }},
      {"trace_preservation",
       [](SpinLabel j, Engine& rng) {
         const KrausSet k = build_kraus(j);
         const FrameState dense(detail::Unchecked{}, j, random_density_matrix(j.dim(), rng));
         const FrameState diag(detail::Unchecked{}, j, random_populations(j.dim(), rng));
         return std::abs(apply_map(dense, k).trace() - 1.0) <= tol::kStructural &&
                std::abs(apply_map(diag, k).trace() - 1.0) <= tol::kStructural;
       }},
      {"positivity",
       [](SpinLabel j, Engine& rng) {
         const KrausSet k = build_kraus(j);
         const FrameState dense(detail::Unchecked{}, j, random_density_matrix(j.dim(), rng));
         return diagnose(apply_map(dense, k)).min_eigenvalue >= -tol::kPositivity;
       }},
      {"diagonal_closure",
       [](SpinLabel j, Engine& rng) {
         const KrausSet k = build_kraus(j);
         const FrameState diag(detail::Unchecked{}, j, random_populations(j.dim(), rng));
         const FrameState out = apply_map(diag.to_dense(), k);
         Eigen::MatrixXcd off = out.matrix();
         off.diagonal().setZero();
         return apply_map(diag, k).is_diagonal() && off.cwiseAbs().maxCoeff() == 0.0;
       }},
      {"mixed_fixed_point",
       [](SpinLabel j, Engine&) {
         const FrameState mixed = FrameState::maximally_mixed(j);
         const FrameState out = apply_map(mixed.to_dense(), build_kraus(j));
         return (out.matrix() - mixed.matrix()).cwiseAbs().maxCoeff() <= tol::kStructural;
       }},
      {"legendre_normalization",
       [](SpinLabel j, Engine& rng) {
         const LegendreSpectrum s = initial_spectrum(j, default_l_max(j));
         const double alpha = std::numbers::pi * uniform01(rng);
         const LegendreSpectrum w = walk_evolve(s, WalkParameters(alpha, 7));
         return std::abs(s[0] - 1.0) <= tol::kOracle && w[0] == s[0];
       }},
      {"distribution_positivity",
       [](SpinLabel j, Engine& rng) {
         const LegendreSpectrum s = initial_spectrum(j, default_l_max(j));
         const double alpha = fitted_step(j);
         const double jj = j.j();
         const auto horizon = static_cast<std::int64_t>(std::ceil(10.0 * jj * jj));
         bool ok = s.min_density(4096) >= -tol::kTruncationPositivity;
         for (int draw = 0; draw < 3; ++draw) {
           const auto n = static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(horizon + 1));
           ok &= walk_evolve(s, WalkParameters(alpha, n)).min_density(4096) >= -tol::kTruncationPositivity;
         }
         return ok;
       }},
      {"coherent_normalization",
       [](SpinLabel j, Engine& rng) {
         const double theta = std::numbers::pi * uniform01(rng);
         double sum = 0.0;
         for (double p : coherent_populations(j, theta)) sum += p;
         return std::abs(sum - 1.0) <= tol::kStructural;
       }},
  };
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed, int max_twice_j) {
  const std::vector<Check> suite = checks();
  const auto count = suite.size() * static_cast<std::size_t>(max_twice_j);
  std::vector<int> outcome(count, 0);  // 1 pass, 0 fail
  std::vector<std::string> detail(count);

  parallel_for(count, [&](std::size_t task) {
    const std::size_t check = task / static_cast<std::size_t>(max_twice_j);
    const int twice_j = static_cast<int>(task % static_cast<std::size_t>(max_twice_j)) + 1;
    Engine rng(stream_seed(seed, task));
    try {
      outcome[task] = suite[check].body(SpinLabel(twice_j), rng) ? 1 : 0;
    } catch (const std::exception& e) {
      detail[task] = e.what();
    }
  });

  SelftestReport report;
  for (std::size_t task = 0; task < count; ++task) {
    if (outcome[task]) {
      ++report.passed;
      continue;
    }
    ++report.failed;
    std::ostringstream line;
    line << suite[task / static_cast<std::size_t>(max_twice_j)].name
         << " 2j=" << task % static_cast<std::size_t>(max_twice_j) + 1;
    if (!detail[task].empty()) line << ": " << detail[task];
    report.failures.push_back(line.str());
  }
  return report;
}

}  // namespace drfsim
