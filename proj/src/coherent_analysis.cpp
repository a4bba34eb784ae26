#include "drfsim/coherent_analysis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "drfsim/errors.hpp"
#include "drfsim/nnls.hpp"
#include "drfsim/quantum_drf.hpp"
#include "drfsim/tolerances.hpp"

namespace drfsim {

namespace {
constexpr const char* kModule = "coherent_analysis";
}

CoherentGrid build_grid(SpinLabel j, int n_nodes) {
  if (n_nodes < j.dim()) {
    throw DomainError(kModule, "need at least 2j+1 = " + std::to_string(j.dim()) + " grid nodes, got " +
                                   std::to_string(n_nodes));
  }
  if (n_nodes < 2) throw DomainError(kModule, "grid needs both poles");
  CoherentGrid grid{j, {}, Eigen::MatrixXd(j.dim(), n_nodes)};
  grid.thetas.resize(static_cast<std::size_t>(n_nodes));
  for (int k = 0; k < n_nodes; ++k) {
    // x_k = 1 - 2k/(N-1), paired so that x_{N-1-k} = -x_k exactly
    double theta;
    if (2 * k + 1 == n_nodes) {
      theta = 0.5 * std::numbers::pi;
    } else if (2 * k < n_nodes) {
      theta = std::acos(1.0 - 2.0 * k / (n_nodes - 1));
    } else {
      theta = std::numbers::pi - std::acos(1.0 - 2.0 * (n_nodes - 1 - k) / (n_nodes - 1));
    }
    grid.thetas[static_cast<std::size_t>(k)] = theta;
    const std::vector<double> pops = coherent_populations(j, theta);
    for (int row = 0; row < j.dim(); ++row) grid.columns(row, k) = pops[static_cast<std::size_t>(row)];
  }
  return grid;
}

int refined_node_count(int n_nodes) { return 2 * n_nodes - 1; }

int default_node_count(SpinLabel j) { return 8 * j.dim(); }

DecompositionResult nnls_solve(const Eigen::MatrixXd& columns, const Eigen::VectorXd& target) {
  if (columns.rows() != target.size()) throw DomainError(kModule, "target length does not match the grid");
  if (std::abs(target.sum() - 1.0) > tol::kOracle) {
    throw DomainError(kModule, "target populations must sum to 1");
  }
  const NnlsSolution s = nnls(columns, target, tol::kKkt);
  return {s.x, s.residual, std::abs(s.x.sum() - 1.0), s.iterations};
}

Eigen::VectorXd evolved_populations(SpinLabel j, std::int64_t n) {
  if (n < 0) throw DomainError(kModule, "step count must be non-negative");
  const KrausSet kraus = build_kraus(j);
  FrameState rho = FrameState::stretched(j);
  for (std::int64_t step = 0; step < n; ++step) rho = apply_map(rho, kraus);
  return rho.populations();
}

DecompositionResult convexity_test(SpinLabel j, std::int64_t n, int n_nodes) {
  const CoherentGrid grid = build_grid(j, n_nodes);
  return nnls_solve(grid.columns, evolved_populations(j, n));
}

double RefinementStudy::relative_change() const {
  if (coarse.residual == 0.0) return refined.residual == 0.0 ? 0.0 : INFINITY;
  return std::abs(refined.residual - coarse.residual) / coarse.residual;
}

bool RefinementStudy::not_decomposable() const {
  return coarse.residual > tol::kDecomposabilityResidual &&
         refined.residual > tol::kDecomposabilityResidual &&
         relative_change() < tol::kRefinementStability;
}

Verdict RefinementStudy::verdict() const {
  if (refined.residual <= tol::kDecomposabilityResidual) return Verdict::Decomposable;
  return not_decomposable() ? Verdict::NotDecomposable : Verdict::Inconclusive;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Decomposable: return "decomposable";
    case Verdict::NotDecomposable: return "not_decomposable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

RefinementStudy convexity_refinement(SpinLabel j, std::int64_t n, int n_nodes) {
  RefinementStudy study;
  study.coarse_nodes = n_nodes;
  study.refined_nodes = refined_node_count(n_nodes);
  study.coarse = convexity_test(j, n, study.coarse_nodes);
  study.refined = convexity_test(j, n, study.refined_nodes);
  return study;
}

}  // namespace drfsim
