#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string_view>
#include <vector>

#include "drfsim/angular_momentum.hpp"

namespace drfsim {

/// Candidate coherent states for a convex decomposition: polar angles spaced
/// uniformly in cos(theta) from 0 to pi, with their m-populations as columns.
struct CoherentGrid {
  SpinLabel j;
  std::vector<double> thetas;
  Eigen::MatrixXd columns;  // (2j+1) x nodes
};

/// Requires n_nodes >= 2j + 1.
CoherentGrid build_grid(SpinLabel j, int n_nodes);

/// Node count of the grid with half the spacing; contains every node of the
/// original grid.
int refined_node_count(int n_nodes);

struct DecompositionResult {
  Eigen::VectorXd weights;
  double residual = 0.0;
  double weight_sum_gap = 0.0;
  int iterations = 0;
};

/// Non-negative weights over the grid columns that best reproduce the target
/// populations. The target must be a probability vector.
DecompositionResult nnls_solve(const Eigen::MatrixXd& columns, const Eigen::VectorXd& target);

/// Population vector after n uses of the frame, starting from |j, j>.
Eigen::VectorXd evolved_populations(SpinLabel j, std::int64_t n);

/// Tries to write the n-step frame state as a mixture of coherent states.
DecompositionResult convexity_test(SpinLabel j, std::int64_t n, int n_nodes);

enum class Verdict { Decomposable, NotDecomposable, Inconclusive };
std::string_view verdict_name(Verdict v);

/// convexity_test on a grid and on its refinement.
struct RefinementStudy {
  DecompositionResult coarse;
  DecompositionResult refined;
  int coarse_nodes = 0;
  int refined_nodes = 0;

  /// |refined - coarse| / coarse residual.
  double relative_change() const;
  /// Residual above threshold on both grids and stable under refinement.
  bool not_decomposable() const;
  /// Decomposable when the refined residual is at or below threshold.
  Verdict verdict() const;
};
RefinementStudy convexity_refinement(SpinLabel j, std::int64_t n, int n_nodes);

/// 8 (2j + 1) nodes.
int default_node_count(SpinLabel j);

}  // namespace drfsim
