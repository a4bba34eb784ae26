#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "drfsim/coherent_analysis.hpp"
#include "drfsim/errors.hpp"
#include "drfsim/nnls.hpp"
#include "drfsim/quantum_drf.hpp"

using namespace drfsim;

namespace {

// Exact NNLS optimum by enumerating every support set.
double subset_enumeration_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  double best = b.norm();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int k = 0; k < n; ++k)
      if (mask & (1u << k)) idx.push_back(k);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd x = sub.colPivHouseholderQr().solve(b);
    if ((x.array() < 0.0).any()) continue;
    best = std::min(best, (sub * x - b).norm());
  }
  return best;
}

// Best residual over pairs of columns with weights (w, 1 - w), w on a 1e-3 lattice.
double two_node_scan(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index k = i; k < a.cols(); ++k)
      for (int s = 0; s <= 1000; ++s) {
        const double w = s * 1e-3;
        best = std::min(best, (w * a.col(i) + (1.0 - w) * a.col(k) - b).norm());
      }
  return best;
}

}  // namespace

TEST_CASE("build_grid") {
  SUBCASE("two nodes at j = 1/2 are the poles") {
    const CoherentGrid g = build_grid(SpinLabel(1), 2);
    CHECK(g.thetas[0] == 0.0);
    CHECK(g.thetas[1] == std::numbers::pi);
    CHECK(g.columns(0, 0) == 0.0);
    CHECK(g.columns(1, 0) == 1.0);
    CHECK(g.columns(0, 1) == 1.0);
    CHECK(g.columns(1, 1) == 0.0);
  }
  SUBCASE("columns are normalized, grid sorted and symmetric") {
    for (int tj : {1, 2, 5, 8, 17}) {
      for (int nodes : {tj + 1, 2 * tj + 3, default_node_count(SpinLabel(tj))}) {
        const CoherentGrid g = build_grid(SpinLabel(tj), nodes);
        REQUIRE(static_cast<int>(g.thetas.size()) == nodes);
        CHECK(g.thetas.front() == 0.0);
        CHECK(g.thetas.back() == std::numbers::pi);
        for (int k = 0; k < nodes; ++k) {
          CHECK(std::abs(g.columns.col(k).sum() - 1.0) <= 1e-12);
          if (k + 1 < nodes) CHECK(g.thetas[k] < g.thetas[k + 1]);
          CHECK(std::abs(g.thetas[k] + g.thetas[nodes - 1 - k] - std::numbers::pi) <= 1e-15);
          CHECK((g.columns.col(k) - g.columns.col(nodes - 1 - k).reverse()).cwiseAbs().maxCoeff() <= 1e-14);
        }
      }
    }
  }
  SUBCASE("uniform spacing in cos(theta)") {
    const CoherentGrid g = build_grid(SpinLabel(4), 9);
    for (int k = 0; k < 9; ++k) CHECK(std::cos(g.thetas[k]) == doctest::Approx(1.0 - 0.25 * k).scale(1.0).epsilon(1e-15));
  }
  SUBCASE("refinement keeps every coarse node") {
    const CoherentGrid coarse = build_grid(SpinLabel(4), 40);
    const CoherentGrid fine = build_grid(SpinLabel(4), refined_node_count(40));
    for (int k = 0; k < 40; ++k) CHECK(fine.thetas[2 * k] == doctest::Approx(coarse.thetas[k]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(build_grid(SpinLabel(4), 4), DomainError);
  CHECK_NOTHROW(build_grid(SpinLabel(4), 5));
}

TEST_CASE("nnls_solve examples") {
  const CoherentGrid g = build_grid(SpinLabel(4), 12);
  SUBCASE("a single grid column") {
    for (int k : {0, 5, 11}) {
      const DecompositionResult r = nnls_solve(g.columns, g.columns.col(k));
      CHECK(r.residual <= 1e-10);
      CHECK(r.weights(k) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(r.weight_sum_gap <= 1e-10);
    }
  }
  SUBCASE("a half-half mixture") {
    const Eigen::VectorXd b = 0.5 * (g.columns.col(2) + g.columns.col(9));
    const DecompositionResult r = nnls_solve(g.columns, b);
    CHECK(r.residual <= 1e-10);
    CHECK(r.weights(2) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.weights(9) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((r.weights.array() >= 0.0).all());
  }
  SUBCASE("maximally mixed j = 1 against a two-node scan") {
    const CoherentGrid g1 = build_grid(SpinLabel(2), 24);
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    const DecompositionResult r = nnls_solve(g1.columns, b);
    const double scan = two_node_scan(g1.columns, b);
    CHECK(r.residual <= scan + 1e-12);
    CHECK(r.residual <= 1e-10);  // the two-node pair (theta, pi - theta) with cos(theta) = 1/sqrt(3) is not on the grid, but three nodes suffice
  }
  CHECK_THROWS_AS(nnls_solve(g.columns, Eigen::VectorXd::Constant(4, 0.25)), DomainError);
  CHECK_THROWS_AS(nnls_solve(g.columns, Eigen::VectorXd::Constant(5, 0.3)), DomainError);
}

TEST_CASE("nnls recovers random nonnegative combinations") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 3 + trial % 10;
    const int cols = rows + 2 + trial % 17;
    Eigen::MatrixXd a(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) a(r, c) = u(rng);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(cols);
    for (int c = 0; c < cols; ++c)
      if (u(rng) < 0.3) w(c) = u(rng);
    const Eigen::VectorXd b = a * w;
    const NnlsSolution s = nnls(a, b);
    CHECK(s.residual <= 1e-8);
    CHECK((s.x.array() >= 0.0).all());
    CHECK(kkt_violation(a, b, s.x) <= 1e-10);
  }
}

TEST_CASE("nnls is optimal on small problems") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = 2 + trial % 5;
    const int cols = 1 + trial % 5;
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (int r = 0; r < rows; ++r) {
      b(r) = g(rng);
      for (int c = 0; c < cols; ++c) a(r, c) = g(rng);
    }
    const NnlsSolution s = nnls(a, b);
    CHECK((s.x.array() >= 0.0).all());
    CHECK(s.residual == doctest::Approx((a * s.x - b).norm()).epsilon(1e-12));
    CHECK(s.residual <= subset_enumeration_residual(a, b) + 1e-10);
    const NnlsSolution pos = nnls(a.cwiseAbs(), b.cwiseAbs());
    CHECK(pos.residual <= two_node_scan(a.cwiseAbs(), b.cwiseAbs()) + 1e-10);
  }
}

TEST_CASE("nnls edge cases") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const NnlsSolution neg = nnls(a, Eigen::Vector3d(-1.0, 2.0, -3.0));
  CHECK(neg.x(0) == 0.0);
  CHECK(neg.x(1) == doctest::Approx(2.0));
  CHECK(neg.x(2) == 0.0);
  CHECK(neg.residual == doctest::Approx(std::sqrt(10.0)));
  // duplicated columns: ties go to the lowest index
  Eigen::MatrixXd dup(2, 2);
  dup << 1.0, 1.0, 0.0, 0.0;
  const NnlsSolution tie = nnls(dup, Eigen::Vector2d(2.0, 0.0));
  CHECK(tie.x(0) == doctest::Approx(2.0));
  CHECK(tie.x(1) == 0.0);
  const NnlsSolution zero = nnls(a, Eigen::Vector3d::Zero());
  CHECK(zero.x.isZero());
  CHECK(zero.iterations == 0);
  CHECK_THROWS_AS(nnls(a, Eigen::Vector2d(1.0, 1.0)), DomainError);
}

TEST_CASE("convexity_test") {
  SUBCASE("the initial state is a coherent state") {
    for (int tj = 1; tj <= 12; ++tj) {
      const SpinLabel j(tj);
      CHECK(convexity_test(j, 0, default_node_count(j)).residual <= 1e-10);
    }
  }
  SUBCASE("one step leaves the coherent hull") {
    for (int tj : {2, 4, 8}) {
      const SpinLabel j(tj);
      const RefinementStudy study = convexity_refinement(j, 1, default_node_count(j));
      CHECK(study.coarse.residual > 1e-6);
      CHECK(study.refined.residual > 1e-6);
      CHECK(study.relative_change() < 0.10);
      CHECK(study.not_decomposable());
      CHECK(study.verdict() == Verdict::NotDecomposable);
    }
    CHECK(convexity_refinement(SpinLabel(4), 0, 40).verdict() == Verdict::Decomposable);
    CHECK(convexity_refinement(SpinLabel(2), 2, 24).verdict() == Verdict::Decomposable);
    CHECK(verdict_name(Verdict::Inconclusive) == "inconclusive");
  }
  SUBCASE("weights are nonnegative and KKT-feasible") {
    for (int tj : {1, 3, 6}) {
      const SpinLabel j(tj);
      const CoherentGrid g = build_grid(j, default_node_count(j));
      for (std::int64_t n : {0, 1, 3, 10}) {
        const Eigen::VectorXd b = evolved_populations(j, n);
        const DecompositionResult r = nnls_solve(g.columns, b);
        CHECK((r.weights.array() >= 0.0).all());
        CHECK(r.residual >= 0.0);
        CHECK(kkt_violation(g.columns, b, r.weights) <= 1e-10);
        CHECK(r.weight_sum_gap == doctest::Approx(std::abs(r.weights.sum() - 1.0)));
      }
    }
  }
  SUBCASE("residual does not grow when the grid is refined") {
    for (int tj : {2, 3, 4, 8}) {
      const SpinLabel j(tj);
      for (std::int64_t n : {1, 2, 5}) {
        int nodes = j.dim();
        double previous = convexity_test(j, n, nodes).residual;
        for (int level = 0; level < 5; ++level) {
          nodes = refined_node_count(nodes);
          const double now = convexity_test(j, n, nodes).residual;
          CHECK(now <= previous + 1e-12);
          previous = now;
        }
      }
    }
  }
  SUBCASE("evolved populations match the map") {
    const SpinLabel j(5);
    FrameState rho = FrameState::stretched(j);
    const KrausSet k = build_kraus(j);
    for (int n = 0; n < 4; ++n) {
      CHECK((evolved_populations(j, n) - rho.populations()).norm() == 0.0);
      rho = apply_map(rho, k);
    }
  }
  CHECK_THROWS_AS(convexity_test(SpinLabel(2), -1, 24), DomainError);
}
