#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "drfsim/angular_momentum.hpp"
#include "drfsim/errors.hpp"
#include "oracles.hpp"

using namespace drfsim;

namespace {

constexpr QubitState kQubit[] = {QubitState::Up, QubitState::Down};
constexpr CouplingBranch kBranches[] = {CouplingBranch::Plus, CouplingBranch::Minus};

Eigen::MatrixXd assemble(SpinLabel j, CouplingBranch c) {
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

}  // namespace

TEST_CASE("spin labels and magnetic indices") {
  CHECK(SpinLabel(3).dim() == 4);
  CHECK(SpinLabel(3).j() == doctest::Approx(1.5));
  CHECK_THROWS_AS(SpinLabel(-1), DomainError);
  const SpinLabel j(3);
  CHECK(basis_index(j, {-3}) == 0);
  CHECK(basis_index(j, {3}) == 3);
  CHECK(magnetic_from_index(j, 1).twice_m == -1);
  CHECK_THROWS_AS(basis_index(j, {5}), DomainError);
  CHECK_THROWS_AS(basis_index(j, {2}), DomainError);  // parity
  CHECK_THROWS_AS(magnetic_from_index(j, 4), DomainError);
}

TEST_CASE("cg_coefficient reference values") {
  SUBCASE("stretched state") {
    const auto c = cg_coefficient(SpinLabel(1), {1}, true, CouplingBranch::Plus);
    CHECK(c.sign == 1);
    CHECK(c.num == 1);
    CHECK(c.den == 1);
    CHECK(c.value() == 1.0);
  }
  SUBCASE("j = 1/2, m = -1/2, up, Plus is sqrt(1/2)") {
    const auto c = cg_coefficient(SpinLabel(1), {-1}, true, CouplingBranch::Plus);
    CHECK(c.sign == 1);
    CHECK(c.num == 1);
    CHECK(c.den == 2);
  }
  SUBCASE("j = 1, m = 0, up, Plus is sqrt(2/3)") {
    const auto c = cg_coefficient(SpinLabel(2), {0}, true, CouplingBranch::Plus);
    CHECK(c.sign == 1);
    CHECK(c.num == 2);
    CHECK(c.den == 3);
  }
  SUBCASE("Minus branch carries the Condon-Shortley sign on spin up") {
    CHECK(cg_coefficient(SpinLabel(2), {0}, true, CouplingBranch::Minus).sign == -1);
    CHECK(cg_coefficient(SpinLabel(2), {0}, false, CouplingBranch::Minus).sign == 1);
  }
}

TEST_CASE("cg_coefficient errors") {
  CHECK_THROWS_AS(cg_coefficient(SpinLabel(2), {4}, true, CouplingBranch::Plus), DomainError);
  CHECK_THROWS_AS(cg_coefficient(SpinLabel(0), {0}, true, CouplingBranch::Minus), DomainError);
  // M = j + 1/2 is outside the J = j - 1/2 multiplet
  CHECK_THROWS_AS(cg_coefficient(SpinLabel(2), {2}, true, CouplingBranch::Minus), DomainError);
}

TEST_CASE("squared coefficients match brute-force J^2 projectors") {
  for (int tj = 1; tj <= 10; ++tj) {
    const SpinLabel j(tj);
    for (CouplingBranch c : kBranches) {
      const Eigen::MatrixXd ref = oracle::brute_force_projector(tj, c == CouplingBranch::Plus);
      for (int k = 0; k < j.dim(); ++k) {
        const MagneticIndex m = magnetic_from_index(j, k);
        for (QubitState s : kQubit) {
          const int twice_big_m = m.twice_m + (s == QubitState::Up ? 1 : -1);
          const int twice_big_j = c == CouplingBranch::Plus ? tj + 1 : tj - 1;
          if (std::abs(twice_big_m) > twice_big_j) continue;
          const double sq = cg_coefficient(j, m, s == QubitState::Up, c).squared();
          const int idx = 2 * k + static_cast<int>(s);
          CHECK(sq == doctest::Approx(ref(idx, idx)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("projector elements match brute-force J^2 projectors") {
  for (int tj = 1; tj <= 10; ++tj) {
    for (CouplingBranch c : kBranches) {
      const Eigen::MatrixXd ref = oracle::brute_force_projector(tj, c == CouplingBranch::Plus);
      const Eigen::MatrixXd mine = assemble(SpinLabel(tj), c);
      CHECK((mine - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("projector_element examples") {
  const SpinLabel one(2);
  CHECK(projector_element(one, CouplingBranch::Plus, QubitState::Up, QubitState::Up, {2}, {2}) == 1.0);
  // (j+m+1)/(2j+1) at j = 1, m = 0
  CHECK(projector_element(one, CouplingBranch::Plus, QubitState::Up, QubitState::Up, {0}, {0}) ==
        doctest::Approx(2.0 / 3.0));
  for (int tj = 1; tj <= 6; ++tj) {
    const SpinLabel j(tj);
    for (int k = 0; k < j.dim(); ++k) {
      const MagneticIndex m = magnetic_from_index(j, k);
      CHECK(projector_element(j, CouplingBranch::Plus, QubitState::Up, QubitState::Down, m, m) == 0.0);
    }
  }
  CHECK(projector_element(SpinLabel(1), CouplingBranch::Minus, QubitState::Up, QubitState::Up, {1}, {1}) == 0.0);
  CHECK_THROWS_AS(
      projector_element(one, CouplingBranch::Plus, QubitState::Up, QubitState::Up, {4}, {0}), DomainError);
}

TEST_CASE("projector completeness, algebra and trace dimensions") {
  for (int tj = 1; tj <= 20; ++tj) {
    const SpinLabel j(tj);
    const Eigen::MatrixXd plus = assemble(j, CouplingBranch::Plus);
    const Eigen::MatrixXd minus = assemble(j, CouplingBranch::Minus);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(plus.rows(), plus.cols());
    CHECK((plus + minus - id).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((plus * plus - plus).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((plus - plus.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(plus.trace() == doctest::Approx(tj + 2).epsilon(1e-12));
    CHECK(minus.trace() == doctest::Approx(tj).epsilon(1e-12));
  }
}

TEST_CASE("coherent_populations") {
  SUBCASE("poles") {
    const auto north = coherent_populations(SpinLabel(4), 0.0);
    const auto south = coherent_populations(SpinLabel(4), std::numbers::pi);
    for (int k = 0; k < 5; ++k) {
      CHECK(north[k] == (k == 4 ? 1.0 : 0.0));
      CHECK(south[k] == (k == 0 ? 1.0 : 0.0));
    }
  }
  SUBCASE("j = 1/2 at theta = pi/2") {
    const auto p = coherent_populations(SpinLabel(1), std::numbers::pi / 2);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("agrees with an explicit rotation of |j, j>") {
    for (int tj = 1; tj <= 10; ++tj) {
      for (double theta : {0.1, 0.7, 1.5, 2.9}) {
        const auto mine = coherent_populations(SpinLabel(tj), theta);
        const auto ref = oracle::rotated_populations(tj, theta);
        for (int k = 0; k <= tj; ++k) CHECK(mine[k] == doctest::Approx(ref[k]).scale(1.0).epsilon(1e-12));
      }
    }
  }
  SUBCASE("normalization and reflection symmetry, including the log-space path") {
    for (int tj : {1, 2, 7, 20, 60, 61, 200, 1000}) {
      for (double theta : {0.0, 0.3, 1.0, std::numbers::pi / 2, 2.0, std::numbers::pi}) {
        const auto p = coherent_populations(SpinLabel(tj), theta);
        const auto q = coherent_populations(SpinLabel(tj), std::numbers::pi - theta);
        double sum = 0.0;
        for (int k = 0; k <= tj; ++k) {
          CHECK(p[k] >= 0.0);
          sum += p[k];
          CHECK(std::abs(p[k] - q[tj - k]) <= 1e-13);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }
  SUBCASE("theta outside [0, pi]") {
    CHECK_THROWS_AS(coherent_populations(SpinLabel(2), -0.1), DomainError);
    CHECK_THROWS_AS(coherent_populations(SpinLabel(2), 3.2), DomainError);
  }
}

TEST_CASE("binomial switches to log-gamma above 60 without a jump") {
  CHECK(binomial(60, 30) == 118264581564861424.0);
  CHECK(binomial(62, 31) == doctest::Approx(465428353255261088.0).epsilon(1e-12));
  CHECK(binomial(5, 7) == 0.0);
}
