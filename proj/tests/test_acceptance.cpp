// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "drfsim/classical_walk.hpp"
#include "drfsim/coherent_analysis.hpp"
#include "drfsim/harness.hpp"
#include "drfsim/legendre.hpp"
#include "drfsim/quantum_drf.hpp"
#include "drfsim/selftest.hpp"

using namespace drfsim;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

const std::vector<int> kSpins = {1, 2, 3, 10, 20, 50};
constexpr std::int64_t kHorizon = 1000;

Outcome exact_decay_law() {
  double worst = 0.0;
  for (int tj : kSpins) worst = std::max(worst, evolve(SpinLabel(tj), kHorizon).max_deviation());
  return {worst <= 1e-10, fmt("max |F_map - F_closed| = %.3e (tol 1e-10)", worst)};
}

Outcome classical_quantum_fit() {
  double worst = 0.0;
  for (int tj : kSpins) {
    const SpinLabel j(tj);
    const FidelitySeries q = evolve(j, kHorizon);
    const auto c = classical_fidelity_series(j, fitted_step(j), kHorizon);
    for (std::size_t n = 0; n < q.entries.size(); ++n) worst = std::max(worst, std::abs(c[n].pipeline - q.entries[n].map));
  }
  return {worst <= 1e-10, fmt("max |F_C - F_Q| = %.3e (tol 1e-10)", worst)};
}

Outcome initial_coefficients() {
  double worst0 = 0.0, worst1 = 0.0;
  for (int tj = 1; tj <= 100; ++tj) {
    const SpinLabel j(tj);
    const LegendreSpectrum s = initial_spectrum(j, default_l_max(j));
    worst0 = std::max(worst0, std::abs(s[0] - 1.0));
    worst1 = std::max(worst1, std::abs(s[1] - 3.0 * tj / (tj + 1.0)));
  }
  return {worst0 <= 1e-10 && worst1 <= 1e-10, fmt("max |c0 - 1| = %.3e, max |c1 - 6j/(2j+1)| = %.3e (tol 1e-10)", worst0, worst1)};
}

Outcome eigenvalue_relation() {
  constexpr std::size_t kGrid = 32769;
  double worst = 0.0;
  for (int l = 0; l <= 8; ++l) {
    const auto p = TabulatedDistribution::tabulate([l](double th) { return legendre_p(l, std::cos(th)); }, kGrid);
    for (double alpha : {0.1, 0.5, 1.0}) {
      const auto r = ring_average(p, alpha);
      const double eigen = legendre_p(l, std::cos(alpha));
      for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(r.values[i] - eigen * p.values[i]));
    }
  }
  return {worst <= 1e-7, fmt("max ring-average error = %.3e on %.0f grid points (tol 1e-7)", worst, double(kGrid))};
}

Outcome record_averaging() {
  double worst = 0.0;
  for (int tj = 1; tj <= 6; ++tj) {
    const SpinLabel j(tj);
    const KrausSet k = build_kraus(j);
    for (int n = 0; n <= 6; ++n) {
      Eigen::MatrixXcd average = Eigen::MatrixXcd::Zero(j.dim(), j.dim());
      std::function<void(const FrameState&, double, int)> walk = [&](const FrameState& rho, double w, int depth) {
        if (depth == n) {
          average += w * rho.matrix();
          return;
        }
        for (CouplingBranch c : {CouplingBranch::Plus, CouplingBranch::Minus}) {
          const ConditionalUpdate u = condition_on_outcome(rho, k, c);
          if (u.probability > 0.0) walk(u.state, w * u.probability, depth + 1);
        }
      };
      walk(FrameState::stretched(j).to_dense(), 1.0, 0);
      FrameState mapped = FrameState::stretched(j);
      for (int step = 0; step < n; ++step) mapped = apply_map(mapped, k);
      worst = std::max(worst, (average - mapped.matrix()).cwiseAbs().maxCoeff());
    }
  }
  const SpinLabel j(4);
  constexpr std::int64_t kSteps = 20;
  const TrajectoryStatistics stats = trajectory_fidelity_statistics(j, kSteps, 20070131, 100000);
  const double z = (stats.mean[kSteps] - closed_form_fidelity(j, kSteps)) / stats.std_error[kSteps];
  return {worst <= 1e-12 && std::abs(z) <= 3.0,
          fmt("enumeration max error = %.3e (tol 1e-12); 1e5 trajectories at j=2, n=20: z = %.3f (tol 3)", worst, z)};
}

Outcome quadratic_longevity() {
  bool pass = true;
  std::string detail = "half-life doubling ratios:";
  for (int tj : {20, 40, 80}) {
    const double ratio = half_life(SpinLabel(tj)) / half_life(SpinLabel(tj / 2));
    pass = pass && ratio >= 3.8 && ratio <= 4.2;
    detail += fmt(" 2j %.0f->%.0f: %.4f", tj / 2.0, double(tj), ratio);
  }
  return {pass, detail + " (band [3.8, 4.2])"};
}

Outcome non_convexity() {
  bool pass = true;
  double worst_initial = 0.0;
  std::string detail;
  for (int tj : {2, 4, 8}) {
    const SpinLabel j(tj);
    const int nodes = default_node_count(j);
    worst_initial = std::max(worst_initial, convexity_test(j, 0, nodes).residual);
    const RefinementStudy s = convexity_refinement(j, 1, nodes);
    pass = pass && s.not_decomposable();
    detail += fmt(" 2j=%.0f: %.3e (change %.1f%%);", double(tj), s.coarse.residual, 100.0 * s.relative_change());
  }
  pass = pass && worst_initial <= 1e-10;
  return {pass, fmt("n=0 max residual = %.3e (tol 1e-10); n=1 residuals", worst_initial) + detail +
                    " (need > 1e-6, change < 10%)"};
}

Outcome structural_invariants() {
  const SelftestReport r = run_selftest(20070131, 20);
  std::string detail = fmt("selftest %.0f passed, %.0f failed", double(r.passed), double(r.failed));
  for (const auto& f : r.failures) detail += "; " + f;
  return {r.ok(), detail};
}

Outcome gaussian_approximation() {
  double worst = 0.0;
  for (int tj : {40, 60, 80, 100, 200, 400}) worst = std::max(worst, std::abs(angular_variance(SpinLabel(tj)) * tj - 1.0));
  const double gap = gaussian_approximation_gap(SpinLabel(200));
  return {worst <= 0.05 && gap < 0.02,
          fmt("max |2j var - 1| = %.4f for 2j >= 40 (tol 0.05); gap at 2j=200 = %.4f (tol 0.02)", worst, gap)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"exact decay law", exact_decay_law},
      {"classical-quantum fit", classical_quantum_fit},
      {"initial coefficients", initial_coefficients},
      {"eigenvalue relation", eigenvalue_relation},
      {"record averaging", record_averaging},
      {"quadratic longevity", quadratic_longevity},
      {"non-convexity", non_convexity},
      {"structural invariants", structural_invariants},
      {"gaussian approximation", gaussian_approximation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu passed, %d failed\n", criteria.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}
