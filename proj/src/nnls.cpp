#include "drfsim/nnls.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <vector>

#include "drfsim/errors.hpp"

namespace drfsim {

namespace {

constexpr const char* kModule = "coherent_analysis";

Eigen::VectorXd solve_free(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           const std::vector<Eigen::Index>& free) {
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(free[k]);
  return sub.colPivHouseholderQr().solve(b);
}

}  // namespace

double kkt_violation(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
  const Eigen::VectorXd w = a.transpose() * (b - a * x);
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) worst = std::max(worst, w[i]);
  }
  return worst;
}

NnlsSolution nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double kkt_tol) {
  if (a.rows() != b.size()) throw DomainError(kModule, "NNLS dimensions disagree");
  const Eigen::Index n = a.cols();
  const int max_iterations = 10 * static_cast<int>(std::max<Eigen::Index>(n, 1));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> is_free(static_cast<std::size_t>(n), false);
  // Variables whose entry failed to produce a positive coefficient are
  // skipped until the free set changes.
  std::vector<bool> rejected(static_cast<std::size_t>(n), false);

  NnlsSolution best{x, (a * x - b).norm(), 0};
  int iteration = 0;
  while (true) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index enter = -1;
    double w_max = kkt_tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (is_free[i] || rejected[i]) continue;
      if (w[i] > w_max) {  // strict: ties keep the lowest index
        w_max = w[i];
        enter = i;
      }
    }
    if (enter < 0) break;

    if (++iteration > max_iterations) {
      std::ostringstream msg;
      msg << "NNLS exceeded " << max_iterations << " iterations; best residual " << best.residual
          << ", weights [" << best.x.transpose() << "]";
      throw ConvergenceError(kModule, msg.str());
    }

    is_free[enter] = true;
    bool accepted = false;
    while (true) {
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < n; ++i)
        if (is_free[i]) free.push_back(i);
      if (free.empty()) break;
      const Eigen::VectorXd z = solve_free(a, b, free);

      if (!accepted) {
        // Entering coefficient must come out positive, else reject it.
        const auto pos = std::find(free.begin(), free.end(), enter) - free.begin();
        if (!(z[pos] > 0.0)) {
          is_free[enter] = false;
          rejected[enter] = true;
          break;
        }
        accepted = true;
      }

      if ((z.array() > 0.0).all()) {
        for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = z[static_cast<Eigen::Index>(k)];
        break;
      }
      // Step from x toward z until the first free variable hits zero.
      double step = 1.0;
      Eigen::Index blocking = -1;
      for (std::size_t k = 0; k < free.size(); ++k) {
        const double zk = z[static_cast<Eigen::Index>(k)];
        if (zk > 0.0) continue;
        const double xk = x[free[k]];
        const double ratio = xk / (xk - zk);
        if (blocking < 0 || ratio < step) {
          step = ratio;
          blocking = free[k];
        }
      }
      for (std::size_t k = 0; k < free.size(); ++k) {
        const Eigen::Index i = free[k];
        x[i] += step * (z[static_cast<Eigen::Index>(k)] - x[i]);
        if (i == blocking || x[i] <= 0.0) {
          x[i] = 0.0;
          is_free[i] = false;
        }
      }
    }

    if (accepted) std::fill(rejected.begin(), rejected.end(), false);
    const double residual = (a * x - b).norm();
    if (residual <= best.residual) best = {x, residual, iteration};
  }

  return {x, (a * x - b).norm(), iteration};
}

}  // namespace drfsim
