#include "drfsim/classical_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "drfsim/errors.hpp"
#include "drfsim/legendre.hpp"
#include "drfsim/parallel.hpp"
#include "drfsim/tolerances.hpp"

namespace drfsim {

namespace {

constexpr const char* kModule = "classical_walk";
constexpr double kPi = std::numbers::pi;

}  // namespace

// ---------------------------------------------------------------------------
// LegendreSpectrum

LegendreSpectrum::LegendreSpectrum(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError(kModule, "spectrum needs at least c_0");
  if (std::abs(coeffs_[0] - 1.0) > tol::kQuadratureNormalization) {
    throw DomainError(kModule, "spectrum is not normalized: c_0 = " + std::to_string(coeffs_[0]));
  }
}

double LegendreSpectrum::density_at(double x) const {
  // Clenshaw would also do; the forward recurrence is stable for |x| <= 1.
  double p_prev = 1.0;
  double p = x;
  double sum = coeffs_[0];
  if (coeffs_.size() > 1) sum += coeffs_[1] * x;
  for (std::size_t l = 1; l + 1 < coeffs_.size(); ++l) {
    const double k = static_cast<double>(l);
    const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
    sum += coeffs_[l + 1] * p;
  }
  return sum;
}

double LegendreSpectrum::density(double theta) const { return density_at(std::cos(theta)); }

double LegendreSpectrum::min_density(int grid_points) const {
  if (grid_points < 2) throw DomainError(kModule, "grid needs at least two points");
  double lowest = density(0.0);
  for (int i = 1; i < grid_points; ++i) {
    lowest = std::min(lowest, density(kPi * i / (grid_points - 1)));
  }
  return lowest;
}

WalkParameters::WalkParameters(double alpha_, std::int64_t steps_) : alpha(alpha_), steps(steps_) {
  if (!(alpha >= 0.0 && alpha <= kPi)) throw DomainError(kModule, "step angle must lie in [0, pi]");
  if (steps < 0) throw DomainError(kModule, "step count must be non-negative");
}

// ---------------------------------------------------------------------------
// Initial distribution and walk

int default_l_max(SpinLabel j) { return std::max(2 * j.twice_j() + 16, 64); }

double initial_density(SpinLabel j, double theta) {
  const double half_cos = std::cos(0.5 * theta);
  return (2.0 * j.twice_j() + 1.0) * std::pow(half_cos, 4.0 * j.twice_j());
}

LegendreSpectrum initial_spectrum(SpinLabel j, int l_max) {
  if (l_max < 1) throw DomainError(kModule, "l_max must be at least 1");
  const int tj = j.twice_j();
  // p(x) = (4j+1) ((1+x)/2)^{4j} is a polynomial of degree 4j, so this order
  // integrates every p(x) P_l(x) exactly.
  const GaussLegendre rule(2 * tj + l_max + 8);
  std::vector<double> coeffs(static_cast<std::size_t>(l_max) + 1, 0.0);
  std::vector<double> p_l(static_cast<std::size_t>(l_max) + 1);
  const double prefactor = 2.0 * tj + 1.0;
  for (int i = 0; i < rule.order(); ++i) {
    const double x = rule.nodes[i];
    const double density = prefactor * std::pow(0.5 * (1.0 + x), 2.0 * tj);
    legendre_all(l_max, x, p_l);
    const double w = 0.5 * rule.weights[i] * density;  // measure dx/2
    for (int l = 0; l <= l_max; ++l) coeffs[l] += w * p_l[l];
  }
  for (int l = 0; l <= l_max; ++l) coeffs[l] *= 2.0 * l + 1.0;

  if (std::abs(coeffs[0] - 1.0) > tol::kQuadratureNormalization) {
    throw AccuracyError(kModule, "quadrature lost the normalization: c_0 = " + std::to_string(coeffs[0]));
  }
  return LegendreSpectrum(std::move(coeffs));
}

LegendreSpectrum walk_evolve(const LegendreSpectrum& spectrum, const WalkParameters& params) {
  const double x = std::cos(params.alpha);
  const double n = static_cast<double>(params.steps);
  std::vector<double> coeffs(spectrum.coeffs().begin(), spectrum.coeffs().end());
  std::vector<double> eigen(coeffs.size());
  legendre_all(spectrum.l_max(), x, eigen);
  for (std::size_t l = 1; l < coeffs.size(); ++l) coeffs[l] *= std::pow(eigen[l], n);
  return LegendreSpectrum(std::move(coeffs));
}

double classical_fidelity(const LegendreSpectrum& spectrum) {
  const double c1 = spectrum.l_max() >= 1 ? spectrum[1] : 0.0;
  return 0.5 * (spectrum[0] + c1 / 3.0);
}

double classical_fidelity_quadrature(const LegendreSpectrum& spectrum) {
  // integrand p(x) (1 + x)/2 has degree l_max + 1
  const GaussLegendre rule(spectrum.l_max() / 2 + 2);
  return rule.integrate([&](double x) { return 0.5 * spectrum.density_at(x) * 0.5 * (1.0 + x); });
}

double fitted_step(SpinLabel j) {
  if (j.twice_j() < 1) throw DomainError(kModule, "fitted step needs j >= 1/2");
  return 2.0 * std::asin(1.0 / j.dim());
}

// ---------------------------------------------------------------------------
// Grid-space oracle

double TabulatedDistribution::theta_for(std::size_t i, std::size_t points) {
  if (i + 1 == points) return kPi;
  return kPi * static_cast<double>(i) / static_cast<double>(points - 1);
}

double TabulatedDistribution::spacing() const { return kPi / static_cast<double>(values.size() - 1); }

double TabulatedDistribution::theta(std::size_t i) const { return theta_for(i, values.size()); }

double TabulatedDistribution::interpolate(double theta) const {
  const double h = spacing();
  const double pos = std::clamp(theta, 0.0, kPi) / h;
  auto i = static_cast<std::size_t>(pos);
  if (i >= values.size() - 1) return values.back();
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

TabulatedDistribution ring_average(const TabulatedDistribution& p, double alpha) {
  if (p.size() < kMinRingGridPoints) {
    throw AccuracyError(kModule, "grid of " + std::to_string(p.size()) + " points is too coarse (need " +
                                     std::to_string(kMinRingGridPoints) + ")");
  }
  if (!(alpha > 0.0 && alpha < kPi)) throw DomainError(kModule, "ring step must lie in (0, pi)");

  // psi_k = 2 pi k / N; cos is symmetric about pi, so fold the sum onto
  // k = 0 .. N/2 with doubled interior weights.
  constexpr int half = kRingAzimuthNodes / 2;
  std::vector<double> cos_psi(half + 1);
  std::vector<double> weight(half + 1, 2.0 / kRingAzimuthNodes);
  for (int k = 0; k <= half; ++k) cos_psi[k] = std::cos(2.0 * kPi * k / kRingAzimuthNodes);
  weight[0] = weight[half] = 1.0 / kRingAzimuthNodes;

  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  TabulatedDistribution out;
  out.values.resize(p.size());
  constexpr std::size_t kBlock = 512;
  const std::size_t blocks = (p.size() + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t block) {
    const std::size_t end = std::min(p.size(), (block + 1) * kBlock);
    for (std::size_t i = block * kBlock; i < end; ++i) {
      const double th = p.theta(i);
      const double ct = std::cos(th);
      const double st = std::sin(th);
      double sum = 0.0;
      for (int k = 0; k <= half; ++k) {
        // spherical law of cosines for the ring point's polar angle
        const double c = std::clamp(ct * ca + st * sa * cos_psi[k], -1.0, 1.0);
        sum += weight[k] * p.interpolate(std::acos(c));
      }
      out.values[i] = sum;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Fidelity series and diagnostics

double classical_fidelity_closed(SpinLabel j, double alpha, std::int64_t n) {
  const double amplitude = 0.5 * j.twice_j() / j.dim();
  return 0.5 + amplitude * std::pow(std::cos(alpha), static_cast<double>(n));
}

std::vector<ClassicalFidelityRow> classical_fidelity_series(SpinLabel j, double alpha,
                                                            std::int64_t n_max, int l_max) {
  if (n_max < 0) throw DomainError(kModule, "n_max must be non-negative");
  const LegendreSpectrum initial = initial_spectrum(j, l_max);
  std::vector<ClassicalFidelityRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const double pipeline = classical_fidelity(walk_evolve(initial, WalkParameters(alpha, n)));
    const double closed = classical_fidelity_closed(j, alpha, n);
    if (std::abs(pipeline - closed) > tol::kOracle) {
      throw AccuracyError(kModule, "Legendre pipeline and closed form disagree at n=" + std::to_string(n));
    }
    rows.push_back({n, pipeline, closed});
  }
  return rows;
}

std::vector<ClassicalFidelityRow> classical_fidelity_series(SpinLabel j, double alpha,
                                                            std::int64_t n_max) {
  return classical_fidelity_series(j, alpha, n_max, default_l_max(j));
}

double angular_variance(SpinLabel j) {
  if (j.twice_j() < 1) throw DomainError(kModule, "angular variance needs j >= 1/2");
  // Quadrature in theta; the integrand is smooth on [0, pi].
  const GaussLegendre rule(2 * j.twice_j() + 256);
  double norm = 0.0;
  double second = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    const double th = 0.5 * kPi * (1.0 + rule.nodes[i]);
    const double w = 0.5 * kPi * rule.weights[i] * 0.5 * std::sin(th) * initial_density(j, th);
    norm += w;
    second += w * th * th;
  }
  return 0.5 * second / norm;
}

double gaussian_approximation_gap(SpinLabel j, int samples) {
  if (j.twice_j() < 1) throw DomainError(kModule, "gap needs j >= 1/2");
  if (samples < 2) throw DomainError(kModule, "need at least two samples");
  const double jj = j.j();
  const double upper = std::pow(jj, -0.25);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double th = upper * i / (samples - 1);
    const double exact = std::pow(std::cos(0.5 * th), 8.0 * jj);
    worst = std::max(worst, std::abs(exact - std::exp(-jj * th * th)));
  }
  return worst;
}

}  // namespace drfsim
