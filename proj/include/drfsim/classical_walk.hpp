#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "drfsim/angular_momentum.hpp"

namespace drfsim {

/// Azimuthally symmetric distribution on the sphere,
/// p(theta) = sum_l c_l P_l(cos theta), normalized against sin(theta) dtheta / 2
/// so that c_0 = 1.
class LegendreSpectrum {
 public:
  explicit LegendreSpectrum(std::vector<double> coeffs);

  int l_max() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](int l) const { return coeffs_[static_cast<std::size_t>(l)]; }

  /// Reconstructed density at x = cos(theta).
  double density_at(double x) const;
  double density(double theta) const;

  /// Smallest reconstructed density on a uniform theta grid over [0, pi].
  double min_density(int grid_points) const;

 private:
  std::vector<double> coeffs_;
};

/// Fixed-step walk: every step moves the frame by `alpha` in a uniformly
/// random direction.
struct WalkParameters {
  double alpha;
  std::int64_t steps;

  WalkParameters(double alpha, std::int64_t steps);
};

/// Truncation used when none is given: max(4j + 16, 64).
int default_l_max(SpinLabel j);

/// (4j + 1) cos(theta/2)^{8j}, the classical counterpart of |j, j>.
double initial_density(SpinLabel j, double theta);

/// Legendre coefficients of initial_density by Gauss-Legendre quadrature.
LegendreSpectrum initial_spectrum(SpinLabel j, int l_max);

/// c_l -> c_l P_l(cos alpha)^n.
LegendreSpectrum walk_evolve(const LegendreSpectrum& spectrum, const WalkParameters& params);

/// (c_0 + c_1/3) / 2.
double classical_fidelity(const LegendreSpectrum& spectrum);

/// Same quantity by integrating cos^2(theta/2) against the reconstructed
/// density; agrees with classical_fidelity when the spectrum is consistent.
double classical_fidelity_quadrature(const LegendreSpectrum& spectrum);

/// Step angle alpha with cos(alpha) = 1 - 2/(2j+1)^2, evaluated as
/// 2 asin(1/(2j+1)) to avoid cancellation at large j.
double fitted_step(SpinLabel j);

/// Values on the uniform grid theta_i = i pi / (N - 1), i = 0 .. N-1.
struct TabulatedDistribution {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double spacing() const;
  double theta(std::size_t i) const;
  /// Linear interpolation in theta.
  double interpolate(double theta) const;

  template <class F>
  static TabulatedDistribution tabulate(F&& f, std::size_t points) {
    TabulatedDistribution t;
    t.values.resize(points);
    for (std::size_t i = 0; i < points; ++i) t.values[i] = f(t.theta_for(i, points));
    return t;
  }

 private:
  static double theta_for(std::size_t i, std::size_t points);
};

inline constexpr std::size_t kMinRingGridPoints = 2048;
inline constexpr int kRingAzimuthNodes = 1024;

/// Direct grid-space averaging operator: for each grid angle, the mean of p
/// over the ring of points at angular distance alpha (trapezoid rule in the
/// ring azimuth, linear interpolation in theta).
TabulatedDistribution ring_average(const TabulatedDistribution& p, double alpha);

struct ClassicalFidelityRow {
  std::int64_t n;
  double pipeline;  // through initial_spectrum + walk_evolve + classical_fidelity
  double closed;    // 1/2 + j/(2j+1) cos^n(alpha)
};

/// F_C(n) for n = 0 .. n_max; throws AccuracyError if the two routes differ
/// by more than the oracle tolerance.
std::vector<ClassicalFidelityRow> classical_fidelity_series(SpinLabel j, double alpha,
                                                            std::int64_t n_max, int l_max);
std::vector<ClassicalFidelityRow> classical_fidelity_series(SpinLabel j, double alpha,
                                                            std::int64_t n_max);

double classical_fidelity_closed(SpinLabel j, double alpha, std::int64_t n);

/// Variance of the tilt angle of the initial distribution along one
/// transverse axis, <theta^2>/2. Tends to 1/(2j) for large j.
double angular_variance(SpinLabel j);

/// max over theta in [0, j^{-1/4}] of |cos(theta/2)^{8j} - exp(-j theta^2)|.
double gaussian_approximation_gap(SpinLabel j, int samples = 4097);

}  // namespace drfsim
