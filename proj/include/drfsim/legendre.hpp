#pragma once

#include <span>
#include <vector>

namespace drfsim {

/// P_l(x) by the three-term recurrence.
double legendre_p(int l, double x);

/// P_0(x) .. P_lmax(x) written into out (size lmax + 1).
void legendre_all(int lmax, double x, std::span<double> out);

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree
/// up to 2n - 1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n);

  int order() const { return static_cast<int>(nodes.size()); }

  /// Integral of f over [a, b].
  template <class F>
  double integrate(F&& f, double a = -1.0, double b = 1.0) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

}  // namespace drfsim
