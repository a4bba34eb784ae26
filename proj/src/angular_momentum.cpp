#include "drfsim/angular_momentum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "drfsim/errors.hpp"

namespace drfsim {

namespace {

constexpr const char* kModule = "angular_momentum";

SignedSqrtRational make_ratio(int sign, std::int64_t num, std::int64_t den) {
  if (num == 0) return {0, 0, 1};
  const std::int64_t g = std::gcd(num, den);
  return {sign, num / g, den / g};
}

void check_m(SpinLabel j, MagneticIndex m) {
  const int tj = j.twice_j();
  if (std::abs(m.twice_m) > tj || ((tj - m.twice_m) % 2) != 0) {
    throw DomainError(kModule, "magnetic index 2m=" + std::to_string(m.twice_m) +
                                   " invalid for 2j=" + std::to_string(tj));
  }
}

int twice_s(QubitState s) { return s == QubitState::Up ? 1 : -1; }

}  // namespace

SpinLabel::SpinLabel(int twice_j) : twice_j_(twice_j) {
  if (twice_j < 0) throw DomainError(kModule, "2j must be non-negative");
}

double SignedSqrtRational::value() const { return sign * std::sqrt(squared()); }

int basis_index(SpinLabel j, MagneticIndex m) {
  check_m(j, m);
  return (m.twice_m + j.twice_j()) / 2;
}

MagneticIndex magnetic_from_index(SpinLabel j, int index) {
  if (index < 0 || index >= j.dim()) {
    throw DomainError(kModule, "basis index " + std::to_string(index) + " out of range");
  }
  return {2 * index - j.twice_j()};
}

SignedSqrtRational cg_coefficient(SpinLabel j, MagneticIndex m, bool s_up, CouplingBranch branch) {
  check_m(j, m);
  const int tj = j.twice_j();
  if (branch == CouplingBranch::Minus && tj == 0) {
    throw DomainError(kModule, "no J = j - 1/2 multiplet for j = 0");
  }
  const int twice_big_j = branch == CouplingBranch::Plus ? tj + 1 : tj - 1;
  const int twice_big_m = m.twice_m + (s_up ? 1 : -1);
  if (std::abs(twice_big_m) > twice_big_j) {
    throw DomainError(kModule, "coupled 2M=" + std::to_string(twice_big_m) +
                                   " outside the 2J=" + std::to_string(twice_big_j) + " multiplet");
  }

  // j (x) 1/2 coupling table; every ratio is (integer)/(2(2j+1)) in doubled units.
  const std::int64_t den = 2 * static_cast<std::int64_t>(tj + 1);
  const std::int64_t tm = m.twice_m;
  if (branch == CouplingBranch::Plus) {
    // (j + m + 1)/(2j + 1) for up, (j - m + 1)/(2j + 1) for down
    const std::int64_t num = s_up ? tj + tm + 2 : tj - tm + 2;
    return make_ratio(+1, num, den);
  }
  // -(j - m)/(2j + 1) for up, +(j + m)/(2j + 1) for down
  if (s_up) return make_ratio(-1, tj - tm, den);
  return make_ratio(+1, tj + tm, den);
}

double projector_element(SpinLabel j, CouplingBranch branch, QubitState a, QubitState b,
                         MagneticIndex m_row, MagneticIndex m_col) {
  check_m(j, m_row);
  check_m(j, m_col);
  const int twice_big_m = m_row.twice_m + twice_s(a);
  if (twice_big_m != m_col.twice_m + twice_s(b)) return 0.0;
  const int twice_big_j = branch == CouplingBranch::Plus ? j.twice_j() + 1 : j.twice_j() - 1;
  if (twice_big_j < 0) throw DomainError(kModule, "no J = j - 1/2 multiplet for j = 0");
  if (std::abs(twice_big_m) > twice_big_j) return 0.0;

  const SignedSqrtRational left = cg_coefficient(j, m_row, a == QubitState::Up, branch);
  const SignedSqrtRational right = cg_coefficient(j, m_col, b == QubitState::Up, branch);
  const int sign = left.sign * right.sign;
  if (sign == 0) return 0.0;
  if (m_row == m_col) return sign * left.squared();
  return sign * std::sqrt(left.squared() * right.squared());
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 60) {
    std::uint64_t result = 1;
    // result * (n - k + i) / i stays integral at every step
    for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) / i;
    return static_cast<double>(result);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

std::vector<double> coherent_populations(SpinLabel j, double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError(kModule, "theta must lie in [0, pi]");
  }
  const int tj = j.twice_j();
  // cos^2(theta/2) and sin^2(theta/2) through cos(theta): exact zeros at the poles.
  const double c = std::cos(theta);
  const double cos2 = 0.5 * (1.0 + c);
  const double sin2 = 0.5 * (1.0 - c);

  std::vector<double> pops(static_cast<std::size_t>(tj + 1), 0.0);
  const bool large = tj > 60;
  for (int k = 0; k <= tj; ++k) {  // k = j + m
    const int down = tj - k;
    if ((k > 0 && cos2 == 0.0) || (down > 0 && sin2 == 0.0)) continue;
    if (!large) {
      pops[k] = binomial(tj, k) * std::pow(cos2, k) * std::pow(sin2, down);
    } else {
      double log_term = std::lgamma(tj + 1.0) - std::lgamma(k + 1.0) - std::lgamma(down + 1.0);
      if (k > 0) log_term += k * std::log(cos2);
      if (down > 0) log_term += down * std::log(sin2);
      pops[k] = std::exp(log_term);
    }
  }
  return pops;
}

}  // namespace drfsim
