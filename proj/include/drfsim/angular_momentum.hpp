#pragma once

#include <cstdint>
#include <vector>

namespace drfsim {

/// Spin quantum number j stored as the integer 2j so half-integers are exact.
class SpinLabel {
 public:
  explicit SpinLabel(int twice_j);

  int twice_j() const noexcept { return twice_j_; }
  double j() const noexcept { return 0.5 * twice_j_; }
  /// Dimension 2j+1 of the spin-j space.
  int dim() const noexcept { return twice_j_ + 1; }

  friend bool operator==(SpinLabel, SpinLabel) = default;

 private:
  int twice_j_;
};

/// Magnetic quantum number m stored as 2m.
struct MagneticIndex {
  int twice_m;

  friend bool operator==(MagneticIndex, MagneticIndex) = default;
};

/// Total-spin branch J = j + 1/2 (Plus) or J = j - 1/2 (Minus) of j (x) 1/2.
enum class CouplingBranch { Plus, Minus };

/// Spin-1/2 basis: |0> is aligned with +z (spin up), |1> anti-aligned.
enum class QubitState : int { Up = 0, Down = 1 };

/// Exact value sign * sqrt(num / den) with the fraction in lowest terms.
struct SignedSqrtRational {
  int sign = 0;  // -1, 0 or +1
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const;
  double squared() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Row index (0 .. 2j) of |j, m> in the m = -j .. j ordering used everywhere.
int basis_index(SpinLabel j, MagneticIndex m);
MagneticIndex magnetic_from_index(SpinLabel j, int index);

/// Clebsch-Gordan coefficient <J, m + s | j, m; 1/2, s> with J picked by
/// `branch` and s = +1/2 when `s_up`. Condon-Shortley phases.
SignedSqrtRational cg_coefficient(SpinLabel j, MagneticIndex m, bool s_up, CouplingBranch branch);

/// Matrix element <j, m_row| <a| Pi_c |b> |j, m_col> of the total-spin
/// projector Pi_c on the coupled space, i.e. an entry of E_ab^c.
double projector_element(SpinLabel j, CouplingBranch branch, QubitState a, QubitState b,
                         MagneticIndex m_row, MagneticIndex m_col);

/// Populations over m = -j .. j of the coherent state obtained by rotating
/// |j, j> through polar angle theta.
std::vector<double> coherent_populations(SpinLabel j, double theta);

/// Binomial coefficient C(n, k) as a double. Exact integer arithmetic up to
/// n = 60, log-gamma beyond.
double binomial(int n, int k);

}  // namespace drfsim
