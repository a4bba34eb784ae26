#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "drfsim/angular_momentum.hpp"

namespace drfsim {

enum class Representation { Diagonal, Dense };

namespace detail {
struct Unchecked {};
}  // namespace detail

/// Density operator of the spin-j frame in the |j, m> basis, m = -j .. j.
/// Diagonal states keep only their populations; dense states keep the full
/// Hermitian matrix. Public factories validate the density-matrix invariants.
class FrameState {
 public:
  /// |j, j><j, j|, the frame aligned with +z.
  static FrameState stretched(SpinLabel j);
  static FrameState maximally_mixed(SpinLabel j);
  static FrameState from_populations(SpinLabel j, Eigen::VectorXd populations);
  static FrameState from_matrix(SpinLabel j, Eigen::MatrixXcd rho);

  FrameState(detail::Unchecked, SpinLabel j, Eigen::VectorXd populations);
  FrameState(detail::Unchecked, SpinLabel j, Eigen::MatrixXcd rho);

  SpinLabel spin() const noexcept { return j_; }
  Representation representation() const noexcept { return repr_; }
  bool is_diagonal() const noexcept { return repr_ == Representation::Diagonal; }

  /// Real diagonal of the matrix.
  Eigen::VectorXd populations() const;
  /// Full matrix; builds one from the populations for diagonal states.
  Eigen::MatrixXcd matrix() const;
  double trace() const;
  /// Same state with the dense representation.
  FrameState to_dense() const;

  const Eigen::VectorXd& diagonal_storage() const noexcept { return populations_; }
  const Eigen::MatrixXcd& dense_storage() const noexcept { return rho_; }

 private:
  SpinLabel j_;
  Representation repr_;
  Eigen::VectorXd populations_;  // used when Diagonal
  Eigen::MatrixXcd rho_;         // used when Dense
};

/// Deviation of a state from the density-matrix invariants.
struct StateDiagnostics {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool valid() const;
};
StateDiagnostics diagnose(const FrameState& state);

/// Real operator on the spin-j space with a single nonzero diagonal:
/// entry (col + offset, col) = values[col], zero where the row falls outside.
struct BandOperator {
  int offset = 0;
  Eigen::VectorXd values;

  Eigen::MatrixXd dense() const;
};

/// The eight Kraus operators E_ab^c = <a| Pi_c |b> (c = +/-, a, b = 0/1) of
/// the measurement map.
class KrausSet {
 public:
  KrausSet(SpinLabel j, std::array<BandOperator, 8> ops);

  SpinLabel spin() const noexcept { return j_; }
  const BandOperator& op(CouplingBranch c, QubitState a, QubitState b) const;
  const std::array<BandOperator, 8>& ops() const noexcept { return ops_; }

  /// (1/2) sum E^T E, the identity for a trace-preserving map.
  Eigen::MatrixXd completeness() const;

  static std::size_t slot(CouplingBranch c, QubitState a, QubitState b);

 private:
  SpinLabel j_;
  std::array<BandOperator, 8> ops_;
};

KrausSet build_kraus(SpinLabel j);

/// One use of the frame with the record discarded:
/// rho -> (1/2) sum_{c,a,b} E_ab^c rho E_ab^c^T.
FrameState apply_map(const FrameState& state, const KrausSet& kraus);

/// Probability of outcome c and the normalized post-measurement frame state
/// (1/2) sum_{a,b} E_ab^c rho E_ab^c^T / p_c. The state is left unnormalized
/// (all zeros) when p_c vanishes.
struct ConditionalUpdate {
  double probability;
  FrameState state;
};
ConditionalUpdate condition_on_outcome(const FrameState& state, const KrausSet& kraus,
                                       CouplingBranch outcome);

/// F_Q = (1/2) Tr(rho (E_00^+ + E_11^-)).
double quantum_fidelity(const FrameState& state, const KrausSet& kraus);

/// 1/2 + j/(2j+1) (1 - 2/(2j+1)^2)^n, exact for the stretched initial state.
double closed_form_fidelity(SpinLabel j, std::int64_t n);

struct FidelityEntry {
  std::int64_t n;
  double map;
  double closed;
};

struct FidelitySeries {
  SpinLabel j;
  std::vector<FidelityEntry> entries;

  double max_deviation() const;
};

/// Iterates the map from |j, j> and records both fidelity routes for
/// n = 0 .. n_max.
FidelitySeries evolve(SpinLabel j, std::int64_t n_max);

struct MeasurementRecord {
  std::vector<CouplingBranch> outcomes;
  std::vector<double> probabilities;
};

struct Trajectory {
  MeasurementRecord record;
  FrameState final_state;
  /// Conditional fidelity after n = 0 .. n_max measurements.
  std::vector<double> fidelities;
};

/// Keeps the measurement record: draws each outcome with its Born probability
/// and conditions the frame on it. Bit-reproducible for a given seed.
Trajectory sample_trajectory(SpinLabel j, std::int64_t n_max, std::uint64_t seed);

struct TrajectoryStatistics {
  std::int64_t samples = 0;
  std::vector<double> mean;       // per step n
  std::vector<double> std_error;  // standard error of the mean per step
};

/// Sample mean of the conditional fidelity over `samples` trajectories.
/// Trajectory i uses stream_seed(seed, i), so the result does not depend on
/// the thread count.
TrajectoryStatistics trajectory_fidelity_statistics(SpinLabel j, std::int64_t n_max,
                                                    std::uint64_t seed, std::int64_t samples);

}  // namespace drfsim
