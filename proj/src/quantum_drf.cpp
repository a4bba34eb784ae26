#include "drfsim/quantum_drf.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "drfsim/errors.hpp"
#include "drfsim/parallel.hpp"
#include "drfsim/random.hpp"
#include "drfsim/tolerances.hpp"

namespace drfsim {

namespace {

constexpr const char* kModule = "quantum_drf";

constexpr std::array<CouplingBranch, 2> kBranches{CouplingBranch::Plus, CouplingBranch::Minus};
constexpr std::array<QubitState, 2> kQubit{QubitState::Up, QubitState::Down};

void require_same_spin(SpinLabel a, SpinLabel b) {
  if (a != b) {
    throw DomainError(kModule, "spin mismatch: 2j=" + std::to_string(a.twice_j()) + " vs 2j=" +
                                   std::to_string(b.twice_j()));
  }
}

// out += weight * E diag(p) E^T restricted to the diagonal (E is banded, so
// the result is diagonal too).
void accumulate_diagonal(const BandOperator& e, const Eigen::VectorXd& p, double weight,
                         Eigen::VectorXd& out) {
  const int dim = static_cast<int>(p.size());
  for (int col = 0; col < dim; ++col) {
    const int row = col + e.offset;
    if (row < 0 || row >= dim) continue;
    const double v = e.values[col];
    out[row] += weight * v * v * p[col];
  }
}

// out += weight * E rho E^T for a banded real E.
void accumulate_dense(const BandOperator& e, const Eigen::MatrixXcd& rho, double weight,
                      Eigen::MatrixXcd& out) {
  const int dim = static_cast<int>(rho.rows());
  const int lo = std::max(0, -e.offset);
  const int hi = std::min(dim, dim - e.offset);
  for (int c2 = lo; c2 < hi; ++c2) {
    const double v2 = weight * e.values[c2];
    if (v2 == 0.0) continue;
    for (int c1 = lo; c1 < hi; ++c1) {
      out(c1 + e.offset, c2 + e.offset) += e.values[c1] * v2 * rho(c1, c2);
    }
  }
}

// (1/2) sum over (a, b) for the selected branches, without normalization.
FrameState apply_branches(const FrameState& state, const KrausSet& kraus,
                          std::span<const CouplingBranch> branches) {
  require_same_spin(state.spin(), kraus.spin());
  const SpinLabel j = state.spin();
  if (state.is_diagonal()) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(j.dim());
    for (CouplingBranch c : branches)
      for (QubitState a : kQubit)
        for (QubitState b : kQubit) accumulate_diagonal(kraus.op(c, a, b), state.diagonal_storage(), 0.5, out);
    return FrameState(detail::Unchecked{}, j, std::move(out));
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(j.dim(), j.dim());
  for (CouplingBranch c : branches)
    for (QubitState a : kQubit)
      for (QubitState b : kQubit) accumulate_dense(kraus.op(c, a, b), state.dense_storage(), 0.5, out);
  return FrameState(detail::Unchecked{}, j, std::move(out));
}

}  // namespace

// ---------------------------------------------------------------------------
// FrameState

FrameState::FrameState(detail::Unchecked, SpinLabel j, Eigen::VectorXd populations)
    : j_(j), repr_(Representation::Diagonal), populations_(std::move(populations)) {}

FrameState::FrameState(detail::Unchecked, SpinLabel j, Eigen::MatrixXcd rho)
    : j_(j), repr_(Representation::Dense), rho_(std::move(rho)) {}

FrameState FrameState::stretched(SpinLabel j) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(j.dim());
  p[j.dim() - 1] = 1.0;
  return FrameState(detail::Unchecked{}, j, std::move(p));
}

FrameState FrameState::maximally_mixed(SpinLabel j) {
  return FrameState(detail::Unchecked{}, j,
                    Eigen::VectorXd(Eigen::VectorXd::Constant(j.dim(), 1.0 / static_cast<double>(j.dim()))));
}

FrameState FrameState::from_populations(SpinLabel j, Eigen::VectorXd populations) {
  if (populations.size() != j.dim()) throw DomainError(kModule, "population vector has wrong length");
  FrameState s(detail::Unchecked{}, j, std::move(populations));
  if (!diagnose(s).valid()) throw DomainError(kModule, "populations do not form a valid state");
  return s;
}

FrameState FrameState::from_matrix(SpinLabel j, Eigen::MatrixXcd rho) {
  if (rho.rows() != j.dim() || rho.cols() != j.dim()) {
    throw DomainError(kModule, "density matrix has wrong shape");
  }
  FrameState s(detail::Unchecked{}, j, std::move(rho));
  const StateDiagnostics d = diagnose(s);
  if (!d.valid()) {
    throw DomainError(kModule, "not a density matrix (hermiticity " + std::to_string(d.hermiticity_error) +
                                   ", trace " + std::to_string(d.trace_error) + ", min eigenvalue " +
                                   std::to_string(d.min_eigenvalue) + ")");
  }
  return s;
}

Eigen::VectorXd FrameState::populations() const {
  if (is_diagonal()) return populations_;
  return rho_.diagonal().real();
}

Eigen::MatrixXcd FrameState::matrix() const {
  if (!is_diagonal()) return rho_;
  return populations_.cast<std::complex<double>>().asDiagonal();
}

double FrameState::trace() const {
  return is_diagonal() ? populations_.sum() : rho_.trace().real();
}

FrameState FrameState::to_dense() const { return FrameState(detail::Unchecked{}, j_, matrix()); }

bool StateDiagnostics::valid() const {
  return hermiticity_error <= tol::kStructural && trace_error <= tol::kStructural &&
         min_eigenvalue >= -tol::kPositivity;
}

StateDiagnostics diagnose(const FrameState& state) {
  StateDiagnostics d;
  if (state.is_diagonal()) {
    const Eigen::VectorXd& p = state.diagonal_storage();
    d.trace_error = std::abs(p.sum() - 1.0);
    d.min_eigenvalue = p.size() ? p.minCoeff() : 0.0;
    return d;
  }
  const Eigen::MatrixXcd& rho = state.dense_storage();
  d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

// ---------------------------------------------------------------------------
// Kraus operators

Eigen::MatrixXd BandOperator::dense() const {
  const int dim = static_cast<int>(values.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const int row = col + offset;
    if (row >= 0 && row < dim) m(row, col) = values[col];
  }
  return m;
}

KrausSet::KrausSet(SpinLabel j, std::array<BandOperator, 8> ops) : j_(j), ops_(std::move(ops)) {}

std::size_t KrausSet::slot(CouplingBranch c, QubitState a, QubitState b) {
  return (c == CouplingBranch::Plus ? 0 : 4) + 2 * static_cast<std::size_t>(a) + static_cast<std::size_t>(b);
}

const BandOperator& KrausSet::op(CouplingBranch c, QubitState a, QubitState b) const {
  return ops_[slot(c, a, b)];
}

Eigen::MatrixXd KrausSet::completeness() const {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(j_.dim(), j_.dim());
  for (const BandOperator& e : ops_) {
    const Eigen::MatrixXd m = e.dense();
    sum += 0.5 * m.transpose() * m;
  }
  return sum;
}

KrausSet build_kraus(SpinLabel j) {
  if (j.twice_j() < 1) throw DomainError(kModule, "the measurement map needs j >= 1/2");
  std::array<BandOperator, 8> ops;
  const int dim = j.dim();
  for (CouplingBranch c : kBranches) {
    for (QubitState a : kQubit) {
      for (QubitState b : kQubit) {
        // Total M conservation: m_row + s_a = m_col + s_b fixes the band.
        BandOperator e;
        e.offset = (static_cast<int>(a) - static_cast<int>(b));
        e.values = Eigen::VectorXd::Zero(dim);
        for (int col = 0; col < dim; ++col) {
          const int row = col + e.offset;
          if (row < 0 || row >= dim) continue;
          e.values[col] = projector_element(j, c, a, b, magnetic_from_index(j, row),
                                            magnetic_from_index(j, col));
        }
        ops[KrausSet::slot(c, a, b)] = std::move(e);
      }
    }
  }
  return KrausSet(j, std::move(ops));
}

FrameState apply_map(const FrameState& state, const KrausSet& kraus) {
  return apply_branches(state, kraus, kBranches);
}

ConditionalUpdate condition_on_outcome(const FrameState& state, const KrausSet& kraus,
                                       CouplingBranch outcome) {
  const std::array<CouplingBranch, 1> branch{outcome};
  FrameState unnormalized = apply_branches(state, kraus, branch);
  const double p = unnormalized.trace();
  if (p < -tol::kProbability || p > 1.0 + tol::kProbability) {
    throw ConsistencyError(kModule, "outcome probability " + std::to_string(p) + " outside [0, 1]");
  }
  const double prob = std::clamp(p, 0.0, 1.0);
  if (prob == 0.0) return {0.0, std::move(unnormalized)};
  const SpinLabel j = state.spin();
  if (unnormalized.is_diagonal()) {
    return {prob, FrameState(detail::Unchecked{}, j, Eigen::VectorXd(unnormalized.diagonal_storage() / p))};
  }
  return {prob, FrameState(detail::Unchecked{}, j, Eigen::MatrixXcd(unnormalized.dense_storage() / p))};
}

double quantum_fidelity(const FrameState& state, const KrausSet& kraus) {
  require_same_spin(state.spin(), kraus.spin());
  // Both operators sit on the main diagonal.
  const Eigen::VectorXd& up = kraus.op(CouplingBranch::Plus, QubitState::Up, QubitState::Up).values;
  const Eigen::VectorXd& down = kraus.op(CouplingBranch::Minus, QubitState::Down, QubitState::Down).values;
  return 0.5 * state.populations().dot(up + down);
}

double closed_form_fidelity(SpinLabel j, std::int64_t n) {
  if (n < 0) throw DomainError(kModule, "step count must be non-negative");
  const double d = j.dim();
  const double amplitude = 0.5 * j.twice_j() / d;  // j / (2j + 1)
  return 0.5 + amplitude * std::pow(1.0 - 2.0 / (d * d), static_cast<double>(n));
}

double FidelitySeries::max_deviation() const {
  double worst = 0.0;
  for (const FidelityEntry& e : entries) worst = std::max(worst, std::abs(e.map - e.closed));
  return worst;
}

FidelitySeries evolve(SpinLabel j, std::int64_t n_max) {
  if (n_max < 0) throw DomainError(kModule, "n_max must be non-negative");
  const KrausSet kraus = build_kraus(j);
  FidelitySeries series{j, {}};
  series.entries.reserve(static_cast<std::size_t>(n_max) + 1);
  FrameState rho = FrameState::stretched(j);
  for (std::int64_t n = 0; n <= n_max; ++n) {
    if (n > 0) rho = apply_map(rho, kraus);
    series.entries.push_back({n, quantum_fidelity(rho, kraus), closed_form_fidelity(j, n)});
  }
  return series;
}

namespace {

Trajectory run_trajectory(const KrausSet& kraus, std::int64_t n_max, std::uint64_t seed) {
  Engine rng(seed);
  FrameState rho = FrameState::stretched(kraus.spin());
  Trajectory t{{}, rho, {}};
  t.record.outcomes.reserve(static_cast<std::size_t>(n_max));
  t.record.probabilities.reserve(static_cast<std::size_t>(n_max));
  t.fidelities.reserve(static_cast<std::size_t>(n_max) + 1);
  t.fidelities.push_back(quantum_fidelity(rho, kraus));
  for (std::int64_t n = 0; n < n_max; ++n) {
    ConditionalUpdate plus = condition_on_outcome(rho, kraus, CouplingBranch::Plus);
    ConditionalUpdate minus = condition_on_outcome(rho, kraus, CouplingBranch::Minus);
    const double total = plus.probability + minus.probability;
    if (std::abs(total - 1.0) > tol::kOracle) {
      throw ConsistencyError(kModule, "outcome probabilities sum to " + std::to_string(total));
    }
    const bool take_plus = uniform01(rng) * total < plus.probability;
    ConditionalUpdate& chosen = take_plus ? plus : minus;
    t.record.outcomes.push_back(take_plus ? CouplingBranch::Plus : CouplingBranch::Minus);
    t.record.probabilities.push_back(chosen.probability);
    rho = std::move(chosen.state);
    t.fidelities.push_back(quantum_fidelity(rho, kraus));
  }
  t.final_state = std::move(rho);
  return t;
}

}  // namespace

Trajectory sample_trajectory(SpinLabel j, std::int64_t n_max, std::uint64_t seed) {
  if (n_max < 0) throw DomainError(kModule, "n_max must be non-negative");
  return run_trajectory(build_kraus(j), n_max, seed);
}

TrajectoryStatistics trajectory_fidelity_statistics(SpinLabel j, std::int64_t n_max,
                                                    std::uint64_t seed, std::int64_t samples) {
  if (n_max < 0) throw DomainError(kModule, "n_max must be non-negative");
  if (samples < 1) throw DomainError(kModule, "need at least one trajectory");
  const KrausSet kraus = build_kraus(j);
  const auto steps = static_cast<std::size_t>(n_max) + 1;
  const auto count = static_cast<std::size_t>(samples);

  std::vector<double> fidelities(count * steps);
  parallel_for(count, [&](std::size_t i) {
    const Trajectory t = run_trajectory(kraus, n_max, stream_seed(seed, i));
    std::copy(t.fidelities.begin(), t.fidelities.end(), fidelities.begin() + static_cast<std::ptrdiff_t>(i * steps));
  });

  // Reduction in sample order keeps the sums schedule-independent. Sums are
  // taken relative to the first trajectory so constant columns come out exact.
  TrajectoryStatistics stats;
  stats.samples = samples;
  stats.mean.assign(steps, 0.0);
  stats.std_error.assign(steps, 0.0);
  for (std::size_t i = 1; i < count; ++i)
    for (std::size_t n = 0; n < steps; ++n) stats.mean[n] += fidelities[i * steps + n] - fidelities[n];
  for (std::size_t n = 0; n < steps; ++n) stats.mean[n] = fidelities[n] + stats.mean[n] / static_cast<double>(count);
  if (count > 1) {
    std::vector<double> sq(steps, 0.0);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t n = 0; n < steps; ++n) {
        const double d = fidelities[i * steps + n] - stats.mean[n];
        sq[n] += d * d;
      }
    for (std::size_t n = 0; n < steps; ++n) {
      const double variance = sq[n] / static_cast<double>(count - 1);
      stats.std_error[n] = std::sqrt(variance / static_cast<double>(count));
    }
  }
  return stats;
}

}  // namespace drfsim
