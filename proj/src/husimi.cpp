#include "qlab/husimi.hpp"

#include "q_kernel.hpp"
#include "qlab/povm.hpp"

#include <cmath>
#include <stdexcept>

namespace qlab {

CoherentTable::CoherentTable(SpinLength s, GridPtr grid) : spin_(s), grid_(std::move(grid)) {
  if (!grid_) {
    throw std::invalid_argument("coherent table needs a grid");
  }
  amplitudes_.resize(s.dim(), static_cast<Eigen::Index>(grid_->size()));
  for (std::size_t j = 0; j < grid_->size(); ++j) {
    amplitudes_.col(static_cast<Eigen::Index>(j)) = coherent_amplitudes(s, grid_->nodes[j]);
  }
}

double QTable1::integral() const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    sum += grid->weights[i] * values(i);
  }
  return sum;
}

double QTable2::integral() const {
  const Eigen::Map<const RealVector> wa(grid_a->weights.data(), static_cast<Eigen::Index>(grid_a->size()));
  const Eigen::Map<const RealVector> wb(grid_b->weights.data(), static_cast<Eigen::Index>(grid_b->size()));
  return wa.dot(values * wb);
}

QTable2 q_joint(const StateEnsemble& state, GridPtr grid_a, GridPtr grid_b) {
  const CoherentTable ca(state.spin, grid_a);
  const CoherentTable cb(state.spin, grid_b);
  const detail::QKernel kernel(state, ca.amplitudes(), cb.amplitudes());
  QTable2 table{std::move(grid_a), std::move(grid_b), state.spin, RealMatrix(kernel.rows(), kernel.cols())};
  detail::parallel_for(static_cast<std::size_t>((kernel.rows() + detail::kRowBlock - 1) / detail::kRowBlock),
                       [&](std::size_t b) {
                         const Eigen::Index begin = static_cast<Eigen::Index>(b) * detail::kRowBlock;
                         const Eigen::Index end = std::min(kernel.rows(), begin + detail::kRowBlock);
                         RealMatrix block;
                         kernel.fill(begin, end, block);
                         table.values.middleRows(begin, end - begin) = block;
                       });
  return table;
}

QTable2 q_joint(const TwoSpinState& state, GridPtr grid_a, GridPtr grid_b) {
  return q_joint(StateEnsemble::from_state(state), std::move(grid_a), std::move(grid_b));
}

QTable2 q_joint(const DensityOperator& state, GridPtr grid_a, GridPtr grid_b) {
  return q_joint(StateEnsemble::from_density(state), std::move(grid_a), std::move(grid_b));
}

QTable1 q_single(SpinLength s, const Matrix& rho, GridPtr grid) {
  if (rho.rows() != s.dim() || rho.cols() != s.dim()) {
    throw std::invalid_argument("single-party operator dimension does not match spin");
  }
  const CoherentTable table(s, grid);
  const Matrix& c = table.amplitudes();
  const Matrix rc = rho * c;
  const double f = s.dim() / (4.0 * kPi);
  RealVector values(c.cols());
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    values(j) = f * c.col(j).dot(rc.col(j)).real();
  }
  return {std::move(grid), s, std::move(values)};
}

double factorization_residual(const QTable2& joint, const QTable1& a, const QTable1& b) {
  if (a.values.size() != joint.values.rows() || b.values.size() != joint.values.cols()) {
    throw std::invalid_argument("marginal tables do not match the joint table");
  }
  return (joint.values - a.values * b.values.transpose()).cwiseAbs().maxCoeff();
}

namespace {

// Node -> slot indicator matrix scaled by node weights: (nodes x slots).
RealMatrix weighted_indicator(const SlotPartition& p) {
  RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(p.labels.size()), p.n_slots);
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    m(static_cast<Eigen::Index>(i), p.labels[i]) = p.grid->weights[i];
  }
  return m;
}

void check_spin(const StateEnsemble& state) {
  const int d = state.spin.dim();
  for (const Matrix& c : state.components) {
    if (c.rows() != d || c.cols() != d) {
      throw std::invalid_argument("state components do not match spin dimension");
    }
  }
}

}  // namespace

RealMatrix integrate_q_over_slots(const StateEnsemble& state, const SlotPartition& a, const SlotPartition& b) {
  check_spin(state);
  const CoherentTable ca(state.spin, a.grid);
  const CoherentTable cb(state.spin, b.grid);
  const detail::QKernel kernel(state, ca.amplitudes(), cb.amplitudes());
  const RealMatrix ind_b = weighted_indicator(b);
  const auto partial = detail::map_row_blocks<RealMatrix>(kernel.rows(), [&](Eigen::Index begin, Eigen::Index end) {
    RealMatrix block;
    kernel.fill(begin, end, block);
    const RealMatrix by_slot_b = block * ind_b;  // rows x |b|
    RealMatrix acc = RealMatrix::Zero(a.n_slots, b.n_slots);
    for (Eigen::Index i = begin; i < end; ++i) {
      acc.row(a.labels[i]) += a.grid->weights[i] * by_slot_b.row(i - begin);
    }
    return acc;
  });
  RealMatrix total = RealMatrix::Zero(a.n_slots, b.n_slots);
  for (const auto& p : partial) {
    total += p;
  }
  return total;
}

MixtureDeviation q_mixture_deviation(const StateEnsemble& state, const SlotPartition& a, const SlotPartition& b,
                                     double threshold) {
  check_spin(state);
  const SlotPovm povm_a = povm_elements(std::make_shared<SlotPartition>(a), state.spin);
  const SlotPovm povm_b = povm_elements(std::make_shared<SlotPartition>(b), state.spin);
  const auto kraus_a = kraus_from_povm(povm_a);
  const auto kraus_b = kraus_from_povm(povm_b);

  MixtureDeviation result;
  result.outcome_probabilities = joint_probabilities(state, povm_a, povm_b, ProbabilityRoute::trace).w;

  // sum_mn w Q^(mn) is the Q-function of the non-selective update
  // sum_mn (M_A (x) M_B) rho (M_A (x) M_B)^dag, restricted to kept outcomes.
  StateEnsemble mixture{state.spin, {}, {}};
  for (int m = 0; m < a.n_slots; ++m) {
    for (int n = 0; n < b.n_slots; ++n) {
      if (result.outcome_probabilities(m, n) < threshold) {
        result.skipped.emplace_back(m, n);
        continue;
      }
      const StateEnsemble part = apply_kraus(state, kraus_a[m], kraus_b[n]);
      mixture.weights.insert(mixture.weights.end(), part.weights.begin(), part.weights.end());
      mixture.components.insert(mixture.components.end(), part.components.begin(), part.components.end());
    }
  }

  const CoherentTable ca(state.spin, a.grid);
  const CoherentTable cb(state.spin, b.grid);
  const detail::QKernel before(state, ca.amplitudes(), cb.amplitudes());
  const detail::QKernel after(mixture, ca.amplitudes(), cb.amplitudes());
  const Eigen::Map<const RealVector> wb(b.grid->weights.data(), static_cast<Eigen::Index>(b.grid->size()));
  const auto partial = detail::map_row_blocks<double>(before.rows(), [&](Eigen::Index begin, Eigen::Index end) {
    RealMatrix q0, q1;
    before.fill(begin, end, q0);
    after.fill(begin, end, q1);
    const RealVector row_sums = (q0 - q1).cwiseAbs() * wb;
    double acc = 0.0;
    for (Eigen::Index i = begin; i < end; ++i) {
      acc += a.grid->weights[i] * row_sums(i - begin);
    }
    return acc;
  });
  double total = 0.0;
  for (double p : partial) {
    total += p;
  }
  result.epsilon = 0.5 * total;
  return result;
}

}  // namespace qlab
