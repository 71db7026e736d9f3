#pragma once

// Coarse-grained slot measurements: POVM elements integrating coherent-state
// projectors over slots, their Kraus operators, joint outcome probabilities
// and the hidden joint distribution over slot intersections.

#include "qlab/sphere.hpp"
#include "qlab/spin.hpp"

#include <array>
#include <vector>

namespace qlab {

struct PovmElement {
  SpinLength spin;
  int slot = 0;
  Matrix matrix;  // Hermitian, PSD
};

/// POVM of one partition; keeps the partition so slot integrals of Q can be
/// taken over the same node sets.
struct SlotPovm {
  PartitionPtr partition;
  std::vector<PovmElement> elements;

  /// max |sum_k P^(k) - I|
  double completeness_residual() const;
};

struct KrausOperator {
  Matrix matrix;
};

enum class ProbabilityRoute { trace, q_integration };

struct JointOutcomeTable {
  RealMatrix w;  // w(m, n)
  ProbabilityRoute route = ProbabilityRoute::trace;
  int clamped_entries = 0;  // entries below -1e-12 that were set to zero

  double total() const { return w.sum(); }
};

/// p^(m m' n n') over slot intersections of two partitions per party.
struct HiddenJointTable {
  std::array<int, 4> shape{};  // (|P_A|, |Pbar_A|, |P_B|, |Pbar_B|)
  std::vector<double> p;

  double& at(int m, int mbar, int n, int nbar) { return p[index(m, mbar, n, nbar)]; }
  double at(int m, int mbar, int n, int nbar) const { return p[index(m, mbar, n, nbar)]; }
  double total() const;

  /// sum over (m', n') -> table over (m, n)
  RealMatrix marginal_first() const;
  /// sum over (m, n) -> table over (m', n')
  RealMatrix marginal_second() const;
  /// sum over (m', n) -> table over (m, n')
  RealMatrix marginal_first_second() const;
  /// sum over (m, n') -> table over (m', n)
  RealMatrix marginal_second_first() const;

 private:
  std::size_t index(int m, int mbar, int n, int nbar) const {
    return ((static_cast<std::size_t>(m) * shape[1] + mbar) * shape[2] + n) * shape[3] + nbar;
  }
};

/// P^(k) = (2s+1)/(4 pi) sum_{nodes in slot k} w_node |Omega><Omega|.
SlotPovm povm_elements(PartitionPtr partition, SpinLength s);

/// Hermitian square root. Eigenvalues down to -1e-8 are clamped to zero;
/// anything lower throws NumericalError.
KrausOperator kraus_from_povm(const PovmElement& element);
std::vector<KrausOperator> kraus_from_povm(const SlotPovm& povm);

JointOutcomeTable joint_probabilities(const StateEnsemble& state, const SlotPovm& a, const SlotPovm& b,
                                      ProbabilityRoute route);
JointOutcomeTable joint_probabilities(const TwoSpinState& state, const SlotPovm& a, const SlotPovm& b,
                                      ProbabilityRoute route);

/// M_A M_B rho M_A^dag M_B^dag / w^(mn); throws std::domain_error when the
/// outcome probability is below threshold.
DensityOperator reduced_state(const DensityOperator& rho, const std::vector<KrausOperator>& kraus_a,
                              const std::vector<KrausOperator>& kraus_b, int m, int n, double threshold = 1e-12);

/// Unnormalized post-measurement components (M_A (x) M_B) psi_k for one outcome.
StateEnsemble apply_kraus(const StateEnsemble& state, const KrausOperator& a, const KrausOperator& b);

HiddenJointTable hidden_joint_distribution(const StateEnsemble& state, const SlotPartition& part_a,
                                           const SlotPartition& part_a_bar, const SlotPartition& part_b,
                                           const SlotPartition& part_b_bar);

}  // namespace qlab
