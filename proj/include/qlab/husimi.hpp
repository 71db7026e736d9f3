#pragma once

// Husimi Q-distributions of one and two spin-s systems on quadrature grids,
// and the deviation between Q of a state and the outcome-weighted mixture of
// Q-functions of its post-measurement states.

#include "qlab/sphere.hpp"
#include "qlab/spin.hpp"

#include <utility>
#include <vector>

namespace qlab {

/// <m|Omega_j> for every node j of a grid: a dim x nodes matrix, computed once
/// per (s, grid) and shared by the Q and POVM kernels.
class CoherentTable {
 public:
  CoherentTable(SpinLength s, GridPtr grid);

  SpinLength spin() const { return spin_; }
  const GridPtr& grid() const { return grid_; }
  const Matrix& amplitudes() const { return amplitudes_; }

 private:
  SpinLength spin_;
  GridPtr grid_;
  Matrix amplitudes_;
};

struct QTable1 {
  GridPtr grid;
  SpinLength spin;
  RealVector values;

  double integral() const;
};

struct QTable2 {
  GridPtr grid_a;
  GridPtr grid_b;
  SpinLength spin;
  RealMatrix values;  // rows: nodes of grid_a, columns: nodes of grid_b

  double integral() const;
};

QTable2 q_joint(const StateEnsemble& state, GridPtr grid_a, GridPtr grid_b);
QTable2 q_joint(const TwoSpinState& state, GridPtr grid_a, GridPtr grid_b);
QTable2 q_joint(const DensityOperator& state, GridPtr grid_a, GridPtr grid_b);

/// Q(Omega) = (2s+1)/(4 pi) <Omega|rho|Omega> for a single-party operator.
QTable1 q_single(SpinLength s, const Matrix& rho, GridPtr grid);

/// Largest |Q_AB - Q_A Q_B| over the table, Q_A and Q_B from the reduced states.
double factorization_residual(const QTable2& joint, const QTable1& a, const QTable1& b);

/// Q_AB integrated over every (slot of a, slot of b) pair.
RealMatrix integrate_q_over_slots(const StateEnsemble& state, const SlotPartition& a, const SlotPartition& b);

struct MixtureDeviation {
  double epsilon = 0.0;                        // total-variation distance, in [0, 1]
  RealMatrix outcome_probabilities;            // w^(mn)
  std::vector<std::pair<int, int>> skipped;    // outcomes with w below threshold
};

/// epsilon = 1/2 int |Q_AB - sum_mn w^(mn) Q^(mn)_AB| over both spheres, with
/// Q^(mn) the Q-function of the Kraus-reduced state for slot pair (m, n).
/// The integral uses the partitions' grids.
MixtureDeviation q_mixture_deviation(const StateEnsemble& state, const SlotPartition& a, const SlotPartition& b,
                                     double threshold = 1e-12);

}  // namespace qlab
