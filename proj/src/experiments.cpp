#include "qlab/experiments.hpp"

#include "qlab/husimi.hpp"
#include "qlab/povm.hpp"
#include "qlab/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace qlab {

ClassicalityPoint classicality_point(const TwoSpinState& state, int n_bands, double oversample) {
  const SpinLength s = state.spin;
  const SphereDirection z{};
  const SphereDirection x{kPi / 2.0, 0.0};
  const GridPtr grid = band_aligned_grid(s, z, n_bands, oversample);
  const PartitionPtr first = n_bands == 2 ? hemisphere_partition(grid, z) : polar_band_partition(grid, z, n_bands);
  const PartitionPtr second = n_bands == 2 ? hemisphere_partition(grid, x) : polar_band_partition(grid, x, n_bands);

  const StateEnsemble ensemble = StateEnsemble::from_state(state);
  const MixtureDeviation deviation = q_mixture_deviation(ensemble, *first, *first);

  const SlotPovm povm_first = povm_elements(first, s);
  const SlotPovm povm_second = povm_elements(second, s);
  const HiddenJointTable hidden = hidden_joint_distribution(ensemble, *first, *second, *first, *second);

  auto residual = [&](const RealMatrix& marginal, const SlotPovm& a, const SlotPovm& b) {
    const RealMatrix w = joint_probabilities(ensemble, a, b, ProbabilityRoute::trace).w;
    return (marginal - w).cwiseAbs().maxCoeff();
  };
  double worst = 0.0;
  worst = std::max(worst, residual(hidden.marginal_first(), povm_first, povm_first));
  worst = std::max(worst, residual(hidden.marginal_second(), povm_second, povm_second));
  worst = std::max(worst, residual(hidden.marginal_first_second(), povm_first, povm_second));
  worst = std::max(worst, residual(hidden.marginal_second_first(), povm_second, povm_first));

  ClassicalityPoint point;
  point.spin = s;
  point.n_bands = n_bands;
  point.width = kPi / n_bands;
  point.width_sqrt_s = point.width * std::sqrt(s.value());
  point.epsilon = deviation.epsilon;
  point.marginal_residual = worst;
  point.skipped_outcomes = static_cast<int>(deviation.skipped.size());
  point.grid_degree = grid->degree;
  return point;
}

}  // namespace qlab
