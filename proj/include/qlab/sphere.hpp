#pragma once

// Product quadrature grids on the unit sphere and slot partitions of their
// nodes. A grid is built in a local frame whose polar axis can point
// anywhere; its Gauss-Legendre rule in cos(theta') may be split at polar
// break angles so that bands about that axis are integrated exactly.

#include "qlab/spin.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace qlab {

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct GridFrame {
  SphereDirection axis{};             // polar axis of the local frame
  std::vector<double> polar_breaks;   // interior break angles in (0, pi), ascending
};

struct SphereGrid {
  std::vector<SphereDirection> nodes;
  std::vector<Eigen::Vector3d> points;  // unit vectors of nodes
  std::vector<double> weights;          // steradian, sum = 4 pi
  int degree = 0;                       // polynomial degree integrated exactly
  GridFrame frame;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
  bool same_nodes(const SphereGrid& other) const;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Product grid with at least ceil(oversample (2s+1)) Gauss-Legendre nodes in
/// cos(theta') per polar segment and ceil(oversample (4s+2)) uniform azimuths.
/// Exact for polynomials of degree >= 4s in the direction components.
GridPtr gauss_legendre_grid(SpinLength s, double oversample = 1.0, GridFrame frame = {});

/// Grid aligned with `axis` and split at the band edges k pi / n_bands, so that
/// polar_band_partition(grid, axis, n_bands) covers exact spherical bands.
GridPtr band_aligned_grid(SpinLength s, const SphereDirection& axis, int n_bands, double oversample = 1.0);

enum class PartitionKind { hemisphere, polar_bands, intersection, custom };

struct PartitionDescriptor {
  PartitionKind kind = PartitionKind::custom;
  SphereDirection axis{};
  int n_bands = 0;
};

struct SlotPartition {
  GridPtr grid;
  std::vector<int> labels;  // slot per node
  int n_slots = 0;
  PartitionDescriptor descriptor;
  double width = 0.0;       // nominal angular width Delta Theta
  // For intersections: (parent label in first, parent label in second) per slot.
  std::vector<std::pair<int, int>> parents;

  /// Total quadrature weight per slot.
  std::vector<double> slot_weights() const;
};

using PartitionPtr = std::shared_ptr<const SlotPartition>;

/// Two slots by the sign of axis . Omega; slot 0 is the side the axis points
/// to and keeps nodes on the equator. Width pi.
PartitionPtr hemisphere_partition(GridPtr grid, const SphereDirection& axis);

/// n_bands bands of equal polar width pi / n_bands about axis, band 0 around
/// +axis. Nodes on a band edge go to the lower index.
PartitionPtr polar_band_partition(GridPtr grid, const SphereDirection& axis, int n_bands);

/// Arbitrary labelling; validates ranges and non-empty slots.
PartitionPtr custom_partition(GridPtr grid, std::vector<int> labels, int n_slots, double width);

/// Cells (k, k') with non-empty node sets, ordered lexicographically.
PartitionPtr partition_intersection(const SlotPartition& first, const SlotPartition& second);

}  // namespace qlab
