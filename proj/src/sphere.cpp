#include "qlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

constexpr double kBoundaryTolerance = 1e-12;

Eigen::Matrix3d frame_rotation(const SphereDirection& axis) {
  const double ct = std::cos(axis.theta), st = std::sin(axis.theta);
  const double cp = std::cos(axis.phi), sp = std::sin(axis.phi);
  Eigen::Matrix3d rz;
  rz << cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0;
  Eigen::Matrix3d ry;
  ry << ct, 0.0, st, 0.0, 1.0, 0.0, -st, 0.0, ct;
  return rz * ry;
}

double polar_angle_about(const Eigen::Vector3d& axis, const Eigen::Vector3d& p) {
  return std::atan2(axis.cross(p).norm(), axis.dot(p));
}

void check_non_empty(const SlotPartition& p) {
  const std::vector<double> w = p.slot_weights();
  for (int k = 0; k < p.n_slots; ++k) {
    if (!(w[k] > 0.0)) {
      throw std::invalid_argument("slot " + std::to_string(k) +
                                  " holds no grid nodes; use a finer or band-aligned grid");
    }
  }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) {
    throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  }
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    nodes[n / 2] = 0.0;
  }
}

double SphereGrid::total_weight() const {
  double sum = 0.0;
  for (double w : weights) {
    sum += w;
  }
  return sum;
}

bool SphereGrid::same_nodes(const SphereGrid& other) const {
  if (this == &other) {
    return true;
  }
  if (size() != other.size()) {
    return false;
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (nodes[i].theta != other.nodes[i].theta || nodes[i].phi != other.nodes[i].phi ||
        weights[i] != other.weights[i]) {
      return false;
    }
  }
  return true;
}

GridPtr gauss_legendre_grid(SpinLength s, double oversample, GridFrame frame) {
  if (!(oversample >= 1.0)) {
    throw std::invalid_argument("grid oversample factor must be >= 1");
  }
  std::sort(frame.polar_breaks.begin(), frame.polar_breaks.end());
  for (double b : frame.polar_breaks) {
    if (!(b > 0.0 && b < kPi)) {
      throw std::invalid_argument("polar break angles must lie strictly inside (0, pi)");
    }
  }
  frame.polar_breaks.erase(std::unique(frame.polar_breaks.begin(), frame.polar_breaks.end()),
                           frame.polar_breaks.end());

  const int n_polar = static_cast<int>(std::ceil(oversample * (s.two_s() + 1) - 1e-9));
  // at least 6 azimuths so the smallest spin still gets a 2x6 grid
  const int n_azimuth = std::max(6, static_cast<int>(std::ceil(oversample * (2 * s.two_s() + 2) - 1e-9)));

  std::vector<double> gl_x, gl_w;
  gauss_legendre(n_polar, gl_x, gl_w);

  // Segment edges in x = cos(theta'), descending from the pole.
  std::vector<double> edges{1.0};
  for (double b : frame.polar_breaks) {
    edges.push_back(std::cos(b));
  }
  edges.push_back(-1.0);

  const Eigen::Matrix3d rot = frame_rotation(frame.axis);
  auto grid = std::make_shared<SphereGrid>();
  grid->degree = std::min(2 * n_polar - 1, n_azimuth - 1);
  const double dphi = 2.0 * kPi / n_azimuth;

  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double hi = edges[seg];
    const double lo = edges[seg + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    // Descending x so nodes run from the pole outward.
    for (int i = n_polar - 1; i >= 0; --i) {
      const double x = mid + half * gl_x[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - x * x));
      const double w = gl_w[i] * half * dphi;
      for (int j = 0; j < n_azimuth; ++j) {
        const double phi = j * dphi;
        const Eigen::Vector3d local(st * std::cos(phi), st * std::sin(phi), x);
        const Eigen::Vector3d global = rot * local;
        grid->points.push_back(global.normalized());
        grid->nodes.push_back(SphereDirection::from_vector(global));
        grid->weights.push_back(w);
      }
    }
  }
  grid->frame = std::move(frame);
  return grid;
}

GridPtr band_aligned_grid(SpinLength s, const SphereDirection& axis, int n_bands, double oversample) {
  if (n_bands < 1) {
    throw std::invalid_argument("n_bands must be >= 1");
  }
  GridFrame frame{axis, {}};
  for (int k = 1; k < n_bands; ++k) {
    frame.polar_breaks.push_back(k * kPi / n_bands);
  }
  return gauss_legendre_grid(s, oversample, std::move(frame));
}

std::vector<double> SlotPartition::slot_weights() const {
  std::vector<double> w(n_slots, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    w[labels[i]] += grid->weights[i];
  }
  return w;
}

PartitionPtr hemisphere_partition(GridPtr grid, const SphereDirection& axis) {
  if (!grid) {
    throw std::invalid_argument("partition needs a grid");
  }
  auto p = std::make_shared<SlotPartition>();
  const Eigen::Vector3d a = axis.unit_vector();
  p->labels.reserve(grid->size());
  for (const auto& pt : grid->points) {
    p->labels.push_back(a.dot(pt) >= -kBoundaryTolerance ? 0 : 1);
  }
  p->grid = std::move(grid);
  p->n_slots = 2;
  p->descriptor = {PartitionKind::hemisphere, axis, 2};
  p->width = kPi;
  check_non_empty(*p);
  return p;
}

PartitionPtr polar_band_partition(GridPtr grid, const SphereDirection& axis, int n_bands) {
  if (!grid) {
    throw std::invalid_argument("partition needs a grid");
  }
  if (n_bands < 2) {
    throw std::invalid_argument("polar band partition needs n_bands >= 2");
  }
  auto p = std::make_shared<SlotPartition>();
  const Eigen::Vector3d a = axis.unit_vector();
  const double width = kPi / n_bands;
  p->labels.reserve(grid->size());
  for (const auto& pt : grid->points) {
    const double theta = polar_angle_about(a, pt);
    int k = std::min(n_bands - 1, static_cast<int>(std::floor(theta / width)));
    if (k >= 1 && theta - k * width <= kBoundaryTolerance) {
      --k;
    }
    p->labels.push_back(k);
  }
  p->grid = std::move(grid);
  p->n_slots = n_bands;
  p->descriptor = {PartitionKind::polar_bands, axis, n_bands};
  p->width = width;
  check_non_empty(*p);
  return p;
}

PartitionPtr custom_partition(GridPtr grid, std::vector<int> labels, int n_slots, double width) {
  if (!grid) {
    throw std::invalid_argument("partition needs a grid");
  }
  if (labels.size() != grid->size()) {
    throw std::invalid_argument("one label per grid node required");
  }
  for (int l : labels) {
    if (l < 0 || l >= n_slots) {
      throw std::invalid_argument("slot label out of range");
    }
  }
  auto p = std::make_shared<SlotPartition>();
  p->grid = std::move(grid);
  p->labels = std::move(labels);
  p->n_slots = n_slots;
  p->descriptor = {PartitionKind::custom, {}, n_slots};
  p->width = width;
  check_non_empty(*p);
  return p;
}

PartitionPtr partition_intersection(const SlotPartition& first, const SlotPartition& second) {
  if (!first.grid || !second.grid || !first.grid->same_nodes(*second.grid)) {
    throw std::invalid_argument("partition intersection needs partitions on the same grid");
  }
  std::map<std::pair<int, int>, int> cells;
  for (std::size_t i = 0; i < first.labels.size(); ++i) {
    cells.emplace(std::make_pair(first.labels[i], second.labels[i]), 0);
  }
  auto p = std::make_shared<SlotPartition>();
  int next = 0;
  for (auto& [key, index] : cells) {
    index = next++;
    p->parents.push_back(key);
  }
  p->labels.reserve(first.labels.size());
  for (std::size_t i = 0; i < first.labels.size(); ++i) {
    p->labels.push_back(cells.at({first.labels[i], second.labels[i]}));
  }
  p->grid = first.grid;
  p->n_slots = next;
  p->descriptor = {PartitionKind::intersection, {}, next};
  p->width = std::min(first.width, second.width);
  return p;
}

}  // namespace qlab
