#include "qlab/sphere.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>

using namespace qlab;

TEST_CASE("Gauss-Legendre nodes and weights") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  const double ref_x[] = {-0.906179845938664, -0.538469310105683, 0.0, 0.538469310105683, 0.906179845938664};
  const double ref_w[] = {0.236926885056189, 0.478628670499366, 0.568888888888889, 0.478628670499366,
                          0.236926885056189};
  for (int i = 0; i < 5; ++i) {
    CHECK(x[i] == doctest::Approx(ref_x[i]).epsilon(1e-14));
    CHECK(w[i] == doctest::Approx(ref_w[i]).epsilon(1e-14));
  }
  gauss_legendre(40, x, w);
  // exact through degree 79
  double integral = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    integral += w[i] * std::pow(x[i], 78);
  }
  CHECK(integral == doctest::Approx(2.0 / 79.0).epsilon(1e-13));
}

TEST_CASE("grid integrates spherical polynomials up to its degree") {
  for (int two_s : {1, 4, 11}) {
    const GridPtr grid = gauss_legendre_grid(SpinLength(two_s), 1.3);
    CHECK(grid->total_weight() == doctest::Approx(4 * kPi).epsilon(1e-13));
    CHECK(grid->degree >= 2 * two_s);
    // x^a y^b z^c with a+b+c = degree, a,b,c even: exact value 4 pi (a-1)!!(b-1)!!(c-1)!!/(a+b+c+1)!!
    const int deg = grid->degree - grid->degree % 2;
    const int a = deg / 2 - deg / 2 % 2, c = deg - a;
    double exact = 4 * kPi;
    for (int k = a - 1; k > 0; k -= 2) exact *= k;
    for (int k = c - 1; k > 0; k -= 2) exact *= k;
    for (int k = deg + 1; k > 0; k -= 2) exact /= k;
    double sum = 0.0;
    for (std::size_t j = 0; j < grid->size(); ++j) {
      sum += grid->weights[j] * std::pow(grid->points[j].x(), a) * std::pow(grid->points[j].z(), c);
    }
    CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_legendre_grid(SpinLength(2), 0.5), std::invalid_argument);
}

TEST_CASE("rotated frame keeps the rule exact") {
  GridFrame frame;
  frame.axis = SphereDirection::make(1.0, 0.6);
  const GridPtr grid = gauss_legendre_grid(SpinLength(6), 1.0, frame);
  double zz = 0.0;
  for (std::size_t j = 0; j < grid->size(); ++j) {
    zz += grid->weights[j] * grid->points[j].z() * grid->points[j].z();
  }
  CHECK(zz == doctest::Approx(4 * kPi / 3).epsilon(1e-13));
}

TEST_CASE("hemisphere partition") {
  const GridPtr grid = band_aligned_grid(SpinLength(3), SphereDirection{}, 2);
  const PartitionPtr p = hemisphere_partition(grid, SphereDirection{});
  CHECK(p->n_slots == 2);
  CHECK(p->width == doctest::Approx(kPi));
  const auto w = p->slot_weights();
  CHECK(w[0] == doctest::Approx(2 * kPi).epsilon(1e-13));
  CHECK(w[1] == doctest::Approx(2 * kPi).epsilon(1e-13));
  for (std::size_t j = 0; j < grid->size(); ++j) {
    CHECK(p->labels[j] == (grid->points[j].z() >= 0 ? 0 : 1));
  }
}

TEST_CASE("aligned band partition has exact band areas") {
  const int n = 5;
  const SphereDirection axis = SphereDirection::make(0.9, 2.0);
  const GridPtr grid = band_aligned_grid(SpinLength(4), axis, n);
  const PartitionPtr p = polar_band_partition(grid, axis, n);
  CHECK(p->width == doctest::Approx(kPi / n));
  const auto w = p->slot_weights();
  for (int k = 0; k < n; ++k) {
    const double exact = 2 * kPi * (std::cos(k * kPi / n) - std::cos((k + 1) * kPi / n));
    CHECK(w[k] == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("partition errors") {
  const GridPtr coarse = gauss_legendre_grid(SpinLength(1));
  CHECK_THROWS_AS(polar_band_partition(coarse, SphereDirection{}, 12), std::invalid_argument);
  CHECK_THROWS_AS(polar_band_partition(coarse, SphereDirection{}, 1), std::invalid_argument);
  std::vector<int> labels(coarse->size(), 0);
  CHECK_THROWS_AS(custom_partition(coarse, labels, 2, 1.0), std::invalid_argument);
  labels[0] = 1;
  CHECK(custom_partition(coarse, labels, 2, 1.0)->n_slots == 2);
  const GridPtr other = gauss_legendre_grid(SpinLength(2));
  CHECK_THROWS_AS(partition_intersection(*hemisphere_partition(coarse, SphereDirection{}),
                                         *hemisphere_partition(other, SphereDirection{})),
                  std::invalid_argument);
}

TEST_CASE("intersection cells refine both parents") {
  const GridPtr grid = gauss_legendre_grid(SpinLength(6), 2.0);
  const PartitionPtr a = polar_band_partition(grid, SphereDirection{}, 3);
  const PartitionPtr b = hemisphere_partition(grid, SphereDirection{kPi / 2, 0.0});
  const PartitionPtr cells = partition_intersection(*a, *b);
  CHECK(cells->parents.size() == static_cast<std::size_t>(cells->n_slots));
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const auto [pa, pb] = cells->parents[cells->labels[j]];
    CHECK(pa == a->labels[j]);
    CHECK(pb == b->labels[j]);
  }
  for (int k = 1; k < cells->n_slots; ++k) {
    CHECK(cells->parents[k - 1] < cells->parents[k]);
  }
  const auto wa = a->slot_weights();
  const auto wc = cells->slot_weights();
  std::vector<double> summed(3, 0.0);
  for (int k = 0; k < cells->n_slots; ++k) {
    summed[cells->parents[k].first] += wc[k];
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(summed[k] == doctest::Approx(wa[k]).epsilon(1e-14));
  }
}

TEST_CASE("hemisphere about +x splits by the sign of x") {
  const GridPtr grid = gauss_legendre_grid(SpinLength(5), 1.0);
  const PartitionPtr p = hemisphere_partition(grid, SphereDirection{kPi / 2, 0.0});
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double x = std::sin(grid->nodes[j].theta) * std::cos(grid->nodes[j].phi);
    if (std::abs(x) > 1e-12) CHECK(p->labels[j] == (x > 0 ? 0 : 1));
  }
}

TEST_CASE("two polar bands label like hemispheres") {
  const GridPtr grid = gauss_legendre_grid(SpinLength(4), 1.0);
  const PartitionPtr bands = polar_band_partition(grid, SphereDirection{}, 2);
  const PartitionPtr hemi = hemisphere_partition(grid, SphereDirection{});
  CHECK(bands->labels == hemi->labels);
  CHECK(polar_band_partition(gauss_legendre_grid(SpinLength(4), 3.0), SphereDirection{}, 6)->width ==
        doctest::Approx(kPi / 6));
  const auto w = polar_band_partition(gauss_legendre_grid(SpinLength(4), 3.0), SphereDirection{}, 6)->slot_weights();
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(4 * kPi).epsilon(1e-13));
}

TEST_CASE("intersection examples") {
  const GridPtr grid = gauss_legendre_grid(SpinLength(3), 2.0);
  const PartitionPtr z = hemisphere_partition(grid, SphereDirection{});
  const PartitionPtr self = partition_intersection(*z, *z);
  CHECK(self->n_slots == 2);
  CHECK(self->labels == z->labels);
  const PartitionPtr quad = partition_intersection(*z, *hemisphere_partition(grid, SphereDirection{kPi / 2, 0.0}));
  CHECK(quad->n_slots == 4);
}
