#include "qlab/bell.hpp"

#include "parallel.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qlab {

namespace {

constexpr int kA = 0, kAPrime = 1, kB = 2, kBPrime = 3;

Matrix conjugate_by(const Matrix& u, const Matrix& op) { return u * op * u.adjoint(); }

// Effects of the sign of the spin component along +z.
Effects sharp_effects_z(SpinLength s, ZeroRule rule) {
  const int d = s.dim();
  Effects e{Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (int i = 0; i < d; ++i) {
    const int two_m = 2 * i - s.two_s();
    const bool positive = two_m > 0 || (two_m == 0 && rule == ZeroRule::plus);
    (positive ? e.plus : e.minus)(i, i) = 1.0;
  }
  return e;
}

Effects slot_effects_about(SpinLength s, const SphereDirection& axis, int n_bands, const std::vector<int>& signs,
                           double oversample) {
  const GridPtr grid = band_aligned_grid(s, axis, n_bands, oversample);
  const PartitionPtr partition = n_bands == 2 ? hemisphere_partition(grid, axis)
                                              : polar_band_partition(grid, axis, n_bands);
  const SlotPovm povm = povm_elements(partition, s);
  return slot_effects(povm, signs.empty() ? default_band_signs(n_bands) : signs);
}

// Observable along a setting, built fast from a fixed reference observable:
// direction kinds rotate the +z observable, the cat kind conjugates the fixed
// hemisphere observable with the cat rotation.
class ObservableFamily {
 public:
  ObservableFamily(SpinLength s, const DichotomicMeasurement& prototype) : spin_(s), kind_(prototype.kind) {
    switch (kind_) {
      case MeasurementKind::sharp_sign:
        reference_ = sharp_effects_z(s, prototype.zero_rule).observable();
        break;
      case MeasurementKind::slot_coarse:
        reference_ = slot_effects_about(s, SphereDirection{}, prototype.n_bands, prototype.slot_signs,
                                        prototype.oversample)
                         .observable();
        break;
      case MeasurementKind::cat_hemisphere:
        reference_ = slot_effects_about(s, prototype.direction, 2, {}, prototype.oversample).observable();
        break;
    }
  }

  MeasurementKind kind() const { return kind_; }

  Matrix at_direction(const SphereDirection& dir) const {
    return conjugate_by(rotation(spin_, dir).entries, reference_);
  }

  Matrix at_cat_angle(double alpha) const {
    const Matrix u = cat_rotation(spin_, alpha).entries;
    return u.adjoint() * reference_ * u;
  }

 private:
  SpinLength spin_;
  MeasurementKind kind_;
  Matrix reference_;
};

// Setting parameters: coplanar angle per setting plus, for full-sphere
// refinement, an azimuth offset per setting.
SphereDirection setting_direction(double t, double azimuth) {
  const SphereDirection in_plane = SphereDirection::coplanar(t);
  return SphereDirection::make(in_plane.theta, in_plane.phi + azimuth);
}

// Psi^H O Psi so that E(O_a, O_b) = Re sum (Psi^H O_a Psi) .* O_b.
Matrix sandwich(const Matrix& psi, const Matrix& observable) { return psi.adjoint() * observable * psi; }

double pair_correlation(const Matrix& sandwiched_a, const Matrix& observable_b) {
  return sandwiched_a.cwiseProduct(observable_b).sum().real();
}

}  // namespace

std::vector<int> default_band_signs(int n_bands) {
  std::vector<int> signs(n_bands);
  for (int k = 0; k < n_bands; ++k) {
    // centre (k + 1/2) pi / n <= pi/2  <=>  2k + 1 <= n
    signs[k] = (2 * k + 1 <= n_bands) ? 1 : -1;
  }
  return signs;
}

Effects slot_effects(const SlotPovm& povm, const std::vector<int>& signs) {
  if (signs.size() != povm.elements.size()) {
    throw std::invalid_argument("one sign per slot required");
  }
  if (povm.elements.empty()) {
    throw std::invalid_argument("empty POVM");
  }
  const int d = povm.elements.front().spin.dim();
  Effects e{Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (signs[k] == 1) {
      e.plus += povm.elements[k].matrix;
    } else if (signs[k] == -1) {
      e.minus += povm.elements[k].matrix;
    } else {
      throw std::invalid_argument("slot signs must be +1 or -1");
    }
  }
  return e;
}

Effects measurement_effects(const DichotomicMeasurement& meas, SpinLength s) {
  switch (meas.kind) {
    case MeasurementKind::sharp_sign: {
      const Effects z = sharp_effects_z(s, meas.zero_rule);
      const Matrix u = rotation(s, meas.direction).entries;
      return {conjugate_by(u, z.plus), conjugate_by(u, z.minus)};
    }
    case MeasurementKind::slot_coarse:
      return slot_effects_about(s, meas.direction, meas.n_bands, meas.slot_signs, meas.oversample);
    case MeasurementKind::cat_hemisphere: {
      const Effects hemi = slot_effects_about(s, meas.direction, 2, {}, meas.oversample);
      const Matrix u = cat_rotation(s, meas.cat_angle).entries;
      return {u.adjoint() * hemi.plus * u, u.adjoint() * hemi.minus * u};
    }
  }
  throw std::invalid_argument("unknown measurement kind");
}

double correlation(const TwoSpinState& state, const Matrix& observable_a, const Matrix& observable_b) {
  const int d = state.spin.dim();
  if (observable_a.rows() != d || observable_b.rows() != d) {
    throw std::invalid_argument("observable dimension does not match state");
  }
  return pair_correlation(sandwich(state.as_matrix(), observable_a), observable_b);
}

double correlation(const TwoSpinState& state, const DichotomicMeasurement& a, const DichotomicMeasurement& b) {
  return correlation(state, measurement_effects(a, state.spin).observable(),
                     measurement_effects(b, state.spin).observable());
}

ChshResult chsh(const TwoSpinState& state, const ChshSettings& settings, const DichotomicMeasurement& prototype) {
  std::array<Matrix, 4> obs;
  for (int i = 0; i < 4; ++i) {
    DichotomicMeasurement m = prototype;
    if (prototype.kind == MeasurementKind::cat_hemisphere) {
      m.cat_angle = settings.cat_angles[i];
    } else {
      m.direction = settings.directions[i];
    }
    obs[i] = measurement_effects(m, state.spin).observable();
  }
  ChshResult r;
  r.settings = settings;
  if (prototype.kind == MeasurementKind::cat_hemisphere) {
    r.settings.directions.fill(prototype.direction);
  }
  r.correlations = {correlation(state, obs[kA], obs[kB]), correlation(state, obs[kA], obs[kBPrime]),
                    correlation(state, obs[kAPrime], obs[kB]), correlation(state, obs[kAPrime], obs[kBPrime])};
  r.S = r.correlations[0] + r.correlations[1] + r.correlations[2] - r.correlations[3];
  return r;
}

ChshResult chsh_scan(const TwoSpinState& state, const DichotomicMeasurement& prototype, const ScanOptions& options) {
  if (options.resolution < 1) {
    throw std::invalid_argument("scan resolution must be positive");
  }
  const ObservableFamily family(state.spin, prototype);
  const bool cat = family.kind() == MeasurementKind::cat_hemisphere;
  const Matrix psi = state.as_matrix();
  const int n = options.resolution;
  // Cat observables repeat with period pi in alpha; directions with 2 pi.
  const double period = cat ? kPi : 2.0 * kPi;
  const double spacing = period / n;

  auto observable_at = [&](double t, double azimuth) {
    return cat ? family.at_cat_angle(t) : family.at_direction(setting_direction(t, azimuth));
  };

  // Stage 1: correlation table on the grid, C(i, j) = E(t_i, t_j).
  std::vector<Matrix> grid_obs(n), grid_sand(n);
  detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    grid_obs[i] = observable_at(static_cast<double>(i) * spacing, 0.0);
    grid_sand[i] = sandwich(psi, grid_obs[i]);
  });
  RealMatrix table(n, n);
  detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    for (int j = 0; j < n; ++j) {
      table(static_cast<Eigen::Index>(i), j) = pair_correlation(grid_sand[i], grid_obs[j]);
    }
  });

  // S splits as [C(a,b) + C(a',b)] + [C(a,b') - C(a',b')], so for fixed
  // (a, a') both brackets are maximized (or minimized) independently.
  std::array<int, 4> best_idx{0, 0, 0, 0};
  double best_abs = -1.0;
  for (int a = 0; a < n; ++a) {
    for (int ap = 0; ap < n; ++ap) {
      int jmax = 0, jmin = 0, kmax = 0, kmin = 0;
      double vmax = -1e300, vmin = 1e300, wmax = -1e300, wmin = 1e300;
      for (int j = 0; j < n; ++j) {
        const double v = table(a, j) + table(ap, j);
        const double w = table(a, j) - table(ap, j);
        if (v > vmax) { vmax = v; jmax = j; }
        if (v < vmin) { vmin = v; jmin = j; }
        if (w > wmax) { wmax = w; kmax = j; }
        if (w < wmin) { wmin = w; kmin = j; }
      }
      if (vmax + wmax > best_abs) {
        best_abs = vmax + wmax;
        best_idx = {a, ap, jmax, kmax};
      }
      if (-(vmin + wmin) > best_abs) {
        best_abs = -(vmin + wmin);
        best_idx = {a, ap, jmin, kmin};
      }
    }
  }

  // Stage 2: compass refinement on the continuous parameters.
  const int n_params = (!cat && options.full_sphere) ? 8 : 4;
  std::vector<double> x(n_params, 0.0);
  for (int i = 0; i < 4; ++i) {
    x[i] = best_idx[i] * spacing;
  }
  std::array<Matrix, 4> obs;
  std::array<Matrix, 2> sand;
  auto rebuild = [&](int setting) {
    obs[setting] = observable_at(x[setting], n_params == 8 ? x[4 + setting] : 0.0);
    if (setting < 2) {
      sand[setting] = sandwich(psi, obs[setting]);
    }
  };
  auto evaluate = [&]() {
    return pair_correlation(sand[kA], obs[kB]) + pair_correlation(sand[kA], obs[kBPrime]) +
           pair_correlation(sand[kAPrime], obs[kB]) - pair_correlation(sand[kAPrime], obs[kBPrime]);
  };
  for (int i = 0; i < 4; ++i) {
    rebuild(i);
  }
  double current = std::abs(evaluate());
  double step = 0.5 * spacing;
  for (int iter = 0; iter < options.max_iterations && step >= options.step_tolerance; ++iter) {
    int best_param = -1;
    double best_delta = 0.0;
    double best_value = current;
    for (int p = 0; p < n_params; ++p) {
      const double saved = x[p];
      for (double delta : {step, -step}) {
        x[p] = saved + delta;
        rebuild(p % 4);
        const double value = std::abs(evaluate());
        if (value > best_value) {
          best_value = value;
          best_param = p;
          best_delta = delta;
        }
      }
      x[p] = saved;
      rebuild(p % 4);
    }
    if (best_param >= 0) {
      x[best_param] += best_delta;
      rebuild(best_param % 4);
      current = best_value;
    } else {
      step *= 0.5;
    }
  }

  ChshSettings settings;
  for (int i = 0; i < 4; ++i) {
    if (cat) {
      settings.cat_angles[i] = x[i];
      settings.directions[i] = prototype.direction;
    } else {
      settings.directions[i] = setting_direction(x[i], n_params == 8 ? x[4 + i] : 0.0);
    }
  }
  ChshResult r;
  r.settings = settings;
  r.correlations = {pair_correlation(sand[kA], obs[kB]), pair_correlation(sand[kA], obs[kBPrime]),
                    pair_correlation(sand[kAPrime], obs[kB]), pair_correlation(sand[kAPrime], obs[kBPrime])};
  r.S = r.correlations[0] + r.correlations[1] + r.correlations[2] - r.correlations[3];
  return r;
}

namespace {

// Distance from 0 along `direction` at which g first drops to <= 0, found by
// marching in fixed steps and bisecting the bracketing interval.
double first_crossing(const std::function<double(double)>& g, double direction, double max_reach) {
  constexpr double kMarch = 1e-3;
  double inside = 0.0;
  for (double t = kMarch; t <= max_reach; t += kMarch) {
    if (g(direction * t) <= 0.0) {
      double lo = inside, hi = t;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (g(direction * mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    inside = t;
  }
  return max_reach;
}

}  // namespace

std::vector<ViolationWindow> violation_window(const std::vector<SpinLength>& spins, const ScanOptions& options) {
  std::vector<ViolationWindow> rows;
  rows.reserve(spins.size());
  for (const SpinLength s : spins) {
    if (!s.is_half_integer()) {
      throw std::invalid_argument("violation window is defined for half-integer spins only");
    }
    const TwoSpinState psi = singlet_state(s);
    DichotomicMeasurement prototype;
    prototype.kind = MeasurementKind::sharp_sign;
    ScanOptions coplanar = options;
    coplanar.full_sphere = false;
    const ChshResult best = chsh_scan(psi, prototype, coplanar);

    ViolationWindow row{s};
    row.best_abs_s = std::abs(best.S);
    row.violated = row.best_abs_s > 2.0;
    if (row.violated) {
      const ObservableFamily family(s, prototype);
      const Matrix m = psi.as_matrix();
      std::array<Matrix, 4> obs;
      for (int i = 0; i < 4; ++i) {
        obs[i] = family.at_direction(best.settings.directions[i]);
      }
      const Eigen::Vector3d normal = Eigen::Vector3d::UnitY();
      row.half_width = kPi;
      // Each setting is rotated alone about the normal of the measurement
      // plane; the narrowest window sets the accuracy the experiment needs.
      for (int i = 0; i < 4; ++i) {
        const Eigen::Vector3d d0 = best.settings.directions[i].unit_vector();
        auto g = [&](double delta) {
          std::array<Matrix, 4> o = obs;
          o[i] = family.at_direction(SphereDirection::from_vector(Eigen::AngleAxisd(delta, normal) * d0));
          const Matrix sand_a = sandwich(m, o[kA]);
          const Matrix sand_ap = sandwich(m, o[kAPrime]);
          const double value = pair_correlation(sand_a, o[kB]) + pair_correlation(sand_a, o[kBPrime]) +
                               pair_correlation(sand_ap, o[kB]) - pair_correlation(sand_ap, o[kBPrime]);
          return std::abs(value) - 2.0;
        };
        const double plus = first_crossing(g, 1.0, kPi);
        const double minus = first_crossing(g, -1.0, kPi);
        if (0.5 * (plus + minus) < row.half_width) {
          row.half_width = 0.5 * (plus + minus);
          row.width_plus = plus;
          row.width_minus = minus;
          row.setting = i;
        }
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qlab
