#pragma once

// Dichotomic spin measurements, pair correlations and CHSH evaluation with a
// deterministic coarse-to-fine settings scan.

#include "qlab/povm.hpp"
#include "qlab/spin.hpp"

#include <array>
#include <vector>

namespace qlab {

enum class MeasurementKind { sharp_sign, slot_coarse, cat_hemisphere };

/// Where the m = 0 eigenspace of an integer spin goes for sharp-sign.
enum class ZeroRule { plus, minus };

struct DichotomicMeasurement {
  MeasurementKind kind = MeasurementKind::sharp_sign;
  SphereDirection direction{};  // measurement axis; hemisphere axis for cat-hemisphere
  ZeroRule zero_rule = ZeroRule::plus;
  int n_bands = 2;              // slot-coarse: polar bands about direction
  std::vector<int> slot_signs;  // slot-coarse: +-1 per band; empty means +1 for bands centred on the axis side
  double cat_angle = 0.0;       // cat-hemisphere: alpha of the cat rotation
  double oversample = 1.0;      // grid oversampling for slot integrals
};

struct Effects {
  Matrix plus;
  Matrix minus;

  Matrix observable() const { return plus - minus; }
};

Effects measurement_effects(const DichotomicMeasurement& meas, SpinLength s);

/// Effects of an arbitrary slot POVM with one sign per slot.
Effects slot_effects(const SlotPovm& povm, const std::vector<int>& signs);

/// Default band signs: +1 for bands whose centre is within pi/2 of the axis.
std::vector<int> default_band_signs(int n_bands);

/// <psi| O_A (x) O_B |psi>
double correlation(const TwoSpinState& state, const Matrix& observable_a, const Matrix& observable_b);
double correlation(const TwoSpinState& state, const DichotomicMeasurement& a, const DichotomicMeasurement& b);

/// Settings in the order a, a', b, b'. For cat-hemisphere the cat angles are
/// the settings and the directions are ignored in favour of the prototype axis.
struct ChshSettings {
  std::array<SphereDirection, 4> directions{};
  std::array<double, 4> cat_angles{};
};

struct ChshResult {
  ChshSettings settings;
  std::array<double, 4> correlations{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
  double S = 0.0;
};

/// S = E(a,b) + E(a,b') + E(a',b) - E(a',b') with every measurement built from
/// the prototype (kind and parameters) at the given settings.
ChshResult chsh(const TwoSpinState& state, const ChshSettings& settings, const DichotomicMeasurement& prototype);

struct ScanOptions {
  int resolution = 72;          // grid points per setting angle
  double step_tolerance = 1e-8; // refinement stops once the step drops below this (rad)
  int max_iterations = 100000;
  bool full_sphere = false;     // also refine the azimuth of every setting
};

/// Maximizes |S|: exhaustive scan of coplanar settings (cat angles for
/// cat-hemisphere) on a uniform grid, then compass refinement. Ties resolve to
/// the lexicographically first grid point.
ChshResult chsh_scan(const TwoSpinState& state, const DichotomicMeasurement& prototype, const ScanOptions& options = {});

struct ViolationWindow {
  SpinLength spin;
  double best_abs_s = 0.0;
  bool violated = false;
  double half_width = 0.0;  // mean of the two one-sided widths, radians
  double width_minus = 0.0;
  double width_plus = 0.0;
  int setting = -1;         // index (a, a', b, b') of the narrowest window
};

/// Sharp-sign CHSH on the singlet: for each (half-integer) s, the angular
/// half-width over which |S| > 2 survives when one setting is detuned alone,
/// minimized over the four settings.
std::vector<ViolationWindow> violation_window(const std::vector<SpinLength>& spins, const ScanOptions& options = {});

}  // namespace qlab
