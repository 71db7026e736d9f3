#pragma once

// Order-of-magnitude bounds on angular measurement precision and on the
// largest spin for which non-classical correlations can still be resolved.
// Factors of order one are dropped throughout; every quantity is carried as
// log10 so values like 1e124 never touch the floating-point range limits.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace qlab {

struct ConstantsProfile {
  std::string name;
  double hbar = 0.0;             // J s
  double c = 0.0;                // m / s
  double G = 0.0;                // m^3 kg^-1 s^-2
  double planck_length = 0.0;    // m (stored, not derived)
  double universe_radius = 0.0;  // m
  double universe_mass = 0.0;    // kg

  /// Decade values: hbar 1e-34, c 1e8, G 1e-10, l_P 1e-35, R_U 1e27, M_U 1e53.
  static ConstantsProfile paper_oom();
  /// CODATA values and standard cosmological estimates.
  static ConstantsProfile precise();
  /// "paper-oom" or "precise"; throws std::invalid_argument otherwise.
  static ConstantsProfile named(const std::string& name);

  /// sqrt(hbar G / c^3)
  double derived_planck_length() const;
};

/// Parses `key = value` lines (# comments allowed). Keys are the field names
/// plus `name` and `base` (profile the remaining fields default to). Unknown
/// keys and non-positive values are rejected.
ConstantsProfile parse_constants(const std::string& text);
ConstantsProfile load_constants(const std::string& path);

struct ApparatusScenario {
  std::string label;
  double mass = 0.0;            // kg
  double size = 0.0;            // m, moment of inertia taken as M R^2
  std::optional<double> time;   // s, interaction time

  static ApparatusScenario laboratory();  // 1 kg, 1 m, 1 s
  static ApparatusScenario universe(const ConstantsProfile& k);  // M_U, R_U, 1 s
};

enum class Regime { sql, causal, planck };
enum class Criterion { sqrt, linear };

const char* to_string(Regime r);
const char* to_string(Criterion c);

struct Magnitude {
  double log10 = 0.0;
  double value() const { return std::pow(10.0, log10); }
};

/// sqrt(hbar tau / M) / R; throws std::invalid_argument without tau.
Magnitude sql_angle(const ApparatusScenario& sc, const ConstantsProfile& k);
/// sqrt(hbar / (c M R))
Magnitude causal_angle(const ApparatusScenario& sc, const ConstantsProfile& k);
/// l_P / R
Magnitude planck_angle(const ApparatusScenario& sc, const ConstantsProfile& k);
Magnitude angle_bound(const ApparatusScenario& sc, const ConstantsProfile& k, Regime regime);

/// sqrt criterion: s = 1 / angle^2; linear criterion: s = 1 / angle.
Magnitude max_spin(const ApparatusScenario& sc, const ConstantsProfile& k, Regime regime, Criterion criterion);

/// 2 G M / c^2
Magnitude schwarzschild_radius(double mass, const ConstantsProfile& k);

struct LimitRow {
  std::string scenario;
  Regime regime = Regime::sql;
  Criterion criterion = Criterion::sqrt;
  double log10_angle = 0.0;
  double log10_spin = 0.0;
  double log10_schwarzschild = 0.0;
};

/// One row per scenario x regime x criterion; sql rows are omitted for
/// scenarios without an interaction time.
std::vector<LimitRow> scenario_report(const std::vector<ApparatusScenario>& scenarios, const ConstantsProfile& k);

}  // namespace qlab
