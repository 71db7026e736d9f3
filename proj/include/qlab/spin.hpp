#pragma once

// Spin-s Hilbert space: basis conventions, generators, rotations, coherent
// states and the two-party states used throughout the library.
//
// Basis: |m>, m = -s..+s in ascending order, so index i <-> m = i - s.
// Two-party vectors are indexed (m_A, m_B) with m_A major. hbar = 1.

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <numbers>
#include <vector>

namespace qlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

/// Spin length stored as the integer 2s so half-integers stay exact.
class SpinLength {
 public:
  explicit SpinLength(int two_s);

  int two_s() const { return two_s_; }
  int dim() const { return two_s_ + 1; }
  double value() const { return 0.5 * two_s_; }
  bool is_half_integer() const { return two_s_ % 2 == 1; }

  /// m for basis index i (ascending order).
  double m_at(int index) const { return 0.5 * (2 * index - two_s_); }

  auto operator<=>(const SpinLength&) const = default;

 private:
  int two_s_;
};

/// Point on the unit sphere, theta in [0, pi], phi in [0, 2pi).
struct SphereDirection {
  double theta = 0.0;
  double phi = 0.0;

  /// Normalizes arbitrary angles into the canonical ranges.
  static SphereDirection make(double theta, double phi);
  /// Direction at angle t from +z inside the xz-plane (t measured towards +x).
  static SphereDirection coplanar(double t);
  static SphereDirection from_vector(const Eigen::Vector3d& v);

  Eigen::Vector3d unit_vector() const;
};

/// Angle between two directions.
double angular_distance(const SphereDirection& a, const SphereDirection& b);

struct SpinOperator {
  SpinLength spin;
  Matrix entries;
};

struct SpinGenerators {
  Matrix x, y, z;
};

SpinGenerators spin_generators(SpinLength s);

/// Wigner small-d matrix d^s_{m'm}(beta) = <m'|exp(-i beta S_y)|m>, rows m'.
RealMatrix wigner_small_d(SpinLength s, double beta);

/// R(theta, phi) = exp(-i phi S_z) d^s(theta); maps |s> onto the coherent
/// state along dir up to a global phase.
SpinOperator rotation(SpinLength s, const SphereDirection& dir);

/// n . S for the unit vector of dir.
SpinOperator spin_component(SpinLength s, const SphereDirection& dir);

/// <m|Omega> = sqrt(C(2s, s+m)) cos^{s+m}(theta/2) sin^{s-m}(theta/2) e^{i(s-m)phi}.
Vector coherent_amplitudes(SpinLength s, const SphereDirection& dir);

/// Real rotation by alpha inside span{|s>, |-s>}, identity elsewhere.
SpinOperator cat_rotation(SpinLength s, double alpha);

/// Pure state of two spin-s systems.
struct TwoSpinState {
  SpinLength spin;
  Vector amplitudes;  // length dim^2, (m_A, m_B) with m_A major

  /// Amplitudes reshaped to dim x dim with rows m_A, columns m_B.
  Matrix as_matrix() const;
  static TwoSpinState from_matrix(SpinLength s, const Matrix& psi);

  double norm() const { return amplitudes.norm(); }
};

/// Generalized singlet sum_m (-1)^{s-m} |m>|-m> / sqrt(2s+1).
TwoSpinState singlet_state(SpinLength s);

/// (|s>|-s> + |-s>|s>) / sqrt(2); s = 0 is rejected.
TwoSpinState macro_entangled_state(SpinLength s);

/// Product of two coherent states.
TwoSpinState product_state(SpinLength s, const SphereDirection& a, const SphereDirection& b);

/// Haar-like random pure state from a seeded generator.
TwoSpinState random_state(SpinLength s, unsigned long long seed);

/// Density operator on the two-party space, same index order as TwoSpinState.
struct DensityOperator {
  SpinLength spin;
  Matrix rho;

  static DensityOperator from_state(const TwoSpinState& psi);
  double trace() const { return rho.trace().real(); }
};

/// Reduced state of party A (party == 0) or B (party == 1).
Matrix partial_trace(const DensityOperator& rho, int party);

/// Convex decomposition sum_k w_k |psi_k><psi_k| with each psi_k stored as a
/// dim x dim amplitude matrix. Every Q-function kernel works on this form.
struct StateEnsemble {
  SpinLength spin;
  std::vector<double> weights;
  std::vector<Matrix> components;

  static StateEnsemble from_state(const TwoSpinState& psi);
  /// Eigendecomposition; eigenvalues below -1e-10 are rejected as non-PSD.
  static StateEnsemble from_density(const DensityOperator& rho);

  DensityOperator to_density() const;
};

}  // namespace qlab
