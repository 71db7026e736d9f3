#include "qlab/spin.hpp"

#include "qlab/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// sign(base)^exponent * exp(exponent * log|base|), with 0^0 = 1.
// Returns false when the power vanishes.
bool accumulate_power(double base, int exponent, double& log_magnitude, int& sign) {
  if (exponent == 0) {
    return true;
  }
  if (base == 0.0) {
    return false;
  }
  log_magnitude += exponent * std::log(std::abs(base));
  if (base < 0.0 && (exponent % 2) != 0) {
    sign = -sign;
  }
  return true;
}

}  // namespace

SpinLength::SpinLength(int two_s) : two_s_(two_s) {
  if (two_s < 0) {
    throw std::invalid_argument("spin length 2s must be non-negative, got " + std::to_string(two_s));
  }
}

SphereDirection SphereDirection::make(double theta, double phi) {
  // Reduce theta to [0, 2pi), then reflect through the pole if needed.
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) {
    t += 2.0 * kPi;
  }
  double p = phi;
  if (t > kPi) {
    t = 2.0 * kPi - t;
    p += kPi;
  }
  p = std::fmod(p, 2.0 * kPi);
  if (p < 0.0) {
    p += 2.0 * kPi;
  }
  if (p >= 2.0 * kPi) {
    p = 0.0;
  }
  return {t, p};
}

SphereDirection SphereDirection::coplanar(double t) { return make(t, 0.0); }

SphereDirection SphereDirection::from_vector(const Eigen::Vector3d& v) {
  const double r = v.norm();
  if (r == 0.0) {
    throw std::invalid_argument("direction vector must be non-zero");
  }
  const double z = std::clamp(v.z() / r, -1.0, 1.0);
  const double theta = std::acos(z);
  double phi = std::atan2(v.y(), v.x());
  if (phi < 0.0) {
    phi += 2.0 * kPi;
  }
  if (phi >= 2.0 * kPi) {
    phi = 0.0;
  }
  return {theta, phi};
}

Eigen::Vector3d SphereDirection::unit_vector() const {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

double angular_distance(const SphereDirection& a, const SphereDirection& b) {
  const Eigen::Vector3d u = a.unit_vector();
  const Eigen::Vector3d v = b.unit_vector();
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

SpinGenerators spin_generators(SpinLength s) {
  const int d = s.dim();
  const double j = s.value();
  Matrix raise = Matrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    const double m = s.m_at(i);
    raise(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Matrix lower = raise.adjoint();
  SpinGenerators g;
  g.x = 0.5 * (raise + lower);
  g.y = Complex(0.0, -0.5) * (raise - lower);
  g.z = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    g.z(i, i) = s.m_at(i);
  }
  return g;
}

namespace {

// Closed-form sum; alternating terms cancel badly once 2s grows past ~20.
RealMatrix small_d_sum(SpinLength s, double beta) {
  const int d = s.dim();
  const int two_j = s.two_s();
  const double c = std::cos(0.5 * beta);
  const double sn = std::sin(0.5 * beta);
  std::vector<double> lf(two_j + 1);
  for (int n = 0; n <= two_j; ++n) {
    lf[n] = log_factorial(n);
  }
  RealMatrix out = RealMatrix::Zero(d, d);
  // i = j + m (column), r = j + m' (row); all factorial arguments are integers.
  for (int r = 0; r < d; ++r) {
    for (int i = 0; i < d; ++i) {
      const double log_norm = 0.5 * (lf[i] + lf[two_j - i] + lf[r] + lf[two_j - r]);
      const int k_min = std::max(0, i - r);
      const int k_max = std::min(i, two_j - r);
      double sum = 0.0;
      for (int k = k_min; k <= k_max; ++k) {
        double log_term = log_norm - lf[i - k] - lf[k] - lf[two_j - r - k] - lf[k + r - i];
        int sign = ((k + r - i) % 2 == 0) ? 1 : -1;
        if (!accumulate_power(c, two_j + i - r - 2 * k, log_term, sign)) {
          continue;
        }
        if (!accumulate_power(sn, r - i + 2 * k, log_term, sign)) {
          continue;
        }
        sum += sign * std::exp(log_term);
      }
      out(r, i) = sum;
    }
  }
  return out;
}

struct SyBasis {
  Matrix vectors;
  Eigen::VectorXd values;
};

std::shared_ptr<const SyBasis> sy_basis(SpinLength s) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SyBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[s.two_s()];
  if (!slot) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(spin_generators(s).y);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("S_y eigendecomposition failed");
    }
    slot = std::make_shared<const SyBasis>(SyBasis{solver.eigenvectors(), solver.eigenvalues()});
  }
  return slot;
}

}  // namespace

RealMatrix wigner_small_d(SpinLength s, double beta) {
  if (s.two_s() <= 12) {
    return small_d_sum(s, beta);
  }
  // exp(-i beta S_y) from the spectral decomposition of S_y.
  const auto basis = sy_basis(s);
  Matrix scaled = basis->vectors;
  for (Eigen::Index k = 0; k < scaled.cols(); ++k) {
    scaled.col(k) *= std::polar(1.0, -beta * basis->values(k));
  }
  return (scaled * basis->vectors.adjoint()).real();
}

SpinOperator rotation(SpinLength s, const SphereDirection& dir) {
  const int d = s.dim();
  Matrix r = wigner_small_d(s, dir.theta).cast<Complex>();
  for (int row = 0; row < d; ++row) {
    r.row(row) *= std::polar(1.0, -s.m_at(row) * dir.phi);
  }
  return {s, std::move(r)};
}

SpinOperator spin_component(SpinLength s, const SphereDirection& dir) {
  const SpinGenerators g = spin_generators(s);
  const Eigen::Vector3d n = dir.unit_vector();
  return {s, n.x() * g.x + n.y() * g.y + n.z() * g.z};
}

Vector coherent_amplitudes(SpinLength s, const SphereDirection& dir) {
  const int d = s.dim();
  const int two_s = s.two_s();
  const double c = std::cos(0.5 * dir.theta);
  const double sn = std::sin(0.5 * dir.theta);
  Vector out(d);
  for (int i = 0; i < d; ++i) {
    // i = s + m, two_s - i = s - m
    double log_mag = 0.5 * (log_factorial(two_s) - log_factorial(i) - log_factorial(two_s - i));
    int sign = 1;
    if (!accumulate_power(c, i, log_mag, sign) || !accumulate_power(sn, two_s - i, log_mag, sign)) {
      out(i) = 0.0;
      continue;
    }
    out(i) = std::polar(sign * std::exp(log_mag), (two_s - i) * dir.phi);
  }
  return out;
}

SpinOperator cat_rotation(SpinLength s, double alpha) {
  if (s.two_s() == 0) {
    throw std::invalid_argument("cat rotation needs s >= 1/2");
  }
  const int d = s.dim();
  const int top = d - 1;  // |s>
  const int bottom = 0;   // |-s>
  Matrix u = Matrix::Identity(d, d);
  const double c = std::cos(alpha);
  const double sn = std::sin(alpha);
  u(top, top) = c;
  u(bottom, top) = sn;
  u(top, bottom) = -sn;
  u(bottom, bottom) = c;
  return {s, std::move(u)};
}

Matrix TwoSpinState::as_matrix() const {
  const int d = spin.dim();
  Matrix psi(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      psi(a, b) = amplitudes(a * d + b);
    }
  }
  return psi;
}

TwoSpinState TwoSpinState::from_matrix(SpinLength s, const Matrix& psi) {
  const int d = s.dim();
  if (psi.rows() != d || psi.cols() != d) {
    throw std::invalid_argument("amplitude matrix does not match spin dimension");
  }
  Vector amps(d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      amps(a * d + b) = psi(a, b);
    }
  }
  return {s, std::move(amps)};
}

TwoSpinState singlet_state(SpinLength s) {
  const int d = s.dim();
  Vector amps = Vector::Zero(d * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int a = 0; a < d; ++a) {
    const int b = d - 1 - a;  // m_B = -m_A
    const int s_minus_m = s.two_s() - a;
    amps(a * d + b) = (s_minus_m % 2 == 0) ? norm : -norm;
  }
  return {s, std::move(amps)};
}

TwoSpinState macro_entangled_state(SpinLength s) {
  if (s.two_s() == 0) {
    throw std::invalid_argument("macro-entangled state needs s >= 1/2");
  }
  const int d = s.dim();
  Vector amps = Vector::Zero(d * d);
  const double h = 1.0 / std::sqrt(2.0);
  amps((d - 1) * d + 0) = h;  // |s>|-s>
  amps(0 * d + (d - 1)) = h;  // |-s>|s>
  return {s, std::move(amps)};
}

TwoSpinState product_state(SpinLength s, const SphereDirection& a, const SphereDirection& b) {
  const Vector ca = coherent_amplitudes(s, a);
  const Vector cb = coherent_amplitudes(s, b);
  return TwoSpinState::from_matrix(s, ca * cb.transpose());
}

TwoSpinState random_state(SpinLength s, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = s.dim() * s.dim();
  Vector amps(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    amps(i) = Complex(re, im);
  }
  amps /= amps.norm();
  return {s, std::move(amps)};
}

DensityOperator DensityOperator::from_state(const TwoSpinState& psi) {
  return {psi.spin, psi.amplitudes * psi.amplitudes.adjoint()};
}

Matrix partial_trace(const DensityOperator& rho, int party) {
  const int d = rho.spin.dim();
  if (rho.rho.rows() != d * d || rho.rho.cols() != d * d) {
    throw std::invalid_argument("density operator dimension does not match spin");
  }
  if (party != 0 && party != 1) {
    throw std::invalid_argument("party must be 0 (A) or 1 (B)");
  }
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += party == 0 ? rho.rho(i * d + k, j * d + k) : rho.rho(k * d + i, k * d + j);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

StateEnsemble StateEnsemble::from_state(const TwoSpinState& psi) {
  StateEnsemble e{psi.spin, {1.0}, {psi.as_matrix()}};
  return e;
}

StateEnsemble StateEnsemble::from_density(const DensityOperator& rho) {
  const int d = rho.spin.dim();
  if (rho.rho.rows() != d * d || rho.rho.cols() != d * d) {
    throw std::invalid_argument("density operator dimension does not match spin");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.rho);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of density operator failed");
  }
  const RealVector& values = solver.eigenvalues();
  StateEnsemble e{rho.spin, {}, {}};
  for (Eigen::Index k = values.size() - 1; k >= 0; --k) {
    const double lambda = values(k);
    if (lambda < -1e-10) {
      throw NumericalError("density operator has eigenvalue " + std::to_string(lambda));
    }
    if (lambda <= 1e-14) {
      continue;
    }
    const Vector v = solver.eigenvectors().col(k);
    e.weights.push_back(lambda);
    e.components.push_back(TwoSpinState{rho.spin, v}.as_matrix());
  }
  return e;
}

DensityOperator StateEnsemble::to_density() const {
  const int d = spin.dim();
  Matrix rho = Matrix::Zero(d * d, d * d);
  for (std::size_t k = 0; k < components.size(); ++k) {
    const Vector v = TwoSpinState::from_matrix(spin, components[k]).amplitudes;
    rho += weights[k] * (v * v.adjoint());
  }
  return {spin, std::move(rho)};
}

}  // namespace qlab
