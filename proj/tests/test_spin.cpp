#include "qlab/spin.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace qlab;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spin length keeps half-integers exact") {
  const SpinLength s(3);
  CHECK(s.dim() == 4);
  CHECK(s.value() == 1.5);
  CHECK(s.is_half_integer());
  CHECK(s.m_at(0) == -1.5);
  CHECK(s.m_at(3) == 1.5);
  CHECK_FALSE(SpinLength(4).is_half_integer());
  CHECK_THROWS_AS(SpinLength(-1), std::invalid_argument);
}

TEST_CASE("generators satisfy the angular momentum algebra") {
  for (int two_s : {1, 2, 5, 12}) {
    const SpinLength s(two_s);
    const SpinGenerators g = spin_generators(s);
    const Complex i(0.0, 1.0);
    CHECK(max_abs(g.x * g.y - g.y * g.x - i * g.z) < 1e-12);
    CHECK(max_abs(g.y * g.z - g.z * g.y - i * g.x) < 1e-12);
    const Matrix casimir = g.x * g.x + g.y * g.y + g.z * g.z;
    const double j = s.value();
    CHECK(max_abs(casimir - j * (j + 1) * Matrix::Identity(s.dim(), s.dim())) < 1e-11);
  }
}

TEST_CASE("small-d matrix matches dense exponential") {
  // Reference entries from exp(-i beta S_y) evaluated with a dense matrix exponential.
  const RealMatrix d = wigner_small_d(SpinLength(3), 0.7);
  const double ref[4][4] = {{0.828922296608466, 0.524084380677732, 0.191305732642928, 0.040317549193084},
                            {-0.524084380677732, 0.60802146413064, 0.56484296733165, 0.191305732642928},
                            {0.191305732642928, -0.56484296733165, 0.60802146413064, 0.524084380677732},
                            {-0.040317549193084, 0.191305732642928, -0.524084380677732, 0.828922296608466}};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      CHECK(d(r, c) == doctest::Approx(ref[r][c]).epsilon(1e-13));
    }
  }
  CHECK(wigner_small_d(SpinLength(4), 1.3)(3, 0) == doctest::Approx(-0.3529037497532304).epsilon(1e-13));
  // spin 1/2: d(m'=1/2, m=-1/2) = -sin(beta/2)
  CHECK(wigner_small_d(SpinLength(1), 0.9)(1, 0) == doctest::Approx(-std::sin(0.45)));
}

TEST_CASE("small-d matrix is orthogonal at large spin") {
  const RealMatrix d = wigner_small_d(SpinLength(40), 2.1);
  CHECK((d * d.transpose() - RealMatrix::Identity(41, 41)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("coherent state points along its direction") {
  for (int two_s : {1, 2, 7, 20}) {
    const SpinLength s(two_s);
    const SpinGenerators g = spin_generators(s);
    for (const auto& dir : {SphereDirection::make(0.3, 1.0), SphereDirection::make(2.5, 4.0),
                            SphereDirection::make(kPi / 2, 0.0), SphereDirection{}}) {
      const Vector c = coherent_amplitudes(s, dir);
      CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-13));
      const Eigen::Vector3d n = dir.unit_vector();
      CHECK((c.adjoint() * g.x * c)(0).real() == doctest::Approx(s.value() * n.x()).epsilon(1e-11));
      CHECK((c.adjoint() * g.y * c)(0).real() == doctest::Approx(s.value() * n.y()).epsilon(1e-11));
      CHECK((c.adjoint() * g.z * c)(0).real() == doctest::Approx(s.value() * n.z()).epsilon(1e-11));
    }
  }
}

TEST_CASE("rotation of the top state equals the coherent state up to phase") {
  const SpinLength s(5);
  const SphereDirection dir = SphereDirection::make(1.2, 2.2);
  const SpinOperator r = rotation(s, dir);
  const Vector top = Vector::Unit(s.dim(), s.dim() - 1);
  const Vector rotated = r.entries * top;
  const Vector coherent = coherent_amplitudes(s, dir);
  CHECK(std::abs(coherent.dot(rotated)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs(r.entries * r.entries.adjoint() - Matrix::Identity(s.dim(), s.dim())) < 1e-12);
}

TEST_CASE("direction normalization") {
  const SphereDirection d = SphereDirection::make(-0.4, 0.0);
  CHECK(d.theta == doctest::Approx(0.4));
  CHECK(d.phi == doctest::Approx(kPi));
  CHECK(angular_distance(SphereDirection{}, SphereDirection::make(kPi, 0.0)) == doctest::Approx(kPi));
  CHECK_THROWS_AS(SphereDirection::from_vector(Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("singlet is rotation invariant and has total spin zero") {
  for (int two_s : {1, 2, 3, 6}) {
    const SpinLength s(two_s);
    const TwoSpinState psi = singlet_state(s);
    CHECK(psi.norm() == doctest::Approx(1.0));
    const Matrix m = psi.as_matrix();
    const Matrix r = rotation(s, SphereDirection::make(0.8, 1.7)).entries;
    // (R (x) R) psi == psi  <=>  R M R^T == M
    CHECK(max_abs(r * m * r.transpose() - m) < 1e-12);
    const SpinGenerators g = spin_generators(s);
    CHECK(max_abs(g.z * m + m * g.z.transpose()) < 1e-12);
  }
}

TEST_CASE("macro-entangled state") {
  const SpinLength s(4);
  const Matrix m = macro_entangled_state(s).as_matrix();
  CHECK(std::abs(m(4, 0)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(m(0, 4)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(m.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(macro_entangled_state(SpinLength(0)), std::invalid_argument);
}

TEST_CASE("cat rotation mixes only the extremal states") {
  const SpinLength s(4);
  const Matrix u = cat_rotation(s, 0.3).entries;
  CHECK(max_abs(u * u.adjoint() - Matrix::Identity(5, 5)) < 1e-15);
  CHECK(u(2, 2) == Complex(1.0));
  CHECK(u(4, 4).real() == doctest::Approx(std::cos(0.3)));
  CHECK_THROWS_AS(cat_rotation(SpinLength(0), 0.1), std::invalid_argument);
}

TEST_CASE("random states are seeded and normalized") {
  const SpinLength s(3);
  const TwoSpinState a = random_state(s, 42);
  const TwoSpinState b = random_state(s, 42);
  const TwoSpinState c = random_state(s, 43);
  CHECK(a.norm() == doctest::Approx(1.0));
  CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);
  CHECK((a.amplitudes - c.amplitudes).norm() > 0.1);
}

TEST_CASE("partial trace of the singlet is maximally mixed") {
  const SpinLength s(5);
  const DensityOperator rho = DensityOperator::from_state(singlet_state(s));
  for (int party : {0, 1}) {
    CHECK(max_abs(partial_trace(rho, party) - Matrix::Identity(6, 6) / 6.0) < 1e-14);
  }
  CHECK_THROWS_AS(partial_trace(rho, 2), std::invalid_argument);
}

TEST_CASE("ensemble round trip through the density operator") {
  const SpinLength s(2);
  DensityOperator rho = DensityOperator::from_state(random_state(s, 1));
  rho.rho = 0.6 * rho.rho + 0.4 * DensityOperator::from_state(random_state(s, 2)).rho;
  const StateEnsemble e = StateEnsemble::from_density(rho);
  CHECK(e.weights.size() == 2);
  CHECK(max_abs(e.to_density().rho - rho.rho) < 1e-13);

  DensityOperator bad = rho;
  bad.rho(0, 0) -= 0.5;
  CHECK_THROWS(StateEnsemble::from_density(bad));
}

TEST_CASE("singlet examples") {
  const Matrix half = singlet_state(SpinLength(1)).as_matrix();
  CHECK(half(1, 0).real() == doctest::Approx(1 / std::sqrt(2.0)));  // |1/2, -1/2>
  CHECK(half(0, 1).real() == doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK(std::abs(half(0, 0)) == 0.0);

  const TwoSpinState zero = singlet_state(SpinLength(0));
  CHECK(zero.amplitudes.size() == 1);
  CHECK(zero.amplitudes(0) == Complex(1.0));

  // Total spin operators applied as explicit 9 x 9 matrices.
  const SpinLength one(2);
  const SpinGenerators g = spin_generators(one);
  const Matrix id = Matrix::Identity(3, 3);
  const Vector psi = singlet_state(one).amplitudes;
  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  CHECK(((kron(g.z, id) + kron(id, g.z)) * psi).norm() < 1e-14);
  CHECK(((kron(g.x, id) + kron(id, g.x)) * psi).norm() < 1e-14);
}

TEST_CASE("macro-entangled examples") {
  const Matrix half = macro_entangled_state(SpinLength(1)).as_matrix();
  CHECK(half(1, 0).real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(half(0, 1).real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(half(0, 0)) + std::abs(half(1, 1)) == 0.0);
  const SpinLength five(10);
  const Complex overlap = singlet_state(five).amplitudes.dot(macro_entangled_state(five).amplitudes);
  CHECK(std::abs(overlap) == doctest::Approx(2 / (std::sqrt(2.0) * std::sqrt(11.0))));
}

TEST_CASE("small-d and rotation examples") {
  CHECK((wigner_small_d(SpinLength(6), 0.0) - RealMatrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-15);
  const RealMatrix d = wigner_small_d(SpinLength(1), kPi / 2);
  const double h = 1 / std::sqrt(2.0);
  // rows/columns ascending m: {{cos, sin}, {-sin, cos}} in (-1/2, +1/2) order
  CHECK(d(0, 0) == doctest::Approx(h));
  CHECK(d(0, 1) == doctest::Approx(h));
  CHECK(d(1, 0) == doctest::Approx(-h));
  CHECK(d(1, 1) == doctest::Approx(h));
  CHECK(max_abs(rotation(SpinLength(5), SphereDirection{}).entries - Matrix::Identity(6, 6)) < 1e-15);
  const Matrix r = rotation(SpinLength(2), SphereDirection{kPi / 2, 0.0}).entries;
  CHECK(r(0, 2).real() == doctest::Approx(0.5));
  CHECK(r(1, 2).real() == doctest::Approx(h));
  CHECK(r(2, 2).real() == doctest::Approx(0.5));
  for (int two_s : {1, 4, 9}) {
    const Matrix u = rotation(SpinLength(two_s), SphereDirection::make(2.9, 5.1)).entries;
    CHECK(max_abs(u * u.adjoint() - Matrix::Identity(two_s + 1, two_s + 1)) < 1e-12);
  }
}

TEST_CASE("spin component examples") {
  const Matrix z = spin_component(SpinLength(3), SphereDirection{}).entries;
  for (int i = 0; i < 4; ++i) CHECK(z(i, i).real() == doctest::Approx(-1.5 + i));
  const Matrix x = spin_component(SpinLength(1), SphereDirection{kPi / 2, 0.0}).entries;
  CHECK(x(0, 1).real() == doctest::Approx(0.5));
  CHECK(x(1, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(x(0, 0)) + std::abs(x(1, 1)) < 1e-16);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(spin_component(SpinLength(6), SphereDirection{kPi / 3, kPi / 5}).entries);
  for (int i = 0; i < 7; ++i) CHECK(solver.eigenvalues()(i) == doctest::Approx(-3.0 + i));
}

TEST_CASE("coherent state examples") {
  const SpinLength s(20);
  const Vector north = coherent_amplitudes(s, SphereDirection{});
  CHECK(std::abs(north(20)) == doctest::Approx(1.0));
  const Vector south = coherent_amplitudes(s, SphereDirection{kPi, 0.0});
  CHECK(std::abs(south(0)) == doctest::Approx(1.0));
  CHECK(south.tail(20).norm() < 1e-12);
  const SphereDirection dir{kPi / 4, 1.1};
  const Vector c = coherent_amplitudes(s, dir);
  CHECK((c.adjoint() * spin_component(s, dir).entries * c)(0).real() == doctest::Approx(10.0).epsilon(1e-11));
}

TEST_CASE("cat rotation examples") {
  const SpinLength s(6);
  CHECK(max_abs(cat_rotation(s, 0.0).entries - Matrix::Identity(7, 7)) == 0.0);
  const Vector out = cat_rotation(s, 0.7).entries * Vector::Unit(7, 6);
  CHECK(out(6).real() == doctest::Approx(std::cos(0.7)));
  CHECK(out(0).real() == doctest::Approx(std::sin(0.7)));
  const Vector low = cat_rotation(s, 0.7).entries * Vector::Unit(7, 0);
  CHECK(low(6).real() == doctest::Approx(-std::sin(0.7)));
  CHECK(low(0).real() == doctest::Approx(std::cos(0.7)));
  const Matrix u = cat_rotation(SpinLength(8), 0.3).entries;
  for (int i = 1; i < 8; ++i) CHECK(max_abs(u.col(i) - Vector::Unit(9, i)) == 0.0);
}
