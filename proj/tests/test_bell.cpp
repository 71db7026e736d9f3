#include "qlab/bell.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

using namespace qlab;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

DichotomicMeasurement along(MeasurementKind kind, double t) {
  DichotomicMeasurement m;
  m.kind = kind;
  m.direction = SphereDirection::coplanar(t);
  return m;
}

}  // namespace

TEST_CASE("effects are complete and positive for every kind") {
  for (int two_s : {1, 2, 5, 8}) {
    const SpinLength s(two_s);
    for (auto kind : {MeasurementKind::sharp_sign, MeasurementKind::slot_coarse, MeasurementKind::cat_hemisphere}) {
      DichotomicMeasurement m;
      m.kind = kind;
      m.direction = SphereDirection::make(1.1, 0.7);
      m.n_bands = 3;
      m.cat_angle = 0.4;
      const Effects e = measurement_effects(m, s);
      CHECK(max_abs(e.plus + e.minus - Matrix::Identity(s.dim(), s.dim())) < 1e-12);
      for (const Matrix& p : {e.plus, e.minus}) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(p);
        CHECK(solver.eigenvalues().minCoeff() > -1e-12);
      }
    }
  }
}

TEST_CASE("sharp-sign effects along +z at s = 1/2") {
  const Effects e = measurement_effects(DichotomicMeasurement{}, SpinLength(1));
  Matrix up = Matrix::Zero(2, 2);
  up(1, 1) = 1.0;
  CHECK(max_abs(e.plus - up) < 1e-15);
  CHECK(max_abs(e.minus - (Matrix::Identity(2, 2) - up)) < 1e-15);
}

TEST_CASE("zero eigenvalue assignment for integer spin") {
  DichotomicMeasurement m;
  const SpinLength s(2);
  CHECK(measurement_effects(m, s).plus(1, 1).real() == 1.0);
  m.zero_rule = ZeroRule::minus;
  CHECK(measurement_effects(m, s).minus(1, 1).real() == 1.0);
}

TEST_CASE("slot-coarse hemisphere effects at s = 1/2 are half-sharp") {
  const SphereDirection n = SphereDirection::make(0.8, 2.0);
  DichotomicMeasurement m;
  m.kind = MeasurementKind::slot_coarse;
  m.direction = n;
  const Effects e = measurement_effects(m, SpinLength(1));
  const Matrix sn = spin_component(SpinLength(1), n).entries;  // sigma.n / 2
  CHECK(max_abs(e.plus - (Matrix::Identity(2, 2) + sn) / 2) < 1e-13);
  CHECK(max_abs(e.minus - (Matrix::Identity(2, 2) - sn) / 2) < 1e-13);
}

TEST_CASE("cat-hemisphere effect at zero angle covers the top state") {
  DichotomicMeasurement m;
  m.kind = MeasurementKind::cat_hemisphere;
  const Effects e = measurement_effects(m, SpinLength(20));
  CHECK(e.plus(20, 20).real() > 0.999);
}

TEST_CASE("default band signs") {
  CHECK(default_band_signs(2) == std::vector<int>{1, -1});
  CHECK(default_band_signs(3) == std::vector<int>{1, 1, -1});
  CHECK(default_band_signs(6) == std::vector<int>{1, 1, 1, -1, -1, -1});
}

TEST_CASE("singlet correlations at s = 1/2") {
  const TwoSpinState psi = singlet_state(SpinLength(1));
  CHECK(correlation(psi, along(MeasurementKind::sharp_sign, 0), along(MeasurementKind::sharp_sign, 0)) ==
        doctest::Approx(-1.0));
  for (double gamma : {0.3, 1.0, 2.2}) {
    CHECK(correlation(psi, along(MeasurementKind::sharp_sign, 0.1), along(MeasurementKind::sharp_sign, 0.1 + gamma)) ==
          doctest::Approx(-std::cos(gamma)).epsilon(1e-10));
    CHECK(correlation(psi, along(MeasurementKind::slot_coarse, 0.1),
                      along(MeasurementKind::slot_coarse, 0.1 + gamma)) ==
          doctest::Approx(-std::cos(gamma) / 4).epsilon(1e-12));
  }
}

TEST_CASE("CHSH at fixed optimal settings") {
  const TwoSpinState psi = singlet_state(SpinLength(1));
  ChshSettings st;
  st.directions = {SphereDirection::coplanar(0), SphereDirection::coplanar(kPi / 2),
                   SphereDirection::coplanar(kPi / 4), SphereDirection::coplanar(-kPi / 4)};
  const ChshResult sharp = chsh(psi, st, DichotomicMeasurement{});
  CHECK(std::abs(sharp.S) == doctest::Approx(kTsirelson).epsilon(1e-6));
  CHECK(sharp.S == doctest::Approx(sharp.correlations[0] + sharp.correlations[1] + sharp.correlations[2] -
                                   sharp.correlations[3]));
  DichotomicMeasurement coarse;
  coarse.kind = MeasurementKind::slot_coarse;
  CHECK(std::abs(chsh(psi, st, coarse).S) == doctest::Approx(kTsirelson / 4).epsilon(1e-12));
}

TEST_CASE("scan recovers the known optima") {
  CHECK(std::abs(chsh_scan(singlet_state(SpinLength(1)), DichotomicMeasurement{}).S) ==
        doctest::Approx(kTsirelson).epsilon(1e-4));
  // Reference optima from multi-start Nelder-Mead on dense matrices.
  CHECK(std::abs(chsh_scan(singlet_state(SpinLength(3)), DichotomicMeasurement{}).S) ==
        doctest::Approx(2.349447116359087).epsilon(1e-9));
  CHECK(std::abs(chsh_scan(singlet_state(SpinLength(5)), DichotomicMeasurement{}).S) ==
        doctest::Approx(2.2273421863729244).epsilon(1e-9));
}

TEST_CASE("scan result is consistent with a direct evaluation") {
  const TwoSpinState psi = random_state(SpinLength(3), 8);
  ScanOptions o;
  o.resolution = 24;
  o.full_sphere = true;
  const ChshResult r = chsh_scan(psi, DichotomicMeasurement{}, o);
  const ChshResult again = chsh(psi, r.settings, DichotomicMeasurement{});
  CHECK(again.S == doctest::Approx(r.S).epsilon(1e-10));
  ScanOptions plane = o;
  plane.full_sphere = false;
  CHECK(std::abs(r.S) >= std::abs(chsh_scan(psi, DichotomicMeasurement{}, plane).S) - 1e-9);
}

TEST_CASE("cat-hemisphere CHSH on the macro-entangled state") {
  DichotomicMeasurement cat;
  cat.kind = MeasurementKind::cat_hemisphere;
  const double ref[] = {1.5909902576697321, 2.4859222776089562, 2.806373196206986, 2.8284217299521535};
  const int two_s[] = {2, 4, 8, 20};
  double previous = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double v = std::abs(chsh_scan(macro_entangled_state(SpinLength(two_s[i])), cat).S);
    CHECK(v == doctest::Approx(ref[i]).epsilon(1e-8));
    CHECK(v >= previous);
    previous = v;
  }
}

TEST_CASE("slot-coarse CHSH never exceeds the local bound") {
  SUBCASE("scanned, singlet s = 10, six bands") {
    DichotomicMeasurement coarse;
    coarse.kind = MeasurementKind::slot_coarse;
    coarse.n_bands = 6;
    CHECK(std::abs(chsh_scan(singlet_state(SpinLength(20)), coarse).S) <= 2.0 + 1e-6);
  }
  SUBCASE("random states, partitions and settings") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> pick_spin(0, 2);
    std::uniform_int_distribution<int> pick_bands(2, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int spins[] = {1, 4, 20};
    double worst = 0.0;
    for (int trial = 0; trial < 120; ++trial) {
      const SpinLength s(spins[pick_spin(rng)]);
      const TwoSpinState psi = random_state(s, rng());
      // One partition per party, reused at that party's two settings.
      DichotomicMeasurement proto[2];
      for (auto& p : proto) {
        p.kind = MeasurementKind::slot_coarse;
        p.n_bands = pick_bands(rng);
        p.slot_signs.resize(p.n_bands);
        for (int& sign : p.slot_signs) sign = unit(rng) < 0.5 ? 1 : -1;
      }
      std::array<Matrix, 4> obs;
      for (int i = 0; i < 4; ++i) {
        DichotomicMeasurement m = proto[i / 2];
        m.direction = SphereDirection::make(std::acos(2 * unit(rng) - 1), 2 * kPi * unit(rng));
        obs[i] = measurement_effects(m, s).observable();
      }
      const double S = correlation(psi, obs[0], obs[2]) + correlation(psi, obs[0], obs[3]) +
                       correlation(psi, obs[1], obs[2]) - correlation(psi, obs[1], obs[3]);
      worst = std::max(worst, std::abs(S));
    }
    CHECK(worst <= 2.0 + 1e-6);
  }
}

TEST_CASE("scan is deterministic") {
  const TwoSpinState psi = random_state(SpinLength(2), 4);
  DichotomicMeasurement coarse;
  coarse.kind = MeasurementKind::slot_coarse;
  const ChshResult a = chsh_scan(psi, coarse);
  const ChshResult b = chsh_scan(psi, coarse);
  CHECK(a.S == b.S);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.settings.directions[i].theta == b.settings.directions[i].theta);
    CHECK(a.settings.directions[i].phi == b.settings.directions[i].phi);
  }
}

TEST_CASE("violation window") {
  const auto rows = violation_window({SpinLength(1), SpinLength(3), SpinLength(5), SpinLength(7)});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].half_width == doctest::Approx(1.1437177404024204).epsilon(1e-8));
  CHECK(rows[0].half_width > 0.1);
  CHECK(rows[0].half_width < 1.2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].violated);
    CHECK(rows[i].half_width <= rows[i - 1].half_width);
  }
  CHECK_THROWS_AS(violation_window({SpinLength(2)}), std::invalid_argument);
}
