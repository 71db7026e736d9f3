#include "qlab/state_io.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace qlab;

TEST_CASE("state JSON round trip is exact") {
  const TwoSpinState psi = random_state(SpinLength(3), 12);
  const TwoSpinState back = parse_state_json(state_to_json(psi));
  CHECK(back.spin == psi.spin);
  CHECK((back.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("state JSON is renormalized within tolerance") {
  const TwoSpinState psi = parse_state_json(R"({"two_s": 1, "amplitudes": [[0,0],[0.7071072,0],[-0.7071064,0],[0,0]]})");
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("malformed state files are rejected") {
  CHECK_THROWS_AS(parse_state_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_json(R"({"amplitudes": []})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_json(R"({"two_s": 1.5, "amplitudes": []})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_json(R"({"two_s": -1, "amplitudes": []})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_json(R"({"two_s": 1, "amplitudes": [[1,0],[0,0],[0,0]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_json(R"({"two_s": 1, "amplitudes": [[1,0],[0,0],[0,0],[0]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_json(R"({"two_s": 1, "amplitudes": [[1,0],[1,0],[0,0],[0,0]]})"), std::invalid_argument);
  CHECK_THROWS_AS(load_state_file("/nonexistent/state.json"), std::invalid_argument);
}
