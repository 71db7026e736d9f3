#include "qlab/state_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qlab {

TwoSpinState parse_state_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("two_s") || !doc.contains("amplitudes")) {
    throw std::invalid_argument("state file needs 'two_s' and 'amplitudes'");
  }
  if (!doc["two_s"].is_number_integer()) {
    throw std::invalid_argument("state file: 'two_s' must be an integer");
  }
  const SpinLength s(doc["two_s"].get<int>());
  const auto& amps = doc["amplitudes"];
  const std::size_t expected = static_cast<std::size_t>(s.dim()) * s.dim();
  if (!amps.is_array() || amps.size() != expected) {
    throw std::invalid_argument("state file: expected " + std::to_string(expected) + " amplitudes");
  }
  Vector v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& a = amps[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw std::invalid_argument("state file: amplitude " + std::to_string(i) + " must be [re, im]");
    }
    v(static_cast<Eigen::Index>(i)) = Complex(a[0].get<double>(), a[1].get<double>());
  }
  const double norm = v.norm();
  if (!(std::abs(norm - 1.0) <= 1e-6)) {
    throw std::invalid_argument("state file: amplitudes have norm " + std::to_string(norm) + ", expected 1");
  }
  v /= norm;
  return {s, std::move(v)};
}

TwoSpinState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open state file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_state_json(buffer.str());
}

std::string state_to_json(const TwoSpinState& state) {
  nlohmann::json doc;
  doc["two_s"] = state.spin.two_s();
  auto& amps = doc["amplitudes"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    amps.push_back({state.amplitudes(i).real(), state.amplitudes(i).imag()});
  }
  return doc.dump();
}

}  // namespace qlab
