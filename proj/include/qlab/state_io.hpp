#pragma once

#include "qlab/spin.hpp"

#include <string>

namespace qlab {

/// JSON state file: {"two_s": <int>, "amplitudes": [[re, im], ...]} with
/// (2s+1)^2 entries in (m_A, m_B) order, m ascending, m_A major. The norm
/// must be 1 within 1e-6 and is then renormalized exactly.
TwoSpinState parse_state_json(const std::string& text);
TwoSpinState load_state_file(const std::string& path);
std::string state_to_json(const TwoSpinState& state);

}  // namespace qlab
