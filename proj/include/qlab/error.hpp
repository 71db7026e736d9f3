#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

/// A computation produced a result outside its numerical tolerance, e.g. a
/// POVM element with an eigenvalue far below zero because the grid is too
/// coarse. Contract violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qlab
