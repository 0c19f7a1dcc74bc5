#pragma once

#include <stdexcept>
#include <string>

#include "chanscale/core.hpp"

namespace chanscale {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape mismatches, invalid constructions, out-of-range indices.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A conditional that cannot be formed: zero X-marginal row in disintegration.
class DegenerateInputError : public Error {
 public:
  DegenerateInputError(const std::string& what, Index x) : Error(what), x_(x) {}
  Index inputIndex() const { return x_; }

 private:
  Index x_;
};

// A kernel row with zero total mass passed to row normalization.
class DegenerateRowError : public Error {
 public:
  DegenerateRowError(const std::string& what, Index x) : Error(what), x_(x) {}
  Index rowIndex() const { return x_; }

 private:
  Index x_;
};

// Prescribed mass on a cell whose current marginal is zero: no finite scaling exists.
class InfeasibleScalingError : public Error {
 public:
  InfeasibleScalingError(const std::string& what, Index cell) : Error(what), cell_(cell) {}
  Index cellIndex() const { return cell_; }

 private:
  Index cell_;
};

}  // namespace chanscale
