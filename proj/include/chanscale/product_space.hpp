#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "chanscale/core.hpp"
#include "chanscale/errors.hpp"

namespace chanscale {

namespace detail {

inline Index checkedProduct(std::span<const Index> cards, const char* what) {
  Index total = 1;
  for (Index c : cards) {
    if (c < 1) throw StructuralError(std::string(what) + ": cardinality must be >= 1");
    if (total > std::numeric_limits<Index>::max() / c)
      throw StructuralError(std::string(what) + ": index range overflow");
    total *= c;
  }
  return total;
}

}  // namespace detail

// Mixed-radix flattening, last coordinate fastest. Empty coordinate lists encode the
// one-point space (flat index 0).
inline Index flattenIndex(std::span<const Index> coords, std::span<const Index> cards) {
  if (coords.size() != cards.size())
    throw StructuralError("flattenIndex: coordinate/cardinality rank mismatch");
  Index flat = 0;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= cards[i])
      throw StructuralError("flattenIndex: coordinate " + std::to_string(i) + " out of range");
    flat = flat * cards[i] + coords[i];
  }
  return flat;
}

inline std::vector<Index> unflattenIndex(Index flat, std::span<const Index> cards) {
  std::vector<Index> coords(cards.size());
  for (std::size_t i = cards.size(); i-- > 0;) {
    coords[i] = flat % cards[i];
    flat /= cards[i];
  }
  if (flat != 0) throw StructuralError("unflattenIndex: flat index out of range");
  return coords;
}

// Factorized domain X_1 x .. x X_N -> Y_1 x .. x Y_M of a channel. Immutable.
// An empty input list is the one-point input space (|X| = 1); it shows up as the
// reduced space of a marginal with I = {} and carries single-row channels.
class ProductSpace {
 public:
  ProductSpace(std::vector<Index> inputCards, std::vector<Index> outputCards)
      : inputCards_(std::move(inputCards)), outputCards_(std::move(outputCards)) {
    if (outputCards_.empty()) throw StructuralError("ProductSpace: needs at least one output factor");
    inputSize_ = detail::checkedProduct(inputCards_, "ProductSpace inputs");
    outputSize_ = detail::checkedProduct(outputCards_, "ProductSpace outputs");
    if (inputSize_ > std::numeric_limits<Index>::max() / outputSize_)
      throw StructuralError("ProductSpace: joint index range overflow");
  }

  Index inputFactors() const { return static_cast<Index>(inputCards_.size()); }
  Index outputFactors() const { return static_cast<Index>(outputCards_.size()); }
  const std::vector<Index>& inputCards() const { return inputCards_; }
  const std::vector<Index>& outputCards() const { return outputCards_; }

  Index inputSize() const { return inputSize_; }    // |X|
  Index outputSize() const { return outputSize_; }  // |Y|
  Index jointSize() const { return inputSize_ * outputSize_; }

  Index encodeInput(std::span<const Index> coords) const { return flattenIndex(coords, inputCards_); }
  Index encodeOutput(std::span<const Index> coords) const { return flattenIndex(coords, outputCards_); }
  std::vector<Index> decodeInput(Index x) const { return unflattenIndex(x, inputCards_); }
  std::vector<Index> decodeOutput(Index y) const { return unflattenIndex(y, outputCards_); }

  // Joint cells flatten inputs before outputs.
  Index encodeJoint(Index x, Index y) const { return x * outputSize_ + y; }

  bool operator==(const ProductSpace& other) const = default;

 private:
  std::vector<Index> inputCards_;
  std::vector<Index> outputCards_;
  Index inputSize_ = 1;
  Index outputSize_ = 1;
};

// A pair of factor subsets (I, J): I indexes input factors (may be empty), J indexes
// output factors (must not be empty; there is no conditional without an output).
// Subsets are stored sorted; duplicates are rejected.
class MarginalSpec {
 public:
  MarginalSpec(std::vector<Index> inputs, std::vector<Index> outputs)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (outputs_.empty()) throw StructuralError("MarginalSpec: J must be nonempty");
    normalize(inputs_, "MarginalSpec: I");
    normalize(outputs_, "MarginalSpec: J");
  }

  const std::vector<Index>& inputs() const { return inputs_; }
  const std::vector<Index>& outputs() const { return outputs_; }

  void validateFor(const ProductSpace& space) const {
    for (Index i : inputs_)
      if (i < 0 || i >= space.inputFactors())
        throw StructuralError("MarginalSpec: input factor " + std::to_string(i) + " out of range");
    for (Index j : outputs_)
      if (j < 0 || j >= space.outputFactors())
        throw StructuralError("MarginalSpec: output factor " + std::to_string(j) + " out of range");
  }

  bool operator==(const MarginalSpec& other) const = default;

 private:
  static void normalize(std::vector<Index>& v, const char* what) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      throw StructuralError(std::string(what) + " contains a duplicate factor index");
    if (!v.empty() && v.front() < 0)
      throw StructuralError(std::string(what) + " contains a negative factor index");
  }

  std::vector<Index> inputs_;
  std::vector<Index> outputs_;
};

// Gather maps from full flat indices to reduced flat indices for one (space, spec)
// pair. Built once, reused across sweeps.
class MarginalIndexer {
 public:
  MarginalIndexer(const ProductSpace& space, const MarginalSpec& spec)
      : reduced_(makeReduced(space, spec)) {
    xGroup_.resize(space.inputSize());
    for (Index x = 0; x < space.inputSize(); ++x)
      xGroup_[x] = groupIndex(x, space.inputCards(), spec.inputs());
    yGroup_.resize(space.outputSize());
    for (Index y = 0; y < space.outputSize(); ++y)
      yGroup_[y] = groupIndex(y, space.outputCards(), spec.outputs());
  }

  const ProductSpace& reducedSpace() const { return reduced_; }
  Index inputGroup(Index x) const { return xGroup_[x]; }
  Index outputGroup(Index y) const { return yGroup_[y]; }

 private:
  static ProductSpace makeReduced(const ProductSpace& space, const MarginalSpec& spec) {
    spec.validateFor(space);
    std::vector<Index> in, out;
    in.reserve(spec.inputs().size());
    out.reserve(spec.outputs().size());
    for (Index i : spec.inputs()) in.push_back(space.inputCards()[i]);
    for (Index j : spec.outputs()) out.push_back(space.outputCards()[j]);
    return ProductSpace(std::move(in), std::move(out));
  }

  static Index groupIndex(Index flat, const std::vector<Index>& cards, const std::vector<Index>& subset) {
    std::vector<Index> coords = unflattenIndex(flat, cards);
    Index g = 0;
    for (Index k : subset) g = g * cards[k] + coords[k];
    return g;
  }

  ProductSpace reduced_;
  std::vector<Index> xGroup_;
  std::vector<Index> yGroup_;
};

}  // namespace chanscale
