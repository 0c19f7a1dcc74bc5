#pragma once

#include <string>
#include <utility>

#include "chanscale/core.hpp"
#include "chanscale/detail/validate.hpp"
#include "chanscale/errors.hpp"
#include "chanscale/product_space.hpp"

namespace chanscale {

// Markov kernel k(x;y): an |X| x |Y| array with nonnegative entries and unit row sums
// (within the slack; rows are renormalized exactly at construction).
template <typename Scalar>
class Channel {
 public:
  Channel(ProductSpace space, Mat<Scalar> rows) : space_(std::move(space)), rows_(std::move(rows)) {
    if (rows_.rows() != space_.inputSize() || rows_.cols() != space_.outputSize())
      throw StructuralError("Channel: expected " + std::to_string(space_.inputSize()) + "x" +
                            std::to_string(space_.outputSize()) + " rows, got " +
                            std::to_string(rows_.rows()) + "x" + std::to_string(rows_.cols()));
    detail::requireNonnegative(rows_.data(), rows_.size(), "Channel");
    for (Index x = 0; x < rows_.rows(); ++x) {
      Scalar z = detail::sequentialSum(rows_.data() + x * rows_.cols(), rows_.cols());
      rows_.row(x) /= detail::checkedNormalizer(z, "Channel row x=" + std::to_string(x));
    }
  }

  static Channel uniform(ProductSpace space) {
    Mat<Scalar> rows = Mat<Scalar>::Constant(space.inputSize(), space.outputSize(),
                                             Scalar(1) / Scalar(space.outputSize()));
    return Channel(std::move(space), std::move(rows));
  }

  const ProductSpace& space() const { return space_; }
  const Mat<Scalar>& rows() const { return rows_; }
  Scalar operator()(Index x, Index y) const { return rows_(x, y); }

 private:
  ProductSpace space_;
  Mat<Scalar> rows_;
};

// Intermediate of the unnormalized scaling step: nonnegative entries, no row
// constraint. Row sums are the normalizers the normalized step divides out.
template <typename Scalar>
class NonnegativeKernel {
 public:
  NonnegativeKernel(ProductSpace space, Mat<Scalar> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.rows() != space_.inputSize() || values_.cols() != space_.outputSize())
      throw StructuralError("NonnegativeKernel: shape mismatch with space");
    detail::requireNonnegative(values_.data(), values_.size(), "NonnegativeKernel");
  }

  const ProductSpace& space() const { return space_; }
  const Mat<Scalar>& values() const { return values_; }
  Scalar operator()(Index x, Index y) const { return values_(x, y); }

 private:
  ProductSpace space_;
  Mat<Scalar> values_;
};

// Row normalizers Z(x) produced when a nonnegative kernel is renormalized; every entry
// is strictly positive.
template <typename Scalar>
struct NormalizationVector {
  Vec<Scalar> values;
};

using Channeld = Channel<double>;
using NonnegativeKerneld = NonnegativeKernel<double>;

}  // namespace chanscale
