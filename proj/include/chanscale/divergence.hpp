#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "chanscale/channel.hpp"
#include "chanscale/distributions.hpp"
#include "chanscale/marginals.hpp"

namespace chanscale {

// KL divergence in nats with an explicit infinity flag. 0 log 0 := 0; mass on a cell
// the reference misses yields the infinite value, never a large float.
template <typename Scalar>
class DivergenceValue {
 public:
  static DivergenceValue fromNats(Scalar nats) {
    // Rounding can push an exact zero divergence slightly negative; clamp within a
    // rounding margin, reject anything genuinely negative.
    if (nats < 0) {
      if (!(nats > Scalar(-1e-9))) throw StructuralError("DivergenceValue: negative divergence");
      nats = 0;
    }
    DivergenceValue v;
    v.nats_ = nats;
    v.finite_ = true;
    return v;
  }

  static DivergenceValue infinity() { return DivergenceValue(); }

  bool isFinite() const { return finite_; }
  Scalar nats() const { return finite_ ? nats_ : std::numeric_limits<Scalar>::infinity(); }
  Scalar bits() const { return nats() / std::numbers::ln2_v<Scalar>; }
  Scalar inUnit(LogBase base) const { return base == LogBase::E ? nats() : bits(); }

 private:
  Scalar nats_ = 0;
  bool finite_ = false;
};

using DivergenceValued = DivergenceValue<double>;

namespace detail {

// Shared kernel: sum a log(a/b) over paired nonnegative weights in flat order.
template <typename Scalar>
DivergenceValue<Scalar> klArrays(const Scalar* a, const Scalar* b, Index n) {
  Scalar sum = 0;
  for (Index i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    if (b[i] == 0) return DivergenceValue<Scalar>::infinity();
    sum += a[i] * std::log(a[i] / b[i]);
  }
  return DivergenceValue<Scalar>::fromNats(sum);
}

}  // namespace detail

template <typename Scalar>
DivergenceValue<Scalar> klJoint(const JointDistribution<Scalar>& q1, const JointDistribution<Scalar>& q2) {
  detail::requireSameSpace(q1.space(), q2.space(), "klJoint");
  return detail::klArrays(q1.cells().data(), q2.cells().data(), q1.cells().size());
}

// D_p(k || m) = sum_x p(x) sum_y k(x;y) log(k(x;y)/m(x;y)).
template <typename Scalar>
DivergenceValue<Scalar> klChannel(const InputDistribution<Scalar>& p, const Channel<Scalar>& k,
                                  const Channel<Scalar>& m) {
  detail::requireSameSpace(p.space(), k.space(), "klChannel");
  detail::requireSameSpace(k.space(), m.space(), "klChannel");
  Scalar sum = 0;
  for (Index x = 0; x < k.space().inputSize(); ++x)
    for (Index y = 0; y < k.space().outputSize(); ++y) {
      const Scalar a = k(x, y);
      if (a == 0) continue;
      if (m(x, y) == 0) return DivergenceValue<Scalar>::infinity();
      sum += p(x) * a * std::log(a / m(x, y));
    }
  return DivergenceValue<Scalar>::fromNats(sum);
}

// I(X;Y) = D_p(k || m) where every row of m is the output marginal of p k.
template <typename Scalar>
DivergenceValue<Scalar> mutualInformation(const InputDistribution<Scalar>& p, const Channel<Scalar>& k) {
  const Index ny = k.space().outputSize();
  Vec<Scalar> out = Vec<Scalar>::Zero(ny);
  for (Index x = 0; x < k.space().inputSize(); ++x)
    for (Index y = 0; y < ny; ++y) out[y] += p(x) * k(x, y);
  Scalar sum = 0;
  for (Index x = 0; x < k.space().inputSize(); ++x)
    for (Index y = 0; y < ny; ++y) {
      const Scalar a = k(x, y);
      if (a == 0) continue;
      // out[y] >= p(x) k(x,y) > 0 whenever a > 0, so the ratio is finite.
      sum += p(x) * a * std::log(a / out[y]);
    }
  return DivergenceValue<Scalar>::fromNats(sum);
}

}  // namespace chanscale
