#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "chanscale/channel.hpp"
#include "chanscale/distributions.hpp"
#include "chanscale/divergence.hpp"
#include "chanscale/marginals.hpp"
#include "chanscale/scaling.hpp"

namespace chanscale {

struct SolverOptions {
  double tolerance = 1e-9;  // L-infinity residual after a full sweep
  Index maxSweeps = 100000;
  bool traceEnabled = false;
  LogBase logBase = LogBase::E;  // presentation only; internal values are nats
};

// One per-sweep diagnostic record. Divergences are in nats; +inf is possible (support
// still shrinking), NaN marks a column that does not apply to the run.
template <typename Scalar>
struct TraceRecord {
  Index sweep = 0;
  Scalar toPrescriptionNats = std::numeric_limits<Scalar>::quiet_NaN();  // D(iterate || prescription)
  Scalar fromTargetNats = std::numeric_limits<Scalar>::quiet_NaN();      // D(target || iterate)
  Scalar residual = std::numeric_limits<Scalar>::quiet_NaN();
  std::int64_t elapsedNs = 0;
};

// The mixture family: channels whose (I_i, J_i)-marginals under p equal the
// prescription's. The spec order is the sweep order.
template <typename Scalar>
class FamilySpec {
 public:
  FamilySpec(std::vector<MarginalSpec> specs, Channel<Scalar> prescription)
      : specs_(std::move(specs)), prescription_(std::move(prescription)) {
    if (specs_.empty()) throw StructuralError("FamilySpec: needs at least one marginal spec");
    for (const MarginalSpec& s : specs_) s.validateFor(prescription_.space());
  }

  const std::vector<MarginalSpec>& specs() const { return specs_; }
  const Channel<Scalar>& prescription() const { return prescription_; }

 private:
  std::vector<MarginalSpec> specs_;
  Channel<Scalar> prescription_;
};

template <typename Scalar>
struct ProjectionResult {
  explicit ProjectionResult(Channel<Scalar> start) : limit(std::move(start)) {}

  Channel<Scalar> limit;
  Index sweepsUsed = 0;
  bool converged = false;
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  // | D(member||start) - D(member||limit) - D(limit||start) | for member = the
  // prescription channel; NaN when a term is infinite.
  Scalar pythagorasDefectNats = std::numeric_limits<Scalar>::quiet_NaN();
  std::vector<TraceRecord<Scalar>> trace;
};

namespace detail {

inline void validateOptions(const SolverOptions& opts) {
  if (!(opts.tolerance >= 0)) throw StructuralError("SolverOptions: tolerance must be >= 0");
  if (opts.maxSweeps < 1) throw StructuralError("SolverOptions: max_sweeps must be >= 1");
}

template <typename Scalar>
Scalar divergenceDefect(const DivergenceValue<Scalar>& whole, const DivergenceValue<Scalar>& first,
                        const DivergenceValue<Scalar>& second) {
  if (!whole.isFinite() || !first.isFinite() || !second.isFinite())
    return std::numeric_limits<Scalar>::quiet_NaN();
  return std::abs(whole.nats() - first.nats() - second.nats());
}

inline std::int64_t elapsedNs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace detail

// Cyclic iterative scaling over the family's marginal constraints. Stops after the
// first full sweep whose p-weighted marginal residual
//   max_i max_cells | p(x_I) (k^j - kbar)(x_I; y_J) |
// is at or below the tolerance. On budget exhaustion the best (smallest-residual)
// sweep-end iterate is returned with converged=false.
template <typename Scalar>
ProjectionResult<Scalar> channelIpf(const Channel<Scalar>& k0, const InputDistribution<Scalar>& p,
                                    const FamilySpec<Scalar>& family, const SolverOptions& opts,
                                    const Channel<Scalar>* target = nullptr) {
  detail::requireSameSpace(k0.space(), p.space(), "channelIpf");
  detail::requireSameSpace(k0.space(), family.prescription().space(), "channelIpf");
  if (target) detail::requireSameSpace(k0.space(), target->space(), "channelIpf target");
  detail::validateOptions(opts);

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = family.specs().size();

  std::vector<MarginalIndexer> indexers;
  std::vector<Channel<Scalar>> prescribed;
  std::vector<Vec<Scalar>> weights;  // p(x_I) per spec
  indexers.reserve(n);
  prescribed.reserve(n);
  weights.reserve(n);
  for (const MarginalSpec& s : family.specs()) {
    indexers.emplace_back(k0.space(), s);
    prescribed.push_back(channelMarginal(p, family.prescription(), indexers.back()));
    weights.push_back(inputMarginal(p, indexers.back()).probs());
  }

  const auto residualOf = [&](const Channel<Scalar>& k) {
    Scalar r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Channel<Scalar> cur = channelMarginal(p, k, indexers[i]);
      const Mat<Scalar> diff = (cur.rows() - prescribed[i].rows()).colwise() * weights[i];
      r = std::max(r, diff.abs().maxCoeff());
    }
    return r;
  };

  ProjectionResult<Scalar> result(k0);
  Channel<Scalar> k = k0;
  Scalar bestResidual = std::numeric_limits<Scalar>::infinity();

  for (Index sweep = 1; sweep <= opts.maxSweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) k = normalizedIjScale(p, k, prescribed[i], indexers[i]);
    const Scalar residual = residualOf(k);
    if (opts.traceEnabled) {
      TraceRecord<Scalar> rec;
      rec.sweep = sweep;
      rec.toPrescriptionNats = klChannel(p, k, family.prescription()).nats();
      if (target) rec.fromTargetNats = klChannel(p, *target, k).nats();
      rec.residual = residual;
      rec.elapsedNs = detail::elapsedNs(t0);
      result.trace.push_back(rec);
    }
    if (residual < bestResidual) {
      bestResidual = residual;
      result.limit = k;
    }
    result.sweepsUsed = sweep;
    if (residual <= opts.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.residual = bestResidual;

  result.pythagorasDefectNats = detail::divergenceDefect(
      klChannel(p, family.prescription(), k0), klChannel(p, family.prescription(), result.limit),
      klChannel(p, result.limit, k0));
  return result;
}

// One constraint of the joint algorithm: either an (I,J)-marginal prescription or the
// full-input-marginal prescription (the sigma_[N]^p step).
template <typename Scalar>
class JointConstraint {
 public:
  static JointConstraint marginal(MarginalSpec spec, JointDistribution<Scalar> prescribed) {
    JointConstraint c;
    c.spec_ = std::move(spec);
    c.joint_ = std::move(prescribed);
    return c;
  }

  static JointConstraint inputMarginal(InputDistribution<Scalar> p) {
    JointConstraint c;
    c.input_ = std::move(p);
    return c;
  }

  bool isInput() const { return input_.has_value(); }
  const MarginalSpec& spec() const { return *spec_; }
  const JointDistribution<Scalar>& prescribedJoint() const { return *joint_; }
  const InputDistribution<Scalar>& prescribedInput() const { return *input_; }

 private:
  JointConstraint() = default;
  std::optional<MarginalSpec> spec_;
  std::optional<JointDistribution<Scalar>> joint_;
  std::optional<InputDistribution<Scalar>> input_;
};

template <typename Scalar>
struct JointProjectionResult {
  explicit JointProjectionResult(JointDistribution<Scalar> start) : limit(std::move(start)) {}

  JointDistribution<Scalar> limit;
  Index sweepsUsed = 0;
  bool converged = false;
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  // Defect against the target joint when one is supplied, NaN otherwise.
  Scalar pythagorasDefectNats = std::numeric_limits<Scalar>::quiet_NaN();
  std::vector<TraceRecord<Scalar>> trace;
};

// Classical iterative proportional fitting over joint distributions; the independent
// reference path for the channel algorithm.
template <typename Scalar>
JointProjectionResult<Scalar> jointIpf(const JointDistribution<Scalar>& q0,
                                       const std::vector<JointConstraint<Scalar>>& constraints,
                                       const SolverOptions& opts,
                                       const JointDistribution<Scalar>* target = nullptr) {
  if (constraints.empty()) throw StructuralError("jointIpf: needs at least one constraint");
  if (target) detail::requireSameSpace(q0.space(), target->space(), "jointIpf target");
  detail::validateOptions(opts);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::optional<MarginalIndexer>> indexers;
  indexers.reserve(constraints.size());
  for (const JointConstraint<Scalar>& c : constraints) {
    if (c.isInput()) {
      detail::requireSameSpace(q0.space(), c.prescribedInput().space(), "jointIpf input constraint");
      indexers.emplace_back(std::nullopt);
    } else {
      indexers.emplace_back(MarginalIndexer(q0.space(), c.spec()));
    }
  }

  const Index nx = q0.space().inputSize();
  const Index ny = q0.space().outputSize();
  const auto residualOf = [&](const JointDistribution<Scalar>& q) {
    Scalar r = 0;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      if (constraints[i].isInput()) {
        const InputDistribution<Scalar>& p = constraints[i].prescribedInput();
        for (Index x = 0; x < nx; ++x)
          r = std::max(r, std::abs(detail::sequentialSum(q.cells().data() + x * ny, ny) - p(x)));
      } else {
        const JointDistribution<Scalar> marg = jointMarginal(q, *indexers[i]);
        r = std::max(r, (marg.cells() - constraints[i].prescribedJoint().cells()).abs().maxCoeff());
      }
    }
    return r;
  };

  JointProjectionResult<Scalar> result(q0);
  JointDistribution<Scalar> q = q0;
  Scalar bestResidual = std::numeric_limits<Scalar>::infinity();

  for (Index sweep = 1; sweep <= opts.maxSweeps; ++sweep) {
    for (std::size_t i = 0; i < constraints.size(); ++i)
      q = constraints[i].isInput() ? jointScaleToInput(q, constraints[i].prescribedInput())
                                   : jointScale(q, *indexers[i], constraints[i].prescribedJoint());
    const Scalar residual = residualOf(q);
    if (opts.traceEnabled) {
      TraceRecord<Scalar> rec;
      rec.sweep = sweep;
      if (target) {
        rec.toPrescriptionNats = klJoint(q, *target).nats();
        rec.fromTargetNats = klJoint(*target, q).nats();
      }
      rec.residual = residual;
      rec.elapsedNs = detail::elapsedNs(t0);
      result.trace.push_back(rec);
    }
    if (residual < bestResidual) {
      bestResidual = residual;
      result.limit = q;
    }
    result.sweepsUsed = sweep;
    if (residual <= opts.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.residual = bestResidual;

  if (target)
    result.pythagorasDefectNats = detail::divergenceDefect(klJoint(*target, q0),
                                                           klJoint(*target, result.limit),
                                                           klJoint(result.limit, q0));
  return result;
}

// Joint-level constraint list equivalent to the channel problem (prescription
// marginals lifted through p). interleaved=true yields the alternating form
// [(I_1,J_1), input, (I_2,J_2), input, ...] whose paired scaling steps reproduce
// p * k^j exactly; interleaved=false yields the plain cyclic form
// [input, (I_1,J_1), ..., (I_n,J_n)] used for sweep-for-sweep comparisons.
template <typename Scalar>
std::vector<JointConstraint<Scalar>> liftedConstraints(const InputDistribution<Scalar>& p,
                                                       const Channel<Scalar>& prescription,
                                                       const std::vector<MarginalSpec>& specs,
                                                       bool interleaved) {
  const JointDistribution<Scalar> qbar = compose(p, prescription);
  std::vector<JointConstraint<Scalar>> out;
  out.reserve(interleaved ? 2 * specs.size() : specs.size() + 1);
  if (!interleaved) out.push_back(JointConstraint<Scalar>::inputMarginal(p));
  for (const MarginalSpec& s : specs) {
    out.push_back(JointConstraint<Scalar>::marginal(s, jointMarginal(qbar, s)));
    if (interleaved) out.push_back(JointConstraint<Scalar>::inputMarginal(p));
  }
  return out;
}

template <typename Scalar>
struct RiProjection {
  Channel<Scalar> projection;
  DivergenceValue<Scalar> divergence;  // D_p(k || projection)
  ProjectionResult<Scalar> details;
};

// rI-projection of k onto the exponential family generated by the spec subsets:
// realized as the I-projection of k0 onto the mixture family prescribing k's
// marginals (the two intersect in exactly one channel).
template <typename Scalar>
RiProjection<Scalar> riProject(const Channel<Scalar>& k, const std::vector<MarginalSpec>& specs,
                               const Channel<Scalar>& k0, const InputDistribution<Scalar>& p,
                               const SolverOptions& opts) {
  ProjectionResult<Scalar> details = channelIpf(k0, p, FamilySpec<Scalar>(specs, k), opts, &k);
  DivergenceValue<Scalar> divergence = klChannel(p, k, details.limit);
  return {details.limit, divergence, std::move(details)};
}

}  // namespace chanscale
