#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chanscale/chanscale.hpp"
#include "support/random_instances.hpp"
#include "support/theta_oracle.hpp"

using namespace chanscale;
using namespace chanscale::testing;

namespace {

const std::vector<MarginalSpec>& gateFamily() {
  static const std::vector<MarginalSpec> specs{MarginalSpec({0}, {0}), MarginalSpec({1}, {0})};
  return specs;
}

}  // namespace

TEST_CASE("solver option validation") {
  const ProductSpace space({2, 2}, {2});
  const InputDistributiond p = InputDistributiond::uniform(space);
  const Channeld k0 = Channeld::uniform(space);
  const FamilySpec<double> family(gateFamily(), makeGate(GateKind::Xor));

  SolverOptions bad;
  bad.tolerance = -1;
  CHECK_THROWS_AS(channelIpf(k0, p, family, bad), StructuralError);
  bad = SolverOptions{};
  bad.maxSweeps = 0;
  CHECK_THROWS_AS(channelIpf(k0, p, family, bad), StructuralError);

  CHECK_THROWS_AS(FamilySpec<double>({}, k0), StructuralError);
  CHECK_THROWS_AS(FamilySpec<double>({MarginalSpec({3}, {0})}, k0), StructuralError);
}

TEST_CASE("XOR projection converges immediately to the uniform channel") {
  const ProductSpace space({2, 2}, {2});
  const InputDistributiond p = InputDistributiond::uniform(space);
  const Channeld k0 = Channeld::uniform(space);
  SolverOptions opts;
  opts.traceEnabled = true;

  const ProjectionResult<double> r = channelIpf(k0, p, {gateFamily(), makeGate(GateKind::Xor)}, opts);
  CHECK(r.converged);
  CHECK(r.sweepsUsed <= 2);
  CHECK(r.residual <= 1e-9);
  CHECK((r.limit.rows() - 0.5).abs().maxCoeff() <= 1e-12);
  CHECK(r.trace.size() == static_cast<std::size_t>(r.sweepsUsed));
  CHECK(r.pythagorasDefectNats <= 1e-9);
}

TEST_CASE("AND projection approaches the family like 1/(4 sweeps)") {
  const ProductSpace space({2, 2}, {2});
  const InputDistributiond p = InputDistributiond::uniform(space);
  SolverOptions opts;
  opts.tolerance = 0;
  opts.maxSweeps = 100;

  const ProjectionResult<double> r =
      channelIpf(Channeld::uniform(space), p, {gateFamily(), makeGate(GateKind::And)}, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.sweepsUsed == 100);
  // The (1,1) row drains its y=0 entry like 1/(4s); the law is asymptotic, so the
  // check leaves a small relative margin.
  CHECK(r.limit(3, 0) == doctest::Approx(1.0 / 400).epsilon(0.02));
  CHECK(r.limit(3, 1) == doctest::Approx(1.0 - 1.0 / 400).epsilon(1e-4));
}

TEST_CASE("trace records are well formed and the divergence tail decreases") {
  const ProductSpace space({2, 2}, {2});
  const InputDistributiond p = InputDistributiond::uniform(space);
  SolverOptions opts;
  opts.tolerance = 0;
  opts.maxSweeps = 200;
  opts.traceEnabled = true;
  const Channeld target = makeGate(GateKind::And);

  const ProjectionResult<double> r =
      channelIpf(Channeld::uniform(space), p, {gateFamily(), target}, opts, &target);
  REQUIRE(r.trace.size() == 200);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].sweep == static_cast<Index>(i + 1));
    // The prescription has zeros outside the iterate's support, so the forward
    // divergence can sit at +inf; it must still be a recorded (non-NaN) value.
    CHECK(!std::isnan(r.trace[i].toPrescriptionNats));
    CHECK(std::isfinite(r.trace[i].fromTargetNats));
    if (i > 0) CHECK(r.trace[i].elapsedNs >= r.trace[i - 1].elapsedNs);
    if (i >= 10) CHECK(r.trace[i].fromTargetNats < r.trace[i - 1].fromTargetNats);
    if (i >= 10) CHECK(r.trace[i].residual <= r.trace[i - 1].residual + 1e-12);
  }
  // Residuals shrink, so the best iterate is the last one.
  CHECK(r.residual == r.trace.back().residual);
}

TEST_CASE("budget exhaustion returns the smallest-residual iterate") {
  const ProductSpace space({2, 2}, {2});
  const InputDistributiond p = InputDistributiond::uniform(space);
  SolverOptions opts;
  opts.tolerance = 0;
  opts.maxSweeps = 5;
  opts.traceEnabled = true;

  const ProjectionResult<double> r =
      channelIpf(Channeld::uniform(space), p, {gateFamily(), makeGate(GateKind::And)}, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.sweepsUsed == 5);
  double best = r.trace.front().residual;
  for (const TraceRecord<double>& rec : r.trace) best = std::min(best, rec.residual);
  CHECK(r.residual == best);
}

TEST_CASE("the projection does not depend on the constraint order") {
  Rng rng(401);
  SolverOptions opts;
  opts.tolerance = 1e-12;
  opts.maxSweeps = 20000;
  for (int i = 0; i < 20; ++i) {
    const ProductSpace space = randomSpace(rng);
    const InputDistributiond p = randomInput(rng, space);
    const Channeld k0 = randomChannel(rng, space);
    const Channeld target = randomChannel(rng, space);
    std::vector<MarginalSpec> specs = randomSpecs(rng, space, 3);

    const ProjectionResult<double> a = channelIpf(k0, p, {specs, target}, opts);
    std::reverse(specs.begin(), specs.end());
    const ProjectionResult<double> b = channelIpf(k0, p, {specs, target}, opts);
    if (a.converged && b.converged)
      CHECK((a.limit.rows() - b.limit.rows()).abs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("tightly solved instances report a tiny Pythagoras defect") {
  Rng rng(402);
  SolverOptions opts;
  opts.tolerance = 1e-12;
  opts.maxSweeps = 20000;
  int converged = 0;
  for (int i = 0; i < 30; ++i) {
    const ProductSpace space = randomSpace(rng);
    const InputDistributiond p = randomInput(rng, space);
    const ProjectionResult<double> r = channelIpf(
        randomChannel(rng, space), p, {randomSpecs(rng, space), randomChannel(rng, space)}, opts);
    if (!r.converged) continue;
    ++converged;
    CHECK(r.pythagorasDefectNats <= 1e-6);
  }
  CHECK(converged >= 25);
}

TEST_CASE("jointIpf with row and column constraints recovers the product measure") {
  const ProductSpace space({2}, {2});
  const JointDistributiond q0(space, Matd::Constant(2, 2, 0.25));
  const InputDistributiond p(space, (Vecd(2) << 0.3, 0.7).finished());
  const JointDistributiond out(ProductSpace({}, {2}), (Matd(1, 2) << 0.6, 0.4).finished());

  std::vector<JointConstraint<double>> constraints;
  constraints.push_back(JointConstraint<double>::inputMarginal(p));
  constraints.push_back(JointConstraint<double>::marginal(MarginalSpec({}, {0}), out));

  SolverOptions opts;
  const JointProjectionResult<double> r = jointIpf(q0, constraints, opts);
  CHECK(r.converged);
  for (Index x = 0; x < 2; ++x)
    for (Index y = 0; y < 2; ++y)
      CHECK(r.limit(x, y) == doctest::Approx(p(x) * out(0, y)).epsilon(1e-9));
}

TEST_CASE("jointIpf validates its inputs") {
  const ProductSpace space({2}, {2});
  const JointDistributiond q0(space, Matd::Constant(2, 2, 0.25));
  SolverOptions opts;
  CHECK_THROWS_AS(jointIpf(q0, std::vector<JointConstraint<double>>{}, opts), StructuralError);

  std::vector<JointConstraint<double>> wrongSpace;
  wrongSpace.push_back(JointConstraint<double>::inputMarginal(
      InputDistributiond::uniform(ProductSpace({3}, {2}))));
  CHECK_THROWS_AS(jointIpf(q0, wrongSpace, opts), StructuralError);
}

TEST_CASE("interleaved joint scaling replays the channel iteration exactly") {
  Rng rng(403);
  for (int i = 0; i < 20; ++i) {
    const ProductSpace space = randomSpace(rng);
    const InputDistributiond p = randomInput(rng, space);
    const Channeld k0 = randomChannel(rng, space);
    const Channeld target = randomChannel(rng, space);
    const std::vector<MarginalSpec> specs = randomSpecs(rng, space);

    std::vector<MarginalIndexer> idx;
    std::vector<Channeld> prescribed;
    std::vector<JointDistributiond> lifted;
    for (const MarginalSpec& s : specs) {
      idx.emplace_back(space, s);
      prescribed.push_back(channelMarginal(p, target, idx.back()));
      Matd cells = prescribed.back().rows().colwise() * inputMarginal(p, idx.back()).probs();
      lifted.emplace_back(prescribed.back().space(), std::move(cells));
    }

    Channeld k = k0;
    JointDistributiond q = compose(p, k0);
    for (int step = 0; step < 4 * static_cast<int>(specs.size()); ++step) {
      const std::size_t s = static_cast<std::size_t>(step) % specs.size();
      k = normalizedIjScale(p, k, prescribed[s], idx[s]);
      q = jointScaleToInput(jointScale(q, idx[s], lifted[s]), p);
      CHECK((q.cells() - compose(p, k).cells()).abs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("channel and joint limits agree through the lifting") {
  Rng rng(404);
  SolverOptions opts;
  opts.tolerance = 1e-11;
  opts.maxSweeps = 20000;
  int compared = 0;
  for (int i = 0; i < 20; ++i) {
    const ProductSpace space = randomSpace(rng);
    const InputDistributiond p = randomInput(rng, space);
    const Channeld k0 = randomChannel(rng, space);
    const Channeld target = randomChannel(rng, space);
    const std::vector<MarginalSpec> specs = randomSpecs(rng, space);

    const ProjectionResult<double> ch = channelIpf(k0, p, {specs, target}, opts);
    const JointProjectionResult<double> jt =
        jointIpf(compose(p, k0), liftedConstraints(p, target, specs, true), opts);
    if (!ch.converged || !jt.converged) continue;
    ++compared;
    CHECK((compose(p, ch.limit).cells() - jt.limit.cells()).abs().maxCoeff() <= 1e-8);
  }
  CHECK(compared >= 15);
}

TEST_CASE("a single joint constraint is satisfied after one sweep") {
  Rng rng(408);
  const ProductSpace space = randomSpace(rng);
  const JointDistributiond q0 = randomJoint(rng, space);
  const MarginalSpec spec = randomSpec(rng, space);
  const JointDistributiond prescribed = jointMarginal(randomJoint(rng, space), spec);
  SolverOptions opts;

  const JointProjectionResult<double> r =
      jointIpf(q0, {JointConstraint<double>::marginal(spec, prescribed)}, opts);
  CHECK(r.converged);
  CHECK(r.sweepsUsed == 1);
  CHECK((jointMarginal(r.limit, spec).cells() - prescribed.cells()).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("the limit minimizes divergence to the start among family members") {
  Rng rng(407);
  SolverOptions opts;
  opts.tolerance = 1e-11;
  opts.maxSweeps = 30000;
  int compared = 0;
  for (int i = 0; i < 20; ++i) {
    const ProductSpace space = randomSpace(rng);
    const InputDistributiond p = randomInput(rng, space);
    const Channeld k0 = randomChannel(rng, space);
    const Channeld target = randomChannel(rng, space);
    const std::vector<MarginalSpec> specs = randomSpecs(rng, space);

    const ProjectionResult<double> ch = channelIpf(k0, p, {specs, target}, opts);
    // Another member of the same mixture family, reached from an unrelated start.
    const JointProjectionResult<double> jt = jointIpf(
        compose(p, randomChannel(rng, space)), liftedConstraints(p, target, specs, false), opts);
    if (!ch.converged || !jt.converged) continue;
    ++compared;
    const Disintegration<double> m = disintegrate(jt.limit);
    CHECK(klChannel(p, ch.limit, k0).nats() <= klChannel(p, m.channel, k0).nats() + 1e-6);
  }
  CHECK(compared >= 12);
}

TEST_CASE("members of the exponential family project to themselves") {
  Rng rng(409);
  std::uniform_real_distribution<double> th(-1, 1);
  SolverOptions opts;
  opts.tolerance = 1e-12;
  opts.maxSweeps = 30000;
  int checked = 0;
  for (int i = 0; i < 20 && checked < 10; ++i) {
    const ProductSpace space = randomSpace(rng);
    const InputDistributiond p = randomInput(rng, space);
    const Channeld k0 = randomChannel(rng, space);
    const std::vector<MarginalSpec> specs = randomSpecs(rng, space);

    ThetaOracle oracle(p, k0, specs, k0);
    std::vector<double> theta(static_cast<std::size_t>(oracle.dimension()));
    for (double& t : theta) t = th(rng);
    const Channeld member = oracle.channelAt(theta);

    const RiProjection<double> r = riProject(member, specs, k0, p, opts);
    if (!r.details.converged) continue;
    ++checked;
    CHECK(r.divergence.nats() <= 1e-8);
  }
  CHECK(checked >= 10);
}

TEST_CASE("riProject reports the divergence to its own limit") {
  Rng rng(405);
  const ProductSpace space = randomSpace(rng);
  const InputDistributiond p = randomInput(rng, space);
  const Channeld k = randomChannel(rng, space);
  const Channeld k0 = randomChannel(rng, space);
  const std::vector<MarginalSpec> specs = randomSpecs(rng, space);
  SolverOptions opts;

  const RiProjection<double> r = riProject(k, specs, k0, p, opts);
  CHECK(r.divergence.nats() == klChannel(p, k, r.projection).nats());
  CHECK((r.projection.rows() - r.details.limit.rows()).abs().maxCoeff() == 0);
}

TEST_CASE("the scaling limit matches the brute-force exponential family optimum") {
  Rng rng(406);
  SolverOptions opts;
  opts.tolerance = 1e-12;
  opts.maxSweeps = 30000;
  int checked = 0;
  int draws = 0;
  while (checked < 8 && ++draws < 200) {
    const ProductSpace space = randomSpace(rng);
    const InputDistributiond p = randomInput(rng, space);
    const Channeld k = randomChannel(rng, space);
    const Channeld k0 = randomChannel(rng, space);
    const std::vector<MarginalSpec> specs = randomSpecs(rng, space, 2);

    ThetaOracle oracle(p, k, specs, k0);
    if (oracle.dimension() > 12) continue;
    const RiProjection<double> r = riProject(k, specs, k0, p, opts);
    if (!r.details.converged) continue;
    ++checked;
    CHECK(std::abs(r.divergence.nats() - oracle.minimizeNats()) <= 5e-5);
  }
  CHECK(checked == 8);
}
