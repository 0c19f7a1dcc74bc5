#include <doctest.h>

#include <vector>

#include "chanscale/chanscale.hpp"

using namespace chanscale;

TEST_CASE("flattenIndex runs last coordinate fastest") {
  const std::vector<Index> cards{2, 3, 2};
  CHECK(flattenIndex(std::vector<Index>{0, 0, 0}, cards) == 0);
  CHECK(flattenIndex(std::vector<Index>{0, 0, 1}, cards) == 1);
  CHECK(flattenIndex(std::vector<Index>{0, 1, 0}, cards) == 2);
  CHECK(flattenIndex(std::vector<Index>{1, 0, 0}, cards) == 6);
  CHECK(flattenIndex(std::vector<Index>{1, 2, 1}, cards) == 11);
}

TEST_CASE("flatten/unflatten round trip over a full mixed-radix range") {
  const std::vector<Index> cards{3, 2, 4};
  for (Index flat = 0; flat < 24; ++flat) {
    const std::vector<Index> coords = unflattenIndex(flat, cards);
    CHECK(flattenIndex(coords, cards) == flat);
  }
}

TEST_CASE("empty coordinate lists encode the one-point space") {
  const std::vector<Index> none;
  CHECK(flattenIndex(none, none) == 0);
  CHECK(unflattenIndex(0, none).empty());
  CHECK_THROWS_AS(unflattenIndex(1, none), StructuralError);
}

TEST_CASE("flattenIndex rejects bad coordinates") {
  const std::vector<Index> cards{2, 3};
  CHECK_THROWS_AS(flattenIndex(std::vector<Index>{0}, cards), StructuralError);
  CHECK_THROWS_AS(flattenIndex(std::vector<Index>{2, 0}, cards), StructuralError);
  CHECK_THROWS_AS(flattenIndex(std::vector<Index>{0, -1}, cards), StructuralError);
  CHECK_THROWS_AS(unflattenIndex(6, cards), StructuralError);
}

TEST_CASE("ProductSpace sizes and encode/decode") {
  const ProductSpace space({2, 3}, {2, 2});
  CHECK(space.inputFactors() == 2);
  CHECK(space.outputFactors() == 2);
  CHECK(space.inputSize() == 6);
  CHECK(space.outputSize() == 4);
  CHECK(space.jointSize() == 24);
  CHECK(space.encodeInput(std::vector<Index>{1, 2}) == 5);
  CHECK(space.encodeOutput(std::vector<Index>{1, 0}) == 2);
  CHECK(space.encodeJoint(5, 2) == 22);
  CHECK(space.decodeInput(5) == std::vector<Index>{1, 2});
  CHECK(space.decodeOutput(2) == std::vector<Index>{1, 0});
}

TEST_CASE("ProductSpace allows an empty input list but not an empty output list") {
  const ProductSpace point({}, {3});
  CHECK(point.inputFactors() == 0);
  CHECK(point.inputSize() == 1);
  CHECK(point.encodeInput(std::vector<Index>{}) == 0);
  CHECK_THROWS_AS(ProductSpace({2}, {}), StructuralError);
}

TEST_CASE("ProductSpace rejects degenerate cardinalities") {
  CHECK_THROWS_AS(ProductSpace({0}, {2}), StructuralError);
  CHECK_THROWS_AS(ProductSpace({2}, {2, 0}), StructuralError);
}

TEST_CASE("ProductSpace equality compares factor lists") {
  CHECK(ProductSpace({2, 2}, {2}) == ProductSpace({2, 2}, {2}));
  CHECK_FALSE(ProductSpace({2, 2}, {2}) == ProductSpace({2}, {2, 2}));
  CHECK_FALSE(ProductSpace({2, 3}, {2}) == ProductSpace({3, 2}, {2}));
}

TEST_CASE("MarginalSpec sorts and validates its subsets") {
  const MarginalSpec spec({1, 0}, {2, 0});
  CHECK(spec.inputs() == std::vector<Index>{0, 1});
  CHECK(spec.outputs() == std::vector<Index>{0, 2});

  CHECK_THROWS_AS(MarginalSpec({0}, {}), StructuralError);
  CHECK_THROWS_AS(MarginalSpec({0, 0}, {0}), StructuralError);
  CHECK_THROWS_AS(MarginalSpec({0}, {1, 1}), StructuralError);
  CHECK_THROWS_AS(MarginalSpec({-1}, {0}), StructuralError);

  const MarginalSpec empty({}, {0});
  CHECK(empty.inputs().empty());
}

TEST_CASE("MarginalSpec::validateFor checks factor ranges") {
  const ProductSpace space({2, 2}, {2});
  CHECK_NOTHROW(MarginalSpec({0, 1}, {0}).validateFor(space));
  CHECK_THROWS_AS(MarginalSpec({2}, {0}).validateFor(space), StructuralError);
  CHECK_THROWS_AS(MarginalSpec({0}, {1}).validateFor(space), StructuralError);
}

TEST_CASE("MarginalIndexer groups by the selected factors") {
  const ProductSpace space({2, 3}, {2, 2});
  const MarginalIndexer idx(space, MarginalSpec({1}, {0}));
  CHECK(idx.reducedSpace() == ProductSpace({3}, {2}));
  for (Index x = 0; x < space.inputSize(); ++x) CHECK(idx.inputGroup(x) == x % 3);
  for (Index y = 0; y < space.outputSize(); ++y) CHECK(idx.outputGroup(y) == y / 2);
}

TEST_CASE("MarginalIndexer with empty I maps every input to the single group") {
  const ProductSpace space({2, 3}, {2});
  const MarginalIndexer idx(space, MarginalSpec({}, {0}));
  CHECK(idx.reducedSpace().inputSize() == 1);
  for (Index x = 0; x < space.inputSize(); ++x) CHECK(idx.inputGroup(x) == 0);
}

TEST_CASE("MarginalIndexer keeps subsets in factor order") {
  const ProductSpace space({2, 2, 2}, {2});
  const MarginalIndexer idx(space, MarginalSpec({0, 2}, {0}));
  // x = (x1, x2, x3) flattens to 4 x1 + 2 x2 + x3; the group keeps (x1, x3).
  CHECK(idx.inputGroup(0) == 0);  // (0,0,0) -> (0,0)
  CHECK(idx.inputGroup(1) == 1);  // (0,0,1) -> (0,1)
  CHECK(idx.inputGroup(2) == 0);  // (0,1,0) -> (0,0)
  CHECK(idx.inputGroup(4) == 2);  // (1,0,0) -> (1,0)
  CHECK(idx.inputGroup(7) == 3);  // (1,1,1) -> (1,1)
}
