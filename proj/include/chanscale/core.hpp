#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace chanscale {

using Index = Eigen::Index;

// Dense storage used throughout. Channels and joints are row-major so the linear
// memory order equals the flattened joint order (inputs before outputs, last
// coordinate fastest).
template <typename Scalar>
using Vec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Vecd = Vec<double>;
using Matd = Mat<double>;

// Sums accepted as "normalized" at construction; anything within the slack is
// renormalized exactly (divide by the computed sum), anything outside is rejected.
inline constexpr double kNormalizationSlack = 1e-12;
// Strict-positivity floor for input distributions (and disintegration row sums).
inline constexpr double kPositivityFloor = 1e-15;

enum class LogBase { E, Two };

inline const char* unitName(LogBase base) { return base == LogBase::E ? "nats" : "bits"; }

}  // namespace chanscale
