#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chanscale/chanscale.hpp"

namespace chanscale::cli {

// Channel description: exactly one of builtin/rows. Builtin parameters are only
// consulted for the builtin form.
struct ChannelSpecConfig {
  std::optional<std::string> builtin;  // xor | and | interaction | control
  double alpha = 1;
  double beta = 2;
  double noise = 0;
  std::string encoding = "signed";  // signed {-1,+1} | binary {0,1}
  std::optional<std::vector<std::vector<double>>> rows;
};

struct ConstraintConfig {
  std::vector<Index> I;
  std::vector<Index> J;
};

struct ProblemConfig {
  std::vector<Index> inputAlphabets;
  std::vector<Index> outputAlphabets;
  std::optional<std::vector<double>> inputDistribution;  // absent = uniform
  ChannelSpecConfig channel;
  std::vector<ConstraintConfig> constraints;
  std::optional<ChannelSpecConfig> referenceChannel;  // absent = uniform
  SolverOptions options;
};

// Core objects realized from a config.
struct Problem {
  InputDistribution<double> p;
  Channel<double> channel;
  std::vector<MarginalSpec> specs;
  Channel<double> reference;
};

// Parse/serialize. Parse errors throw StructuralError with a message naming the
// offending field; serialization prints numbers with 17 significant digits so a
// reload is bit-identical.
ProblemConfig parseConfig(const std::string& jsonText);
ProblemConfig loadConfigFile(const std::string& path);
std::string dumpConfig(const ProblemConfig& config);

ProductSpace spaceOf(const ProblemConfig& config);
Channel<double> buildChannel(const ChannelSpecConfig& spec, const ProductSpace& space,
                             const std::string& field);
Problem buildProblem(const ProblemConfig& config, bool needConstraints);

// %.17g with inf/nan spelled as "inf"/"-inf"/"nan".
std::string formatDouble(double v);

}  // namespace chanscale::cli
