#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cli/config.hpp"

namespace chanscale::cli {

namespace {

struct CommonArgs {
  std::string configPath;
  std::string outputPath;
  std::string builtin;
  std::optional<double> tolerance;
  std::optional<long long> maxSweeps;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> encoding;
  bool bits = false;
  bool trace = false;
  bool dumpConfig = false;
};

void addCommonFlags(CLI::App* cmd, CommonArgs& a, bool builtinAllowed) {
  cmd->add_option("--config", a.configPath, "problem config (JSON file)");
  cmd->add_option("--output", a.outputPath, "write the report here instead of stdout");
  cmd->add_option("--tolerance", a.tolerance, "override solver tolerance");
  cmd->add_option("--max-sweeps", a.maxSweeps, "override sweep budget")->check(CLI::PositiveNumber);
  cmd->add_flag("--bits", a.bits, "print divergences in bits");
  cmd->add_flag("--trace", a.trace, "also write a per-sweep CSV trace");
  cmd->add_flag("--dump-config", a.dumpConfig, "print the normalized config and exit");
  if (builtinAllowed) {
    cmd->add_option("--builtin", a.builtin, "builtin channel instead of --config");
    cmd->add_option("--alpha", a.alpha, "builtin interaction strength");
    cmd->add_option("--beta", a.beta, "builtin third-input coupling");
    cmd->add_option("--encoding", a.encoding, "two-point value code")
        ->check(CLI::IsMember({"signed", "binary"}));
  }
}

ProblemConfig builtinConfig(const std::string& name) {
  ProblemConfig config;
  config.channel.builtin = name;
  if (name == "xor" || name == "and") {
    config.inputAlphabets = {2, 2};
    config.outputAlphabets = {2};
    config.constraints = {{{0}, {0}}, {{1}, {0}}};
  } else if (name == "interaction" || name == "control") {
    config.inputAlphabets = name == "interaction" ? std::vector<Index>{2, 2, 2}
                                                  : std::vector<Index>{2, 2};
    config.outputAlphabets = {2, 2};
    config.constraints = {{{0}, {0}}, {{1}, {1}}, {{}, {0, 1}}};
  } else {
    throw StructuralError("--builtin: unknown name '" + name +
                          "' (xor|and|interaction|control)");
  }
  return config;
}

ProblemConfig resolveConfig(const CommonArgs& a, const char* cmd, bool builtinAllowed) {
  ProblemConfig config;
  if (!a.configPath.empty()) {
    if (!a.builtin.empty())
      throw StructuralError(std::string(cmd) + ": --config and --builtin are mutually exclusive");
    config = loadConfigFile(a.configPath);
  } else if (builtinAllowed && !a.builtin.empty()) {
    config = builtinConfig(a.builtin);
  } else {
    throw StructuralError(std::string(cmd) + ": needs --config" +
                          (builtinAllowed ? " or --builtin" : ""));
  }
  if (a.alpha) config.channel.alpha = *a.alpha;
  if (a.beta) config.channel.beta = *a.beta;
  if (a.encoding) config.channel.encoding = *a.encoding;
  if (a.tolerance) config.options.tolerance = *a.tolerance;
  if (a.maxSweeps) config.options.maxSweeps = static_cast<Index>(*a.maxSweeps);
  if (a.bits) config.options.logBase = LogBase::Two;
  if (a.trace) config.options.traceEnabled = true;
  return config;
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw StructuralError("cannot open output file '" + path + "'");
  f << content;
}

void writeReport(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty())
    out << content;
  else
    writeFile(path, content);
}

// trace.csv next to stdout output, <output>.<tag>trace.csv next to a file report.
std::string tracePath(const std::string& outputPath, const char* tag) {
  const std::string base = outputPath.empty() ? std::string() : outputPath + ".";
  return base + tag + "trace.csv";
}

std::string jsonNumber(double v) {
  const std::string s = formatDouble(v);
  return std::isfinite(v) ? s : '"' + s + '"';
}

std::string traceCsv(const std::vector<TraceRecord<double>>& trace) {
  std::ostringstream os;
  os << "sweep,divergence_to_prescription_nats,divergence_to_target_nats,residual_linf,elapsed_ns\n";
  for (const TraceRecord<double>& r : trace)
    os << r.sweep << ',' << formatDouble(r.toPrescriptionNats) << ','
       << formatDouble(r.fromTargetNats) << ',' << formatDouble(r.residual) << ',' << r.elapsedNs
       << '\n';
  return os.str();
}

std::string compareCsv(const std::vector<TraceRecord<double>>& channel,
                       const std::vector<TraceRecord<double>>& joint) {
  std::ostringstream os;
  os << "sweep,method,divergence_to_target_nats,residual_linf,elapsed_ns\n";
  for (const TraceRecord<double>& r : channel)
    os << r.sweep << ",channel," << formatDouble(r.fromTargetNats) << ','
       << formatDouble(r.residual) << ',' << r.elapsedNs << '\n';
  for (const TraceRecord<double>& r : joint)
    os << r.sweep << ",joint," << formatDouble(r.fromTargetNats) << ',' << formatDouble(r.residual)
       << ',' << r.elapsedNs << '\n';
  return os.str();
}

std::string measureLine(const char* name, const RiProjection<double>& r, LogBase base) {
  std::ostringstream os;
  os << name << " = " << formatDouble(r.divergence.inUnit(base)) << ' ' << unitName(base)
     << " (converged=" << (r.details.converged ? "true" : "false")
     << ", sweeps=" << r.details.sweepsUsed << ", residual=" << formatDouble(r.details.residual)
     << ")\n";
  return os.str();
}

int runProject(const CommonArgs& a, std::ostream& out) {
  ProblemConfig config = resolveConfig(a, "project", false);
  if (a.dumpConfig) {
    writeReport(a.outputPath, dumpConfig(config), out);
    return 0;
  }
  Problem prob = buildProblem(config, true);
  const RiProjection<double> r =
      riProject(prob.channel, prob.specs, prob.reference, prob.p, config.options);

  std::ostringstream os;
  os << "{\n  \"converged\": " << (r.details.converged ? "true" : "false")
     << ",\n  \"sweeps\": " << r.details.sweepsUsed
     << ",\n  \"residual_linf\": " << jsonNumber(r.details.residual)
     << ",\n  \"divergence\": " << jsonNumber(r.divergence.inUnit(config.options.logBase))
     << ",\n  \"unit\": \"" << unitName(config.options.logBase)
     << "\",\n  \"pythagoras_defect_nats\": " << jsonNumber(r.details.pythagorasDefectNats)
     << ",\n  \"limit_rows\": [\n";
  const Matd& rows = r.projection.rows();
  for (Index x = 0; x < rows.rows(); ++x) {
    os << "    [";
    for (Index y = 0; y < rows.cols(); ++y) os << (y ? ", " : "") << formatDouble(rows(x, y));
    os << (x + 1 < rows.rows() ? "],\n" : "]\n");
  }
  os << "  ]\n}\n";
  writeReport(a.outputPath, os.str(), out);
  if (config.options.traceEnabled) writeFile(tracePath(a.outputPath, ""), traceCsv(r.details.trace));
  return 0;
}

int runSynergy(const CommonArgs& a, std::ostream& out) {
  ProblemConfig config = resolveConfig(a, "synergy", true);
  if (a.dumpConfig) {
    writeReport(a.outputPath, dumpConfig(config), out);
    return 0;
  }
  Problem prob = buildProblem(config, false);
  const RiProjection<double> r = synergyD2(prob.p, prob.channel, config.options);
  writeReport(a.outputPath, measureLine("d2", r, config.options.logBase), out);
  if (config.options.traceEnabled) writeFile(tracePath(a.outputPath, ""), traceCsv(r.details.trace));
  return 0;
}

int runComplexity(const CommonArgs& a, std::ostream& out) {
  ProblemConfig config = resolveConfig(a, "complexity", true);
  if (a.dumpConfig) {
    writeReport(a.outputPath, dumpConfig(config), out);
    return 0;
  }
  Problem prob = buildProblem(config, false);

  // A 3-input 2-output channel is reduced first: the third input is averaged out
  // under p, and the measures run on the induced pair channel.
  auto reduced = [&]() -> std::pair<InputDistribution<double>, Channel<double>> {
    const ProductSpace& space = prob.channel.space();
    if (space.inputFactors() == 3 && space.outputFactors() == 2) {
      MarginalIndexer idx(space, MarginalSpec({0, 1}, {0, 1}));
      return {inputMarginal(prob.p, idx), channelMarginal(prob.p, prob.channel, idx)};
    }
    return {prob.p, prob.channel};
  }();

  const RiProjection<double> c1 = complexityC1(reduced.first, reduced.second, config.options);
  const RiProjection<double> c2 = complexityC2(reduced.first, reduced.second, config.options);
  writeReport(a.outputPath,
              measureLine("c1", c1, config.options.logBase) +
                  measureLine("c2", c2, config.options.logBase),
              out);
  if (config.options.traceEnabled) {
    writeFile(tracePath(a.outputPath, "c1."), traceCsv(c1.details.trace));
    writeFile(tracePath(a.outputPath, "c2."), traceCsv(c2.details.trace));
  }
  return 0;
}

int runCompare(const CommonArgs& a, std::ostream& out) {
  ProblemConfig config = resolveConfig(a, "compare", false);
  if (a.dumpConfig) {
    writeReport(a.outputPath, dumpConfig(config), out);
    return 0;
  }
  Problem prob = buildProblem(config, true);

  SolverOptions opts = config.options;
  opts.traceEnabled = true;
  const ProjectionResult<double> channelRun =
      channelIpf(prob.reference, prob.p, FamilySpec<double>(prob.specs, prob.channel), opts,
                 &prob.channel);

  const JointDistribution<double> q0 = compose(prob.p, prob.reference);
  const JointDistribution<double> target = compose(prob.p, prob.channel);
  const JointProjectionResult<double> jointRun =
      jointIpf(q0, liftedConstraints(prob.p, prob.channel, prob.specs, false), opts, &target);

  writeReport(a.outputPath, compareCsv(channelRun.trace, jointRun.trace), out);
  return 0;
}

}  // namespace

int runMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"iterative-scaling projections and information measures for finite channels"};
  app.require_subcommand(1);

  CommonArgs projectArgs, synergyArgs, complexityArgs, compareArgs;
  CLI::App* project =
      app.add_subcommand("project", "rI-projection of a channel onto a marginal family");
  addCommonFlags(project, projectArgs, false);
  CLI::App* synergy = app.add_subcommand("synergy", "pairwise synergy d2 of a two-input channel");
  addCommonFlags(synergy, synergyArgs, true);
  CLI::App* complexity =
      app.add_subcommand("complexity", "complexity measures c1 and c2 of a pair channel");
  addCommonFlags(complexity, complexityArgs, true);
  CLI::App* compare =
      app.add_subcommand("compare", "channel-level vs joint-level scaling on one problem");
  addCommonFlags(compare, compareArgs, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (project->parsed()) return runProject(projectArgs, out);
    if (synergy->parsed()) return runSynergy(synergyArgs, out);
    if (complexity->parsed()) return runComplexity(complexityArgs, out);
    if (compare->parsed()) return runCompare(compareArgs, out);
  } catch (const InfeasibleScalingError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace chanscale::cli
