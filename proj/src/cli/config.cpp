#include "cli/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chanscale::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw StructuralError("config." + field + ": " + what);
}

void rejectUnknownKeys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& field) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) fail(field.empty() ? item.key() : field + "." + item.key(), "unknown field");
  }
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::vector<Index> parseIndexList(const json& j, const std::string& field, Index minValue) {
  if (!j.is_array()) fail(field, "expected an array of integers");
  std::vector<Index> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) fail(field + "[" + std::to_string(i) + "]", "expected an integer");
    const auto v = j[i].get<long long>();
    if (v < minValue) fail(field + "[" + std::to_string(i) + "]", "must be >= " + std::to_string(minValue));
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

double parseNumber(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

ChannelSpecConfig parseChannelSpec(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object with 'builtin' or 'rows'");
  rejectUnknownKeys(j, {"builtin", "alpha", "beta", "noise", "encoding", "rows"}, field);
  ChannelSpecConfig spec;
  if (const json* b = find(j, "builtin")) {
    if (!b->is_string()) fail(field + ".builtin", "expected a string");
    spec.builtin = b->get<std::string>();
  }
  if (const json* r = find(j, "rows")) {
    if (spec.builtin) fail(field, "'builtin' and 'rows' are mutually exclusive");
    if (!r->is_array()) fail(field + ".rows", "expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t x = 0; x < r->size(); ++x) {
      const json& row = (*r)[x];
      if (!row.is_array()) fail(field + ".rows[" + std::to_string(x) + "]", "expected an array of numbers");
      std::vector<double> vals;
      for (std::size_t y = 0; y < row.size(); ++y)
        vals.push_back(parseNumber(row[y], field + ".rows[" + std::to_string(x) + "][" + std::to_string(y) + "]"));
      rows.push_back(std::move(vals));
    }
    spec.rows = std::move(rows);
  }
  if (!spec.builtin && !spec.rows) fail(field, "needs 'builtin' or 'rows'");
  if (const json* a = find(j, "alpha")) spec.alpha = parseNumber(*a, field + ".alpha");
  if (const json* b = find(j, "beta")) spec.beta = parseNumber(*b, field + ".beta");
  if (const json* n = find(j, "noise")) spec.noise = parseNumber(*n, field + ".noise");
  if (const json* e = find(j, "encoding")) {
    if (!e->is_string()) fail(field + ".encoding", "expected a string");
    spec.encoding = e->get<std::string>();
    if (spec.encoding != "signed" && spec.encoding != "binary")
      fail(field + ".encoding", "must be 'signed' or 'binary'");
  }
  return spec;
}

SolverOptions parseOptions(const json& j) {
  SolverOptions opts;
  if (!j.is_object()) fail("options", "expected an object");
  rejectUnknownKeys(j, {"tolerance", "max_sweeps", "log_base", "trace"}, "options");
  if (const json* t = find(j, "tolerance")) {
    opts.tolerance = parseNumber(*t, "options.tolerance");
    if (!(opts.tolerance >= 0)) fail("options.tolerance", "must be >= 0");
  }
  if (const json* m = find(j, "max_sweeps")) {
    if (!m->is_number_integer()) fail("options.max_sweeps", "expected an integer");
    const auto v = m->get<long long>();
    if (v < 1) fail("options.max_sweeps", "must be >= 1");
    opts.maxSweeps = static_cast<Index>(v);
  }
  if (const json* b = find(j, "log_base")) {
    if (!b->is_string()) fail("options.log_base", "expected 'e' or '2'");
    const std::string s = b->get<std::string>();
    if (s == "e")
      opts.logBase = LogBase::E;
    else if (s == "2")
      opts.logBase = LogBase::Two;
    else
      fail("options.log_base", "must be 'e' or '2'");
  }
  if (const json* t = find(j, "trace")) {
    if (!t->is_boolean()) fail("options.trace", "expected a boolean");
    opts.traceEnabled = t->get<bool>();
  }
  return opts;
}

}  // namespace

ProblemConfig parseConfig(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const json::exception& e) {
    throw StructuralError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw StructuralError("config: top level must be a JSON object");
  rejectUnknownKeys(j,
                    {"input_alphabets", "output_alphabets", "input_distribution", "channel",
                     "constraints", "reference_channel", "options"},
                    "");

  ProblemConfig config;
  const json* in = find(j, "input_alphabets");
  if (!in) fail("input_alphabets", "missing");
  config.inputAlphabets = parseIndexList(*in, "input_alphabets", 1);
  const json* out = find(j, "output_alphabets");
  if (!out) fail("output_alphabets", "missing");
  config.outputAlphabets = parseIndexList(*out, "output_alphabets", 1);

  if (const json* p = find(j, "input_distribution")) {
    if (p->is_string()) {
      if (p->get<std::string>() != "uniform")
        fail("input_distribution", "string form must be 'uniform'");
    } else if (p->is_array()) {
      std::vector<double> v;
      for (std::size_t i = 0; i < p->size(); ++i)
        v.push_back(parseNumber((*p)[i], "input_distribution[" + std::to_string(i) + "]"));
      config.inputDistribution = std::move(v);
    } else {
      fail("input_distribution", "expected 'uniform' or an array of probabilities");
    }
  }

  const json* ch = find(j, "channel");
  if (!ch) fail("channel", "missing");
  config.channel = parseChannelSpec(*ch, "channel");

  if (const json* cs = find(j, "constraints")) {
    if (!cs->is_array()) fail("constraints", "expected an array");
    for (std::size_t i = 0; i < cs->size(); ++i) {
      const json& c = (*cs)[i];
      const std::string field = "constraints[" + std::to_string(i) + "]";
      if (!c.is_object()) fail(field, "expected an object with 'I' and 'J'");
      rejectUnknownKeys(c, {"I", "J"}, field);
      ConstraintConfig cc;
      if (const json* I = find(c, "I")) cc.I = parseIndexList(*I, field + ".I", 0);
      const json* J = find(c, "J");
      if (!J) fail(field + ".J", "missing");
      cc.J = parseIndexList(*J, field + ".J", 0);
      if (cc.J.empty()) fail(field + ".J", "must be nonempty");
      config.constraints.push_back(std::move(cc));
    }
  }

  if (const json* rc = find(j, "reference_channel")) {
    if (rc->is_string()) {
      if (rc->get<std::string>() != "uniform")
        fail("reference_channel", "string form must be 'uniform'");
    } else {
      config.referenceChannel = parseChannelSpec(*rc, "reference_channel");
    }
  }

  if (const json* o = find(j, "options")) config.options = parseOptions(*o);
  return config;
}

ProblemConfig loadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("config: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfig(buf.str());
}

std::string formatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void writeIndexList(std::ostream& os, const std::vector<Index>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
}

void writeChannelSpec(std::ostream& os, const ChannelSpecConfig& spec, const char* indent) {
  if (spec.builtin) {
    os << "{\"builtin\": \"" << *spec.builtin << "\", \"alpha\": " << formatDouble(spec.alpha)
       << ", \"beta\": " << formatDouble(spec.beta) << ", \"noise\": " << formatDouble(spec.noise)
       << ", \"encoding\": \"" << spec.encoding << "\"}";
    return;
  }
  os << "{\n";
  os << indent << "  \"rows\": [\n";
  const auto& rows = *spec.rows;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    os << indent << "    [";
    for (std::size_t y = 0; y < rows[x].size(); ++y)
      os << (y ? ", " : "") << formatDouble(rows[x][y]);
    os << (x + 1 < rows.size() ? "],\n" : "]\n");
  }
  os << indent << "  ]\n" << indent << "}";
}

}  // namespace

std::string dumpConfig(const ProblemConfig& config) {
  std::ostringstream os;
  os << "{\n  \"input_alphabets\": ";
  writeIndexList(os, config.inputAlphabets);
  os << ",\n  \"output_alphabets\": ";
  writeIndexList(os, config.outputAlphabets);
  os << ",\n  \"input_distribution\": ";
  if (config.inputDistribution) {
    os << '[';
    for (std::size_t i = 0; i < config.inputDistribution->size(); ++i)
      os << (i ? ", " : "") << formatDouble((*config.inputDistribution)[i]);
    os << ']';
  } else {
    os << "\"uniform\"";
  }
  os << ",\n  \"channel\": ";
  writeChannelSpec(os, config.channel, "  ");
  os << ",\n  \"constraints\": [";
  for (std::size_t i = 0; i < config.constraints.size(); ++i) {
    os << (i ? ", " : "") << "{\"I\": ";
    writeIndexList(os, config.constraints[i].I);
    os << ", \"J\": ";
    writeIndexList(os, config.constraints[i].J);
    os << '}';
  }
  os << "],\n  \"reference_channel\": ";
  if (config.referenceChannel)
    writeChannelSpec(os, *config.referenceChannel, "  ");
  else
    os << "\"uniform\"";
  os << ",\n  \"options\": {\"tolerance\": " << formatDouble(config.options.tolerance)
     << ", \"max_sweeps\": " << config.options.maxSweeps << ", \"log_base\": \""
     << (config.options.logBase == LogBase::E ? "e" : "2") << "\", \"trace\": "
     << (config.options.traceEnabled ? "true" : "false") << "}\n}\n";
  return os.str();
}

ProductSpace spaceOf(const ProblemConfig& config) {
  try {
    return ProductSpace(config.inputAlphabets, config.outputAlphabets);
  } catch (const StructuralError& e) {
    throw StructuralError(std::string("config.input_alphabets/output_alphabets: ") + e.what());
  }
}

Channel<double> buildChannel(const ChannelSpecConfig& spec, const ProductSpace& space,
                             const std::string& field) {
  if (spec.builtin) {
    const std::string& name = *spec.builtin;
    const bool signedLevels = spec.encoding == "signed";
    InteractionParams<double> params;
    params.alpha = spec.alpha;
    params.beta = spec.beta;
    if (!signedLevels) {
      params.inputLevels = {0.0, 1.0};
      params.outputLevels = {0.0, 1.0};
    }
    Channel<double> built = [&]() -> Channel<double> {
      if (name == "xor") return makeGate(GateKind::Xor, spec.noise);
      if (name == "and") return makeGate(GateKind::And, spec.noise);
      if (name == "interaction") return makeInteractionChannel(params, true);
      if (name == "control") return makeInteractionChannel(params, false);
      fail(field + ".builtin", "unknown builtin '" + name + "' (xor|and|interaction|control)");
    }();
    if (!(built.space() == space))
      fail(field + ".builtin",
           "'" + name + "' does not live on the configured input/output alphabets");
    return built;
  }
  const auto& rows = *spec.rows;
  if (static_cast<Index>(rows.size()) != space.inputSize())
    fail(field + ".rows", "expected " + std::to_string(space.inputSize()) + " rows, got " +
                              std::to_string(rows.size()));
  Matd m(space.inputSize(), space.outputSize());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (static_cast<Index>(rows[x].size()) != space.outputSize())
      fail(field + ".rows[" + std::to_string(x) + "]",
           "expected " + std::to_string(space.outputSize()) + " entries, got " +
               std::to_string(rows[x].size()));
    for (std::size_t y = 0; y < rows[x].size(); ++y) m(static_cast<Index>(x), static_cast<Index>(y)) = rows[x][y];
  }
  try {
    return Channel<double>(space, std::move(m));
  } catch (const StructuralError& e) {
    fail(field + ".rows", e.what());
  }
}

Problem buildProblem(const ProblemConfig& config, bool needConstraints) {
  ProductSpace space = spaceOf(config);
  InputDistribution<double> p = [&] {
    if (!config.inputDistribution) return InputDistribution<double>::uniform(space);
    if (static_cast<Index>(config.inputDistribution->size()) != space.inputSize())
      fail("input_distribution", "expected " + std::to_string(space.inputSize()) + " entries, got " +
                                     std::to_string(config.inputDistribution->size()));
    Vecd v(space.inputSize());
    for (Index i = 0; i < v.size(); ++i) v[i] = (*config.inputDistribution)[static_cast<std::size_t>(i)];
    try {
      return InputDistribution<double>(space, std::move(v));
    } catch (const StructuralError& e) {
      fail("input_distribution", e.what());
    }
  }();

  Channel<double> channel = buildChannel(config.channel, space, "channel");
  Channel<double> reference = config.referenceChannel
                                  ? buildChannel(*config.referenceChannel, space, "reference_channel")
                                  : Channel<double>::uniform(space);

  std::vector<MarginalSpec> specs;
  for (std::size_t i = 0; i < config.constraints.size(); ++i) {
    const std::string field = "constraints[" + std::to_string(i) + "]";
    try {
      MarginalSpec s(config.constraints[i].I, config.constraints[i].J);
      s.validateFor(space);
      specs.push_back(std::move(s));
    } catch (const StructuralError& e) {
      fail(field, e.what());
    }
  }
  if (needConstraints && specs.empty()) fail("constraints", "must be a nonempty list");

  return Problem{std::move(p), std::move(channel), std::move(specs), std::move(reference)};
}

}  // namespace chanscale::cli
