#include "infoloss/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "infoloss/errors.hpp"
#include "infoloss/filter_analysis.hpp"
#include "infoloss/plugin.hpp"
#include "infoloss/reconstruction.hpp"
#include "infoloss/zoo.hpp"

namespace infoloss {

using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::uint64_t env_cap(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(v, &end, 10);
  if (*end != '\0' || parsed == 0) throw ValidationError(std::string(name) + " must be a positive integer");
  return parsed;
}

// ---- config parsing -------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  std::string where(const YAML::Node& node) const {
    const YAML::Mark m = node.Mark();
    if (m.is_null()) return origin_;
    return origin_ + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    throw ConfigError(where(node) + ": " + what);
  }

  YAML::Node require(const YAML::Node& map, const std::string& key, const std::string& section) const {
    if (!map.IsMap()) fail(map, section + " must be a mapping");
    YAML::Node v = map[key];
    if (!v) fail(map, "missing key '" + key + "' in " + section);
    return v;
  }

  void only_keys(const YAML::Node& map, std::initializer_list<const char*> keys, const std::string& section) const {
    if (!map.IsMap()) fail(map, section + " must be a mapping");
    for (const auto& kv : map) {
      const std::string k = kv.first.as<std::string>();
      bool known = false;
      for (const char* allowed : keys) known = known || k == allowed;
      if (!known) fail(kv.first, "unknown key '" + k + "' in " + section);
    }
  }

  template <class T>
  T as(const YAML::Node& node, const std::string& what) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, what + " has the wrong type");
    }
  }

  template <class T>
  std::vector<T> list(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, what + " must be a list");
    std::vector<T> out;
    for (const auto& item : node) out.push_back(as<T>(item, what + " entry"));
    return out;
  }

  std::size_t positive(const YAML::Node& node, const std::string& what) const {
    const auto v = as<long long>(node, what);
    if (v <= 0) fail(node, what + " must be positive");
    return static_cast<std::size_t>(v);
  }

  std::size_t count(const YAML::Node& node, const std::string& what) const {
    const auto v = as<long long>(node, what);
    if (v < 0) fail(node, what + " must be non-negative");
    return static_cast<std::size_t>(v);
  }

  void parse_alphabets(const YAML::Node& node) {
    if (!node) return;
    if (!node.IsMap()) fail(node, "alphabets must be a mapping");
    for (const auto& kv : node) {
      const std::string name = kv.first.as<std::string>();
      const YAML::Node& def = kv.second;
      try {
        if (def.IsScalar()) {
          alphabets_.emplace(name, ring_alphabet(def));
        } else if (def.IsMap() && def["ring"]) {
          only_keys(def, {"ring"}, "alphabet '" + name + "'");
          alphabets_.emplace(name, ring_alphabet(def["ring"]));
        } else if (def.IsMap() && def["labels"] && def["add"]) {
          only_keys(def, {"labels", "add", "mul", "zero", "one"}, "alphabet '" + name + "'");
          const auto names = list<std::string>(def["labels"], "labels");
          const Alphabet plain(names);
          RingTables t;
          t.add = table(plain, require(def, "add", "ring alphabet"), "add");
          t.mul = table(plain, require(def, "mul", "ring alphabet"), "mul");
          t.zero = symbol(plain, require(def, "zero", "ring alphabet"), "zero");
          t.one = symbol(plain, require(def, "one", "ring alphabet"), "one");
          alphabets_.emplace(name, Alphabet(names, std::move(t)));
        } else if (def.IsMap() && def["labels"]) {
          only_keys(def, {"labels"}, "alphabet '" + name + "'");
          alphabets_.emplace(name, Alphabet(list<std::string>(def["labels"], "labels")));
        } else if (def.IsMap() && def["integers"]) {
          only_keys(def, {"integers"}, "alphabet '" + name + "'");
          const auto values = list<std::int64_t>(def["integers"], "integers");
          alphabets_.emplace(name, Alphabet::integers(values));
        } else {
          fail(def, "alphabet '" + name + "' needs one of ring, labels, integers");
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const ValidationError& e) {
        fail(def, e.what());
      }
    }
  }

  Symbol symbol(const Alphabet& a, const YAML::Node& node, const std::string& what) const {
    const auto s = a.find(as<std::string>(node, what));
    if (!s) fail(node, what + " '" + node.as<std::string>() + "' is not in the alphabet");
    return *s;
  }

  /// |X| x |X| operation table of labels, row-major.
  std::vector<Symbol> table(const Alphabet& a, const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence() || node.size() != a.size()) fail(node, what + " must have one row per symbol");
    std::vector<Symbol> out;
    for (const auto& row : node) {
      if (!row.IsSequence() || row.size() != a.size()) fail(row, what + " rows must have one entry per symbol");
      for (const auto& e : row) out.push_back(symbol(a, e, what + " entry"));
    }
    return out;
  }

  Alphabet ring_alphabet(const YAML::Node& node) const {
    const std::string spec = as<std::string>(node, "ring");
    if (spec.rfind("mod-", 0) == 0) {
      try {
        const unsigned long q = std::stoul(spec.substr(4));
        if (q >= 1 && q <= 4096) return Alphabet::modular(static_cast<std::uint32_t>(q));
      } catch (const std::exception&) {
      }
    }
    fail(node, "ring must be written mod-q with 1 <= q <= 4096, got '" + spec + "'");
  }

  /// A named alphabet, "mod-q", or an inline label list.
  Alphabet alphabet(const YAML::Node& node) const {
    if (node.IsSequence()) return Alphabet(list<std::string>(node, "alphabet labels"));
    const std::string name = as<std::string>(node, "alphabet");
    if (auto it = alphabets_.find(name); it != alphabets_.end()) return it->second;
    if (name.rfind("mod-", 0) == 0) return ring_alphabet(node);
    fail(node, "undefined alphabet '" + name + "'");
  }

  std::vector<Symbol> symbols(const Alphabet& a, const YAML::Node& node, const std::string& what) const {
    std::vector<Symbol> out;
    if (!node.IsSequence()) fail(node, what + " must be a list");
    for (const auto& item : node) out.push_back(symbol(a, item, what + " entry"));
    return out;
  }

  SystemSpec stage(const YAML::Node& node, std::string& description) const {
    const std::string kind = as<std::string>(require(node, "kind", "system"), "kind");
    description = kind;
    auto section = "system '" + kind + "'";
    try {
      if (kind == "identity") {
        only_keys(node, {"kind", "alphabet"}, section);
        return identity_system(alphabet(require(node, "alphabet", section)));
      }
      if (kind == "constant") {
        only_keys(node, {"kind", "input", "output", "value"}, section);
        const Alphabet out = alphabet(require(node, "output", section));
        return constant_system(alphabet(require(node, "input", section)), out,
                               symbol(out, require(node, "value", section), "value"));
      }
      if (kind == "static") {
        only_keys(node, {"kind", "input", "output", "map"}, section);
        const Alphabet out = alphabet(require(node, "output", section));
        return static_system(alphabet(require(node, "input", section)), out,
                             symbols(out, require(node, "map", section), "map"));
      }
      if (kind == "squarer") {
        only_keys(node, {"kind", "values"}, section);
        if (!node["values"]) return squarer_system();
        const auto values = list<std::int64_t>(node["values"], "values");
        return squarer_system(values);
      }
      if (kind == "xor" || kind == "xor-filter") {
        only_keys(node, {"kind"}, section);
        return xor_filter();
      }
      if (kind == "and") {
        only_keys(node, {"kind"}, section);
        return binary_and_system();
      }
      if (kind == "multiplier") {
        only_keys(node, {"kind", "values", "alphabet"}, section);
        if (node["values"]) {
          const auto values = list<std::int64_t>(node["values"], "values");
          return multiplier_system(values);
        }
        return multiplier_system(alphabet(require(node, "alphabet", section)));
      }
      if (kind == "ring-filter") {
        only_keys(node, {"kind", "alphabet", "b", "a"}, section);
        const Alphabet ring = alphabet(require(node, "alphabet", section));
        FilterCoeffs c{symbols(ring, require(node, "b", section), "b"), {}};
        if (node["a"]) c.a = symbols(ring, node["a"], "a");
        return ring_linear_filter(ring, c);
      }
      if (kind == "fixed-point") {
        only_keys(node, {"kind", "k", "frac_bits", "b", "a", "placement"}, section);
        const auto k = positive(require(node, "k", section), "k");
        const auto f = node["frac_bits"] ? count(node["frac_bits"], "frac_bits") : 0;
        FixedPointCoeffs c{list<std::int64_t>(require(node, "b", section), "b"), {}};
        if (node["a"]) c.a = list<std::int64_t>(node["a"], "a");
        QuantizerPlacement p = QuantizerPlacement::kAfterAccumulate;
        if (node["placement"]) {
          const auto s = as<std::string>(node["placement"], "placement");
          if (s == "after-multiply") {
            p = QuantizerPlacement::kAfterMultiply;
          } else if (s != "after-accumulate") {
            fail(node["placement"], "placement must be after-accumulate or after-multiply");
          }
        }
        if (k + f > 24) fail(node, "k + frac_bits must not exceed 24");
        const auto q = Quantizer::truncating(static_cast<unsigned>(k), static_cast<unsigned>(f));
        return fixed_point_filter(Alphabet::modular(1u << k), c, q, p);
      }
      if (kind == "hammerstein") {
        only_keys(node, {"kind", "g", "filter"}, section);
        std::string inner;
        const SystemSpec g = stage(require(node, "g", section), inner);
        const SystemSpec filter = stage(require(node, "filter", section), inner);
        return hammerstein_system(g, filter);
      }
      if (kind == "table") {
        only_keys(node, {"kind", "input", "output", "N", "M", "table"}, section);
        const Alphabet out = alphabet(require(node, "output", section));
        return SystemSpec::from_table(alphabet(require(node, "input", section)), out,
                                      node["N"] ? count(node["N"], "N") : 0, node["M"] ? count(node["M"], "M") : 0,
                                      symbols(out, require(node, "table", section), "table"));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(node, e.what());
    }
    fail(node["kind"], "unknown system kind '" + kind + "'");
  }

  SystemSpec system(const YAML::Node& node, std::string& description) const {
    if (node.IsSequence()) {
      if (node.size() == 0) fail(node, "system list is empty");
      std::string part;
      SystemSpec s = stage(node[0], description);
      for (std::size_t i = 1; i < node.size(); ++i) {
        SystemSpec next = stage(node[i], part);
        try {
          s = cascade(s, next);
        } catch (const ValidationError& e) {
          fail(node[i], e.what());
        }
        description += " -> " + part;
      }
      return s;
    }
    return stage(node, description);
  }

  MarkovSource source(const YAML::Node& node, const SystemSpec& system) const {
    only_keys(node, {"alphabet", "uniform", "iid", "transition"}, "source");
    Alphabet a = system.input_alphabet();
    if (node["alphabet"]) {
      Alphabet given = alphabet(node["alphabet"]);
      if (!(given == a)) fail(node["alphabet"], "source alphabet differs from the system input alphabet");
    }
    const int given = (node["uniform"] ? 1 : 0) + (node["iid"] ? 1 : 0) + (node["transition"] ? 1 : 0);
    if (given != 1) fail(node, "source needs exactly one of uniform, iid, transition");
    try {
      if (node["uniform"]) {
        if (!as<bool>(node["uniform"], "uniform")) fail(node["uniform"], "uniform must be true");
        const std::vector<double> pmf(a.size(), 1.0 / static_cast<double>(a.size()));
        return make_iid(a, pmf);
      }
      if (node["iid"]) {
        const auto pmf = list<double>(node["iid"], "iid");
        return make_iid(a, pmf);
      }
      const YAML::Node rows = node["transition"];
      if (!rows.IsSequence()) fail(rows, "transition must be a list of rows");
      std::vector<double> p;
      for (const auto& row : rows) {
        const auto r = list<double>(row, "transition row");
        p.insert(p.end(), r.begin(), r.end());
      }
      return MarkovSource(a, std::move(p));
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(node, e.what());
    }
  }

  AnalysisRequest analysis(const YAML::Node& node) const {
    std::string kind;
    YAML::Node params;
    if (node.IsScalar()) {
      kind = node.as<std::string>();
    } else if (node.IsMap() && node.size() == 1) {
      kind = node.begin()->first.as<std::string>();
      params = node.begin()->second;
    } else {
      fail(node, "an analysis is a name or a single-key mapping");
    }
    const bool has = params && params.IsMap();
    auto get = [&](const char* key) {
      const YAML::Node p = params;
      return has && p[key] ? p[key] : YAML::Node(YAML::NodeType::Undefined);
    };
    auto check_keys = [&](std::initializer_list<const char*> keys) {
      if (params && !params.IsNull()) only_keys(params, keys, "analysis '" + kind + "'");
    };
    AnalysisRequest r;
    if (kind == "loss-report") {
      r.kind = AnalysisKind::kLossReport;
      check_keys({});
    } else if (kind == "finite-length") {
      r.kind = AnalysisKind::kFiniteLength;
      check_keys({"K"});
      if (!has) fail(node, "finite-length needs K");
      r.K = positive(require(params, "K", "finite-length"), "K");
    } else if (kind == "bound") {
      r.kind = AnalysisKind::kBound;
      check_keys({});
    } else if (kind == "invertibility") {
      r.kind = AnalysisKind::kInvertibility;
      check_keys({});
    } else if (kind == "round-trip") {
      r.kind = AnalysisKind::kRoundTrip;
      check_keys({"length", "count", "seed"});
      r.length = get("length") ? positive(get("length"), "length") : 256;
      r.count = get("count") ? positive(get("count"), "count") : 100;
      r.seed = get("seed") ? as<std::uint64_t>(get("seed"), "seed") : 1;
    } else if (kind == "filter-analysis") {
      r.kind = AnalysisKind::kFilterAnalysis;
      check_keys({"b", "a"});
      if (!has) fail(node, "filter-analysis needs b");
      r.b = list<double>(require(params, "b", "filter-analysis"), "b");
      if (get("a")) r.a = list<double>(get("a"), "a");
    } else if (kind == "plugin") {
      r.kind = AnalysisKind::kPlugin;
      check_keys({"length", "block", "seed"});
      if (!has) fail(node, "plugin needs length and block");
      r.length = positive(require(params, "length", "plugin"), "length");
      r.block = positive(require(params, "block", "plugin"), "block");
      r.seed = get("seed") ? as<std::uint64_t>(get("seed"), "seed") : 1;
    } else {
      fail(node, "unknown analysis '" + kind + "'");
    }
    return r;
  }

 private:
  std::string origin_;
  std::map<std::string, Alphabet> alphabets_;
};

}  // namespace

AnalysisCaps default_caps() {
  return {env_cap("INFOLOSS_STATE_CAP", kDefaultStateCap), env_cap("INFOLOSS_PATH_CAP", kDefaultPathCap)};
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
  Parser p(origin);
  if (!root.IsMap()) throw ConfigError(origin + ": top level must be a mapping");
  p.only_keys(root, {"alphabets", "source", "system", "analyses", "caps", "tolerances", "output"}, "config");
  p.parse_alphabets(root["alphabets"]);

  std::string description;
  SystemSpec system = p.system(p.require(root, "system", "config"), description);
  MarkovSource source = p.source(p.require(root, "source", "config"), system);

  std::vector<AnalysisRequest> analyses;
  const YAML::Node list = root["analyses"];
  if (!list) {
    analyses.push_back({});
  } else {
    if (!list.IsSequence()) p.fail(list, "analyses must be a list");
    for (const auto& item : list) analyses.push_back(p.analysis(item));
  }

  LossOptions loss;
  loss.caps = default_caps();
  if (const YAML::Node caps = root["caps"]) {
    p.only_keys(caps, {"paths", "states"}, "caps");
    if (caps["paths"]) loss.caps.paths = p.positive(caps["paths"], "caps.paths");
    if (caps["states"]) loss.caps.states = p.positive(caps["states"], "caps.states");
  }
  if (const YAML::Node tol = root["tolerances"]) {
    p.only_keys(tol, {"bracket", "max_n"}, "tolerances");
    if (tol["bracket"]) {
      loss.tolerance = p.as<double>(tol["bracket"], "tolerances.bracket");
      if (!(loss.tolerance > 0)) p.fail(tol["bracket"], "tolerances.bracket must be positive");
    }
    if (tol["max_n"]) {
      loss.max_n = p.positive(tol["max_n"], "tolerances.max_n");
      if (loss.max_n < 2) p.fail(tol["max_n"], "tolerances.max_n must be at least 2");
    }
  }
  ReportFormat format = ReportFormat::kJson;
  bool timing = false;
  if (const YAML::Node out = root["output"]) {
    p.only_keys(out, {"format", "timing"}, "output");
    if (out["format"]) {
      const auto f = p.as<std::string>(out["format"], "output.format");
      if (f == "text") {
        format = ReportFormat::kText;
      } else if (f != "json") {
        p.fail(out["format"], "output.format must be json or text");
      }
    }
    if (out["timing"]) timing = p.as<bool>(out["timing"], "output.timing");
  }
  return ExperimentConfig{origin,          std::move(source), std::move(system), std::move(description),
                          std::move(analyses), loss,          format,            timing};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

// ---- running ----------------------------------------------------------------

namespace {

ordered_json labels(const Alphabet& a) { return a.labels(); }

ordered_json system_json(const ExperimentConfig& c) {
  const SystemSpec& s = c.system;
  ordered_json j;
  j["description"] = c.system_description;
  j["input_alphabet"] = labels(s.input_alphabet());
  j["output_alphabet"] = labels(s.output_alphabet());
  j["input_memory"] = s.input_memory();
  j["output_memory"] = s.output_memory();
  j["stages"] = s.stages().size();
  return j;
}

ordered_json source_json(const MarkovSource& src) {
  ordered_json j;
  j["alphabet"] = labels(src.alphabet());
  j["iid"] = src.is_iid();
  j["transition"] = src.transition_matrix();
  j["stationary"] = src.stationary();
  j["entropy_rate_bits"] = source_entropy_rate(src);
  return j;
}

struct Runner {
  const ExperimentConfig& config;
  ordered_json checks = ordered_json::array();
  bool passed = true;

  void check(const std::string& analysis, const std::string& name, bool ok, const std::string& detail,
             bool skipped = false) {
    checks.push_back({{"analysis", analysis}, {"name", name}, {"passed", ok}, {"skipped", skipped}, {"detail", detail}});
    passed = passed && (ok || skipped);
  }

  ordered_json loss_report() {
    const LossReport r = loss_rate_report(config.source, config.system, config.loss);
    const RateBracket& b = r.output_bracket;
    ordered_json j;
    j["input_rate_bits"] = r.input_rate;
    j["output_rate_bracket"] = {{"lower", b.lower},
                                {"upper", b.upper},
                                {"width", b.width()},
                                {"block_length", b.block_length},
                                {"converged", b.converged},
                                {"truncated", b.truncated},
                                {"upper_by_length", b.upper_by_length},
                                {"lower_by_length", b.lower_by_length}};
    j["loss_rate_bracket"] = {{"lower", r.loss_lower}, {"upper", r.loss_upper}};
    j["preimage_bound_bits"] = r.preimage_bound;
    j["invertible"] = r.invertible;
    j["diagnostics"] = {{"chain_states", r.chain_states},
                        {"peak_entries", b.peak_entries},
                        {"pruned_mass", b.pruned_mass},
                        {"path_cap", config.loss.caps.paths},
                        {"state_cap", config.loss.caps.states}};
    for (const auto& c : r.checks) check("loss-report", c.name, c.passed, c.detail, c.skipped);
    return j;
  }

  ordered_json finite_length(const AnalysisRequest& a) {
    const FiniteLengthLoss f = finite_length_loss(config.source, config.system, a.K, config.loss.caps);
    const bool invertible = check_partial_invertibility(config.system).invertible;
    ordered_json j{{"K", a.K}, {"memory", f.memory}, {"lhs_bits", f.lhs}, {"rhs_bits", f.rhs},
                   {"invertible", invertible}};
    // Only asserted for partially invertible systems; otherwise rhs is a diagnostic.
    if (invertible) {
      std::ostringstream d;
      d << std::setprecision(17) << "H(X^K|Y^K) = " << f.lhs << ", H(X^m|Y^K) = " << f.rhs;
      check("finite-length", "finite-length-identity", std::abs(f.lhs - f.rhs) <= kIdentityTolerance, d.str());
    }
    return j;
  }

  ordered_json bound() {
    return {{"preimage_bound_bits", preimage_bound(config.system)},
            {"max_preimage_size", max_preimage_size(config.system)}};
  }

  ordered_json invertibility() {
    const auto v = check_partial_invertibility(config.system);
    ordered_json j{{"invertible", v.invertible}};
    if (v.witness) {
      const auto& in = config.system.input_alphabet();
      j["witness"] = {{"theta", v.witness->theta},
                      {"x", in.label(v.witness->x)},
                      {"x_other", in.label(v.witness->x_other)}};
    } else {
      j["witness"] = nullptr;
    }
    return j;
  }

  ordered_json round_trip_analysis(const AnalysisRequest& a) {
    const auto v = check_partial_invertibility(config.system);
    if (!v.invertible) throw UnsupportedAnalysis("round-trip needs a partially invertible system");
    std::size_t ok = 0;
    ordered_json failures = ordered_json::array();
    for (std::size_t i = 0; i < a.count; ++i) {
      const auto x = sample_path(config.source, a.length, a.seed + i);
      const RoundTrip r = round_trip(*v.inverse, x, config.system.zero_state());
      if (r.passed) {
        ++ok;
      } else {
        failures.push_back({{"sequence", i}, {"first_mismatch", r.first_mismatch ? ordered_json(*r.first_mismatch)
                                                                                   : ordered_json(nullptr)}});
      }
    }
    ordered_json j{{"count", a.count}, {"length", a.length}, {"seed", a.seed}, {"passed", ok},
                   {"failures", failures}};
    check("round-trip", "round-trip", ok == a.count,
          std::to_string(ok) + " of " + std::to_string(a.count) + " sequences reconstructed bit-exactly");
    return j;
  }

  ordered_json filter(const AnalysisRequest& a) {
    ordered_json j = filter_report(a.b, a.a);
    const double gap = j["agreement_gap_nats"].get<double>();
    std::ostringstream d;
    d << std::setprecision(17) << "integral and root formula differ by " << gap << " nats";
    check("filter-analysis", "rate-change-agreement", gap <= 1e-6, d.str());
    return j;
  }

  ordered_json plugin(const AnalysisRequest& a) {
    const auto x = sample_path(config.source, a.length, a.seed);
    const auto y = simulate(config.system, x);
    const PluginEstimate e = plugin_estimate(x, y, a.block, config.system.input_alphabet().size(),
                                             config.system.output_alphabet().size());
    return {{"length", a.length},        {"block", a.block},
            {"seed", a.seed},            {"input_rate_bits", e.hx},
            {"output_rate_bits", e.hy},  {"loss_rate_bits", e.loss},
            {"coverage_warning", e.coverage_warning}};
  }

  ordered_json run(const AnalysisRequest& a) {
    switch (a.kind) {
      case AnalysisKind::kLossReport: return loss_report();
      case AnalysisKind::kFiniteLength: return finite_length(a);
      case AnalysisKind::kBound: return bound();
      case AnalysisKind::kInvertibility: return invertibility();
      case AnalysisKind::kRoundTrip: return round_trip_analysis(a);
      case AnalysisKind::kFilterAnalysis: return filter(a);
      case AnalysisKind::kPlugin: return plugin(a);
    }
    return {};
  }
};

const char* kind_name(AnalysisKind k) {
  switch (k) {
    case AnalysisKind::kLossReport: return "loss-report";
    case AnalysisKind::kFiniteLength: return "finite-length";
    case AnalysisKind::kBound: return "bound";
    case AnalysisKind::kInvertibility: return "invertibility";
    case AnalysisKind::kRoundTrip: return "round-trip";
    case AnalysisKind::kFilterAnalysis: return "filter-analysis";
    case AnalysisKind::kPlugin: return "plugin";
  }
  return "?";
}

ExperimentReport run_requests(const ExperimentConfig& config, const std::vector<AnalysisRequest>& requests) {
  Runner runner{config};
  ordered_json doc;
  doc["tool"] = "infoloss";
  doc["version"] = kVersion;
  doc["config"] = config.origin;
  doc["system"] = system_json(config);
  doc["source"] = source_json(config.source);
  ordered_json analyses = ordered_json::array();
  for (const auto& req : requests) {
    const auto start = std::chrono::steady_clock::now();
    ordered_json entry{{"type", kind_name(req.kind)}};
    ordered_json body = runner.run(req);
    for (auto& [k, v] : body.items()) entry[k] = v;
    if (config.timing) {
      entry["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    analyses.push_back(std::move(entry));
  }
  doc["analyses"] = std::move(analyses);
  doc["checks"] = runner.checks;
  doc["passed"] = runner.passed;
  return {std::move(doc), runner.passed};
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) { return run_requests(config, config.analyses); }

ExperimentReport run_round_trip(const ExperimentConfig& config) {
  std::vector<AnalysisRequest> requests;
  for (const auto& a : config.analyses) {
    if (a.kind == AnalysisKind::kRoundTrip) requests.push_back(a);
  }
  if (requests.empty()) {
    AnalysisRequest r;
    r.kind = AnalysisKind::kRoundTrip;
    r.length = 256;
    r.count = 100;
    r.seed = 1;
    requests.push_back(r);
  }
  return run_requests(config, requests);
}

ordered_json filter_report(const std::vector<double>& b, const std::vector<double>& a) {
  const TransferFunction tf(b, a);
  auto roots = [](const std::vector<std::complex<double>>& zs) {
    ordered_json out = ordered_json::array();
    for (const auto& z : zs) out.push_back({z.real(), z.imag()});
    return out;
  };
  const double integral = rate_change_integral(tf);
  const double formula = rate_change_roots(tf);
  ordered_json j;
  j["b"] = b;
  j["a"] = a;
  j["zeros"] = roots(tf.zeros());
  j["poles"] = roots(tf.poles());
  j["differential_entropy_rate_change_nats"] = {{"integral", integral}, {"roots", formula}};
  j["agreement_gap_nats"] = std::abs(integral - formula);
  j["minimum_phase"] = is_minimum_phase(tf);
  return j;
}

ordered_json suite_report_json(const SuiteReport& report) {
  ordered_json cases = ordered_json::array();
  for (const auto& c : report.cases) {
    cases.push_back({{"index", c.index}, {"passed", c.passed}, {"instance", c.instance}, {"detail", c.detail}});
  }
  return {{"tool", "infoloss"},
          {"version", kVersion},
          {"suite", report.name},
          {"seed", report.seed},
          {"instances", report.cases.size()},
          {"passed_count", report.passed()},
          {"passed", report.all_passed()},
          {"cases", cases}};
}

namespace {

void flatten(const ordered_json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  const bool scalar_array =
      j.is_array() && std::all_of(j.begin(), j.end(), [](const ordered_json& e) { return e.is_primitive(); });
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), rows);
  } else if (j.is_array() && !scalar_array) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_string()) {
    rows.emplace_back(path, j.get<std::string>());
  } else {
    rows.emplace_back(path, j.dump());
  }
}

}  // namespace

std::string render_text(const ordered_json& document) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(document, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream out;
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  return out.str();
}

std::string render(const ordered_json& document, ReportFormat format) {
  return format == ReportFormat::kJson ? document.dump(2) + "\n" : render_text(document);
}

}  // namespace infoloss
