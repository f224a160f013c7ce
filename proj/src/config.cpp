#include "arp/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "arp/errors.hpp"

namespace arp {

std::string to_string(OutputKind kind) {
  switch (kind) {
    case OutputKind::trace_csv: return "trace_csv";
    case OutputKind::order_report: return "order_report";
    case OutputKind::cycle_report: return "cycle_report";
    case OutputKind::audit_report: return "audit_report";
    case OutputKind::plotdata: return "plotdata";
  }
  return "unknown";
}

namespace {

struct Value {
  bool is_list = false;
  std::string scalar;
  std::vector<std::string> items;
  int line = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  std::map<std::string, Value> parse() {
    std::map<std::string, Value> out;
    std::size_t start = 0;
    int line = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++line;
      parse_line(text_.substr(start, end - start), line, out);
      start = end + 1;
    }
    return out;
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

 private:
  void parse_line(std::string_view s, int line, std::map<std::string, Value>& out) {
    pos_ = 0;
    line_ = s;
    skip_ws();
    if (at_end()) return;
    while (true) {
      std::string key = read_key(line);
      skip_ws();
      if (at_end() || line_[pos_] != '=') fail(line, "expected '=' after key '" + key + "'");
      ++pos_;
      skip_ws();
      Value v = read_value(line, key);
      v.line = line;
      if (out.count(key)) fail(line, "field '" + key + "': duplicate key");
      out.emplace(key, std::move(v));
      skip_ws();
      if (at_end()) return;
      if (line_[pos_] != ',') fail(line, "field '" + key + "': unexpected text after value");
      ++pos_;
      skip_ws();
      if (at_end()) return;
    }
  }

  bool at_end() const { return pos_ >= line_.size() || line_[pos_] == '#'; }

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }

  std::string read_key(int line) {
    const std::size_t b = pos_;
    while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_')) ++pos_;
    if (b == pos_) fail(line, "expected a key");
    return std::string(line_.substr(b, pos_ - b));
  }

  std::string read_atom(int line, const std::string& key) {
    if (pos_ < line_.size() && line_[pos_] == '"') {
      const std::size_t close = line_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail(line, "field '" + key + "': unterminated string");
      std::string s(line_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return s;
    }
    const std::size_t b = pos_;
    while (pos_ < line_.size() && line_[pos_] != ',' && line_[pos_] != ']' && line_[pos_] != '#' &&
           !std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
    if (b == pos_) fail(line, "field '" + key + "': missing value");
    return std::string(line_.substr(b, pos_ - b));
  }

  Value read_value(int line, const std::string& key) {
    Value v;
    if (pos_ < line_.size() && line_[pos_] == '[') {
      v.is_list = true;
      ++pos_;
      skip_ws();
      if (pos_ < line_.size() && line_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        skip_ws();
        v.items.push_back(read_atom(line, key));
        skip_ws();
        if (pos_ >= line_.size()) fail(line, "field '" + key + "': unterminated list");
        if (line_[pos_] == ']') {
          ++pos_;
          return v;
        }
        if (line_[pos_] != ',') fail(line, "field '" + key + "': expected ',' or ']' in list");
        ++pos_;
      }
    }
    v.scalar = read_atom(line, key);
    return v;
  }

  std::string_view text_;
  std::string source_;
  std::string_view line_;
  std::size_t pos_ = 0;
};

bool valid_decimal(const std::string& s) {
  try {
    PrecisionScope scope(PrecisionConfig::kMinBits);
    (void)parse_real_literal(s);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace

Real parse_real_literal(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Real::from_string(text);
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  auto integral = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  if (!integral(num) || !integral(den)) throw DomainError("malformed rational '" + text + "'");
  const Real d = Real::from_string(den);
  if (d.is_zero()) throw DomainError("zero denominator in '" + text + "'");
  return Real::from_string(num) / d;
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  Parser parser(text, source);
  auto fields = parser.parse();
  ExperimentConfig cfg;

  static const std::set<std::string> known = {
      "name",   "objective", "p",      "q",      "coeffs",   "solver",    "precision_bits",
      "x0",     "eta",       "eta1",   "eta2",   "gamma1",   "gamma2",    "theta",
      "sigma0", "sigma_min", "policy", "max_iterations", "grad_tol", "dist_tol", "outputs"};
  for (const auto& [key, v] : fields) {
    if (!known.count(key)) parser.fail(v.line, "field '" + key + "': unknown key");
  }

  auto scalar = [&](const std::string& key) -> std::optional<std::pair<std::string, int>> {
    auto it = fields.find(key);
    if (it == fields.end()) return std::nullopt;
    if (it->second.is_list) parser.fail(it->second.line, "field '" + key + "': expected a single value");
    return std::make_pair(it->second.scalar, it->second.line);
  };
  auto integer = [&](const std::string& key, int& dst) {
    if (auto v = scalar(key)) {
      std::size_t used = 0;
      try {
        dst = std::stoi(v->first, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != v->first.size()) parser.fail(v->second, "field '" + key + "': malformed integer '" + v->first + "'");
    }
  };
  auto decimal = [&](const std::string& key, std::string& dst) {
    if (auto v = scalar(key)) {
      if (!valid_decimal(v->first)) parser.fail(v->second, "field '" + key + "': malformed number '" + v->first + "'");
      dst = v->first;
      return true;
    }
    return false;
  };
  auto opt_decimal = [&](const std::string& key, std::optional<std::string>& dst) {
    std::string s;
    if (decimal(key, s)) dst = s;
  };

  if (auto v = scalar("name")) cfg.name = v->first;
  if (auto v = scalar("objective")) {
    cfg.objective = v->first;
  } else {
    throw ConfigError(source + ": field 'objective': required");
  }
  integer("p", cfg.p);
  if (fields.count("q")) {
    int q = 0;
    integer("q", q);
    cfg.q = q;
  }
  if (auto it = fields.find("coeffs"); it != fields.end()) {
    if (!it->second.is_list) parser.fail(it->second.line, "field 'coeffs': expected a list");
    for (const auto& c : it->second.items) {
      if (!valid_decimal(c)) parser.fail(it->second.line, "field 'coeffs': malformed decimal '" + c + "'");
    }
    cfg.coeffs = it->second.items;
  }
  if (auto v = scalar("solver")) cfg.solver = v->first;
  integer("precision_bits", cfg.precision_bits);
  if (!decimal("x0", cfg.x0)) throw ConfigError(source + ": field 'x0': required");
  if (fields.count("eta")) {
    if (fields.count("eta1") || fields.count("eta2")) {
      parser.fail(fields.at("eta").line, "field 'eta': cannot be combined with eta1/eta2");
    }
    decimal("eta", cfg.eta1);
    cfg.eta2 = cfg.eta1;
  }
  decimal("eta1", cfg.eta1);
  decimal("eta2", cfg.eta2);
  decimal("gamma1", cfg.gamma1);
  decimal("gamma2", cfg.gamma2);
  decimal("theta", cfg.theta);
  decimal("sigma0", cfg.sigma0);
  opt_decimal("sigma_min", cfg.sigma_min);
  opt_decimal("grad_tol", cfg.grad_tol);
  opt_decimal("dist_tol", cfg.dist_tol);
  if (auto v = scalar("policy")) cfg.policy = v->first;
  integer("max_iterations", cfg.max_iterations);
  if (auto it = fields.find("outputs"); it != fields.end()) {
    std::vector<std::string> names = it->second.is_list ? it->second.items : std::vector<std::string>{it->second.scalar};
    for (const auto& n : names) {
      bool found = false;
      for (auto k : {OutputKind::trace_csv, OutputKind::order_report, OutputKind::cycle_report,
                     OutputKind::audit_report, OutputKind::plotdata}) {
        if (to_string(k) == n) {
          cfg.outputs.push_back(k);
          found = true;
        }
      }
      if (!found) parser.fail(it->second.line, "field 'outputs': unknown output '" + n + "'");
    }
  } else {
    cfg.outputs = {OutputKind::trace_csv};
  }

  auto line_of = [&](const std::string& key) { return fields.count(key) ? fields.at(key).line : 0; };
  if (cfg.objective != "exampleA" && cfg.objective != "exampleB" && cfg.objective != "poly1d") {
    parser.fail(line_of("objective"), "field 'objective': unknown objective '" + cfg.objective + "'");
  }
  if (cfg.objective == "exampleB" && !cfg.q) throw ConfigError(source + ": field 'q': required for exampleB");
  if (cfg.objective == "poly1d" && cfg.coeffs.empty()) throw ConfigError(source + ": field 'coeffs': required for poly1d");
  if (cfg.objective != "poly1d" && !cfg.coeffs.empty()) {
    parser.fail(line_of("coeffs"), "field 'coeffs': only valid with objective = \"poly1d\"");
  }
  if (cfg.solver != "arp" && cfg.solver != "newton") {
    parser.fail(line_of("solver"), "field 'solver': expected \"arp\" or \"newton\"");
  }
  if (cfg.policy != "global" && cfg.policy != "component" && cfg.policy != "nearest_ref" && cfg.policy != "closed_form_b") {
    parser.fail(line_of("policy"), "field 'policy': unknown policy '" + cfg.policy + "'");
  }
  if (cfg.precision_bits < PrecisionConfig::kMinBits) {
    parser.fail(line_of("precision_bits"), "field 'precision_bits': must be at least 53");
  }
  if (cfg.max_iterations < 0) parser.fail(line_of("max_iterations"), "field 'max_iterations': must be nonnegative");
  if (cfg.p < 1) parser.fail(line_of("p"), "field 'p': must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

ObjectiveSpec build_objective(const ExperimentConfig& cfg) {
  try {
    if (cfg.objective == "exampleA") return builtin_example_A();
    if (cfg.objective == "exampleB") return builtin_example_B(cfg.p, *cfg.q);
    return make_polynomial_objective("poly1d", [&] {
      std::vector<Real> c;
      for (const auto& s : cfg.coeffs) c.push_back(parse_real_literal(s));
      return Polynomial1D(std::move(c));
    }());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("field 'objective': ") + e.what());
  }
}

SelectionPolicy make_policy(const std::string& name, const ObjectiveSpec& f, int p, std::optional<int> q) {
  if (name == "global") return GlobalMin{};
  if (name == "component") return LocalComponent{};
  if (name == "nearest_ref") {
    if (!f.meta) throw ConfigError("field 'policy': nearest_ref needs an objective with a known minimizer");
    return NearestToRef{f.meta->x_star};
  }
  if (name == "closed_form_b") {
    if (!q || f.id.rfind("exampleB", 0) != 0) throw ConfigError("field 'policy': closed_form_b applies only to exampleB");
    return ClosedFormExampleB{p, *q};
  }
  throw ConfigError("field 'policy': unknown policy '" + name + "'");
}

namespace {

StopRule build_stop(const ExperimentConfig& cfg, const ObjectiveSpec& f) {
  StopRule stop;
  if (cfg.grad_tol) stop.grad_tol = parse_real_literal(*cfg.grad_tol);
  if (cfg.dist_tol) {
    if (!f.meta) throw ConfigError("field 'dist_tol': objective has no known minimizer");
    stop.dist_tol = parse_real_literal(*cfg.dist_tol);
  }
  return stop;
}

}  // namespace

ArpConfig build_arp_config(const ExperimentConfig& cfg, const ObjectiveSpec& f) {
  ArpConfig a;
  a.p = cfg.p;
  a.eta1 = parse_real_literal(cfg.eta1);
  a.eta2 = parse_real_literal(cfg.eta2);
  a.gamma1 = parse_real_literal(cfg.gamma1);
  a.gamma2 = parse_real_literal(cfg.gamma2);
  a.theta = parse_real_literal(cfg.theta);
  a.sigma0 = parse_real_literal(cfg.sigma0);
  if (cfg.sigma_min) a.sigma_min = parse_real_literal(*cfg.sigma_min);
  a.policy = make_policy(cfg.policy, f, cfg.p, cfg.q);
  a.max_iterations = cfg.max_iterations;
  a.stop = build_stop(cfg, f);
  try {
    a.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("algorithm parameters: ") + e.what());
  }
  return a;
}

NewtonConfig build_newton_config(const ExperimentConfig& cfg, const ObjectiveSpec& f) {
  NewtonConfig n;
  n.max_iterations = cfg.max_iterations;
  n.stop = build_stop(cfg, f);
  return n;
}

Real build_x0(const ExperimentConfig& cfg) { return parse_real_literal(cfg.x0); }

}  // namespace arp
