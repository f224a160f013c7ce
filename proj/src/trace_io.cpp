#include "arp/trace_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "arp/errors.hpp"

namespace arp {

namespace {

std::string encode_policy(const SelectionPolicy& p) {
  if (const auto* r = std::get_if<NearestToRef>(&p)) return "nearest_ref:" + r->ref.to_string();
  if (const auto* c = std::get_if<ClosedFormExampleB>(&p)) {
    return "closed_form_b:" + std::to_string(c->p) + ":" + std::to_string(c->q);
  }
  return policy_name(p);
}

SelectionPolicy decode_policy(const std::string& s) {
  if (s == "global") return GlobalMin{};
  if (s == "component") return LocalComponent{};
  if (s.rfind("nearest_ref:", 0) == 0) return NearestToRef{Real::from_string(s.substr(12))};
  if (s.rfind("closed_form_b:", 0) == 0) {
    const std::string rest = s.substr(14);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ConfigError("trace: malformed policy '" + s + "'");
    return ClosedFormExampleB{std::stoi(rest.substr(0, colon)), std::stoi(rest.substr(colon + 1))};
  }
  throw ConfigError("trace: unknown policy '" + s + "'");
}

std::string opt(const std::optional<Real>& v) { return v ? v->to_string() : "none"; }

std::optional<Real> parse_opt(const std::string& s) {
  if (s == "none" || s == "nan") return std::nullopt;
  return Real::from_string(s);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

constexpr const char* kHeader = "k,status,sigma,x,f_gap,grad_norm,step_norm,rho";

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& t) {
  out << "# solver: " << t.solver << '\n';
  out << "# objective: " << t.objective_id << '\n';
  out << "# precision_bits: " << t.precision_bits << '\n';
  if (t.config) {
    const ArpConfig& c = *t.config;
    out << "# config.p: " << c.p << '\n';
    out << "# config.eta1: " << c.eta1 << '\n';
    out << "# config.eta2: " << c.eta2 << '\n';
    out << "# config.gamma1: " << c.gamma1 << '\n';
    out << "# config.gamma2: " << c.gamma2 << '\n';
    out << "# config.theta: " << c.theta << '\n';
    out << "# config.sigma0: " << c.sigma0 << '\n';
    out << "# config.sigma_min: " << opt(c.sigma_min) << '\n';
    out << "# config.policy: " << encode_policy(c.policy) << '\n';
    out << "# config.max_iterations: " << c.max_iterations << '\n';
    out << "# config.grad_tol: " << opt(c.stop.grad_tol) << '\n';
    out << "# config.dist_tol: " << opt(c.stop.dist_tol) << '\n';
  }
  out << "# termination: " << to_string(t.termination) << '\n';
  out << "# final_x: " << t.final_x << '\n';
  out << "# final_sigma: " << t.final_sigma << '\n';
  out << kHeader << '\n';
  for (const auto& r : t.records) {
    out << r.k << ',' << status_code(r.status) << ',' << r.sigma << ',' << r.x << ','
        << (r.f_gap ? r.f_gap->to_string() : std::string("nan")) << ',' << r.grad_norm << ',' << r.step_norm << ','
        << r.rho << '\n';
  }
}

Trace read_trace_csv(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::string line;
  int lineno = 0;
  bool header = false;
  Trace t;
  auto fail = [&](const std::string& msg) { throw ConfigError("trace:" + std::to_string(lineno) + ": " + msg); };
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        const auto colon = line.find(':');
        if (colon == std::string::npos) fail("metadata line without ':'");
        std::string key = line.substr(1, colon - 1);
        std::string value = line.substr(colon + 1);
        key.erase(0, key.find_first_not_of(' '));
        value.erase(0, value.find_first_not_of(' '));
        meta[key] = value;
        continue;
      }
      if (!header) {
        if (line != kHeader) fail("unexpected header '" + line + "'");
        header = true;
        const int bits = std::stoi(meta.at("precision_bits"));
        if (bits != current_precision().mantissa_bits) {
          fail("trace written at " + std::to_string(bits) + " bits, reader runs at " +
               std::to_string(current_precision().mantissa_bits));
        }
        continue;
      }
      const auto cols = split(line, ',');
      if (cols.size() != 8) fail("expected 8 columns, got " + std::to_string(cols.size()));
      IterationRecord r;
      r.k = std::stoi(cols[0]);
      if (cols[1].size() != 1) fail("malformed status '" + cols[1] + "'");
      r.status = status_from_code(cols[1][0]);
      r.sigma = Real::from_string(cols[2]);
      r.x = Real::from_string(cols[3]);
      r.f_gap = parse_opt(cols[4]);
      r.grad_norm = Real::from_string(cols[5]);
      r.step_norm = Real::from_string(cols[6]);
      r.rho = Real::from_string(cols[7]);
      t.records.push_back(std::move(r));
    }
    if (!header) fail("missing column header");
    t.solver = meta.at("solver");
    t.objective_id = meta.at("objective");
    t.precision_bits = std::stoi(meta.at("precision_bits"));
    t.termination = termination_from_string(meta.at("termination"));
    t.final_x = Real::from_string(meta.at("final_x"));
    t.final_sigma = Real::from_string(meta.at("final_sigma"));
    if (meta.count("config.p")) {
      ArpConfig c;
      c.p = std::stoi(meta.at("config.p"));
      c.eta1 = Real::from_string(meta.at("config.eta1"));
      c.eta2 = Real::from_string(meta.at("config.eta2"));
      c.gamma1 = Real::from_string(meta.at("config.gamma1"));
      c.gamma2 = Real::from_string(meta.at("config.gamma2"));
      c.theta = Real::from_string(meta.at("config.theta"));
      c.sigma0 = Real::from_string(meta.at("config.sigma0"));
      c.sigma_min = parse_opt(meta.at("config.sigma_min"));
      c.policy = decode_policy(meta.at("config.policy"));
      c.max_iterations = std::stoi(meta.at("config.max_iterations"));
      c.stop.grad_tol = parse_opt(meta.at("config.grad_tol"));
      c.stop.dist_tol = parse_opt(meta.at("config.dist_tol"));
      t.config = c;
    }
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("trace: missing metadata field (") + e.what() + ")");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("trace: malformed integer (") + e.what() + ")");
  } catch (const DomainError& e) {
    throw ConfigError("trace:" + std::to_string(lineno) + ": " + e.what());
  }
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    auto& r = t.records[i];
    if (accepted(r.status)) {
      r.y = i + 1 < t.records.size() ? t.records[i + 1].x : t.final_x;
    } else {
      r.y = r.x;
    }
  }
  return t;
}

}  // namespace arp
