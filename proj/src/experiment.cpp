#include "arp/experiment.hpp"

#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "arp/errors.hpp"
#include "arp/newton.hpp"
#include "arp/trace_io.hpp"

namespace arp {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::string short_real(const Real& r) { return r.to_string(12); }

void order_section(std::ostringstream& out, const std::string& prefix, const Trace& trace, const ObjectiveSpec& f,
                   OrderMode mode) {
  try {
    const OrderEstimate est = estimate_order(trace_errors(trace, f, ErrorMetric::distance), mode);
    out << prefix << ".samples_used: " << est.samples_used << '\n';
    out << prefix << ".tail_q_order: " << short_real(est.tail_q_order) << '\n';
    out << prefix << ".r_order: " << short_real(est.r_order) << '\n';
    out << prefix << ".q_ratios:";
    for (std::size_t i = 0; i < est.q_ratios.size(); ++i) out << (i ? ", " : " ") << short_real(est.q_ratios[i]);
    out << '\n';
  } catch (const DomainError& e) {
    out << prefix << ".error: " << e.what() << '\n';
  }
}

}  // namespace

std::string format_order_report(const Trace& trace, const ObjectiveSpec& f) {
  std::ostringstream out;
  out << "metric: distance\n";
  if (!f.meta) {
    out << "error: objective has no known minimizer\n";
    return out.str();
  }
  order_section(out, "successful_only", trace, f, OrderMode::successful_only);
  order_section(out, "all_iterations", trace, f, OrderMode::all_iterations);
  return out.str();
}

std::string format_cycle_report(const CycleReport& r) {
  std::ostringstream out;
  out << "detected: " << (r.detected ? "true" : "false") << '\n';
  if (r.alpha) out << "alpha: " << r.alpha->first << "/" << r.alpha->second << '\n';
  if (r.detected) {
    out << "preperiod: " << r.preperiod << '\n';
    out << "period: " << r.period << '\n';
    out << "sigma_cycle:";
    for (std::size_t i = 0; i < r.sigma_cycle.size(); ++i) out << (i ? ", " : " ") << short_real(r.sigma_cycle[i]);
    out << '\n';
    out << "unsuccessful_count: " << r.unsuccessful_count << '\n';
    out << "successful_count: " << r.successful_count << '\n';
    out << "ratio: " << r.unsuccessful_count << ":" << r.successful_count << '\n';
  }
  if (!r.note.empty()) out << "note: " << r.note << '\n';
  return out.str();
}

std::string format_audit_report(const AuditReport& rep) {
  std::ostringstream out;
  out << "passed: " << (rep.passed() ? "true" : "false") << '\n';
  for (const auto& c : rep.checks) {
    out << c.name << ": ";
    if (!c.applicable) {
      out << "n/a";
      if (!c.note.empty()) out << " (" << c.note << ")";
      out << '\n';
      continue;
    }
    out << (c.passed ? "pass" : "FAIL") << " checked=" << c.checked;
    if (c.worst_relative_margin) out << " worst_relative_margin=" << c.worst_relative_margin->to_string(6);
    if (!c.passed) out << " first_violation_k=" << c.first_violation;
    out << '\n';
  }
  return out.str();
}

std::string format_plotdata(const Trace& trace, const ObjectiveSpec& f) {
  std::ostringstream out;
  out << "k,log10_inv_dist\n";
  const Real& xs = f.require_meta().x_star;
  auto row = [&](std::size_t k, const Real& x) {
    const Real e = abs(x - xs);
    out << k << ',' << (e.is_zero() ? std::string("inf") : (-log10_abs(e)).to_string(17)) << '\n';
  };
  for (std::size_t k = 0; k < trace.records.size(); ++k) row(k, trace.records[k].x);
  row(trace.records.size(), trace.final_x);
  return out.str();
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

Trace run_experiment(const ExperimentConfig& cfg) {
  const ObjectiveSpec f = build_objective(cfg);
  const Real x0 = build_x0(cfg);
  if (cfg.solver == "newton") return newton_run(f, x0, build_newton_config(cfg, f));
  const ArpConfig a = build_arp_config(cfg, f);
  try {
    return run(a, f, x0);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

namespace {

using Files = std::vector<std::pair<std::string, std::string>>;

Files outputs_for(const ExperimentConfig& cfg, const std::vector<OutputKind>& kinds) {
  PrecisionScope scope(cfg.precision_bits);
  const Trace trace = run_experiment(cfg);
  const ObjectiveSpec f = build_objective(cfg);
  Files files;
  for (auto k : kinds) {
    switch (k) {
      case OutputKind::trace_csv: files.emplace_back(cfg.name + ".trace.csv", format_trace(trace)); break;
      case OutputKind::order_report: files.emplace_back(cfg.name + ".order.txt", format_order_report(trace, f)); break;
      case OutputKind::cycle_report:
        files.emplace_back(cfg.name + ".cycle.txt", format_cycle_report(detect_cycle(trace)));
        break;
      case OutputKind::audit_report:
        files.emplace_back(cfg.name + ".audit.txt", format_audit_report(audit_trace(trace, f)));
        break;
      case OutputKind::plotdata:
        if (!f.meta) throw ConfigError("field 'outputs': plotdata needs an objective with a known minimizer");
        files.emplace_back(cfg.name + ".plot.csv", format_plotdata(trace, f));
        break;
    }
  }
  return files;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericContractError& e) {
    err << "numerical contract violation: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    for (const auto& [name, content] : outputs_for(cfg, cfg.outputs)) write_file_atomic(out_dir / name, content);
  });
}

ExperimentConfig canned_config(const std::string& name) {
  static const char* common =
      "eta = 1/2, gamma1 = 1/2, gamma2 = 2, theta = 0, sigma0 = 1/2\n"
      "dist_tol = 1e-100, precision_bits = 512, max_iterations = 2000\n";
  std::string text;
  if (name == "fig-top-newton") {
    text = "objective = exampleA, solver = newton, x0 = 1.1\n";
  } else if (name == "fig-top-ar3-component") {
    text = "objective = exampleA, p = 3, solver = arp, policy = component, x0 = 1.1\n";
  } else if (name == "fig-top-ar3-global") {
    text = "objective = exampleA, p = 3, solver = arp, policy = global, x0 = 1.1\n";
  } else if (name == "fig-bottom-newton") {
    text = "objective = exampleB, p = 4, q = 4, solver = newton, x0 = 0.1\n";
  } else if (name == "fig-bottom-ar4") {
    text = "objective = exampleB, p = 4, q = 4, solver = arp, policy = closed_form_b, x0 = 0.1\n";
  } else if (name == "example-2-1") {
    return parse_config(
        "name = example-2-1\n"
        "objective = exampleA, p = 3, solver = arp, policy = global, x0 = 1.05\n"
        "eta = 1/2, gamma1 = 1/3, gamma2 = 3, theta = 0, sigma0 = 6\n"
        "dist_tol = 1e-100, precision_bits = 512, max_iterations = 200\n",
        name);
  } else {
    throw ConfigError("unknown canned configuration '" + name + "'");
  }
  ExperimentConfig cfg = parse_config("name = " + name + "\n" + text + common, name);
  if (name == "fig-bottom-ar4") {
    cfg.theta = "3";
    cfg.sigma0 = "1/10";
  }
  return cfg;
}

int cmd_reproduce(const std::string& figure, const std::filesystem::path& out_dir, std::ostream& err, bool parallel) {
  return guarded(err, [&] {
    const std::filesystem::path dir = out_dir / figure;
    std::vector<std::string> runs;
    if (figure == "fig-top") {
      runs = {"fig-top-newton", "fig-top-ar3-component", "fig-top-ar3-global"};
    } else if (figure == "fig-bottom") {
      runs = {"fig-bottom-newton", "fig-bottom-ar4"};
    } else if (figure == "example-2-1") {
      runs = {"example-2-1"};
    } else if (figure == "sigma-star") {
      runs = {};
    } else {
      throw ConfigError("unknown figure '" + figure + "' (expected fig-top, fig-bottom, example-2-1, sigma-star)");
    }

    // Each job returns its files plus summary lines; nothing is shared between jobs.
    using Result = std::pair<Files, std::string>;
    std::vector<std::function<Result()>> jobs;
    for (const auto& name : runs) {
      jobs.emplace_back([name] {
        const ExperimentConfig cfg = canned_config(name);
        PrecisionScope scope(cfg.precision_bits);
        const Trace trace = run_experiment(cfg);
        const ObjectiveSpec f = build_objective(cfg);
        Files files{{name + ".trace.csv", format_trace(trace)},
                    {name + ".plot.csv", format_plotdata(trace, f)},
                    {name + ".order.txt", format_order_report(trace, f)},
                    {name + ".audit.txt", format_audit_report(audit_trace(trace, f))}};
        std::ostringstream sum;
        sum << name << ".iterations: " << trace.records.size() << '\n';
        sum << name << ".termination: " << to_string(trace.termination) << '\n';
        const OrderMode mode = cfg.solver == "newton" ? OrderMode::all_iterations : OrderMode::successful_only;
        try {
          const auto est = estimate_order(trace_errors(trace, f, ErrorMetric::distance), mode);
          sum << name << ".tail_q_order: " << short_real(est.tail_q_order) << '\n';
        } catch (const DomainError& e) {
          sum << name << ".tail_q_order: error (" << e.what() << ")\n";
        }
        try {
          const auto est = estimate_order(trace_errors(trace, f, ErrorMetric::distance),
                                          OrderMode::all_iterations);
          sum << name << ".r_order: " << short_real(est.r_order) << '\n';
        } catch (const DomainError& e) {
          sum << name << ".r_order: error (" << e.what() << ")\n";
        }
        if (cfg.solver == "newton" && trace.records.size() >= 2) {
          const auto& r = trace.records;
          const Real& xs = f.require_meta().x_star;
          const Real ratio = abs(trace.final_x - xs) / abs(r.back().x - xs);
          sum << name << ".final_step_ratio: " << short_real(ratio) << '\n';
        }
        if (cfg.solver == "arp") {
          const CycleReport cyc = detect_cycle(trace);
          files.emplace_back(name + ".cycle.txt", format_cycle_report(cyc));
          if (cyc.detected) {
            sum << name << ".cycle_period: " << cyc.period << '\n';
            sum << name << ".cycle_ratio: " << cyc.unsuccessful_count << ":" << cyc.successful_count << '\n';
          }
          sum << name << ".audit_passed: " << (audit_trace(trace, f).passed() ? "true" : "false") << '\n';
        }
        return Result{std::move(files), sum.str()};
      });
    }
    if (figure == "sigma-star") {
      jobs.emplace_back([] {
        PrecisionScope scope(512);
        const ObjectiveSpec f = builtin_example_A();
        const Real s = estimate_sigma_star(f, 3, Real(2), Real(6), Real::from_string("1e-8"));
        std::ostringstream sum;
        sum << "sigma_star: " << s.to_string(20) << '\n';
        sum << "bracket: 2, 6\n";
        sum << "tol: 1e-8\n";
        return Result{{}, sum.str()};
      });
    }

    std::vector<Result> results;
    if (parallel) {
      std::vector<std::future<Result>> futures;
      for (auto& job : jobs) futures.push_back(std::async(std::launch::async, job));
      for (auto& fut : futures) results.push_back(fut.get());
    } else {
      for (auto& job : jobs) results.push_back(job());
    }

    std::string summary = "figure: " + figure + "\n";
    for (const auto& [files, sum] : results) {
      for (const auto& [name, content] : files) write_file_atomic(dir / name, content);
      summary += sum;
    }
    write_file_atomic(dir / "summary.txt", summary);
  });
}

}  // namespace arp
