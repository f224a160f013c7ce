#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arp/driver.hpp"
#include "arp/newton.hpp"
#include "arp/objective.hpp"

namespace arp {

enum class OutputKind { trace_csv, order_report, cycle_report, audit_report, plotdata };

[[nodiscard]] std::string to_string(OutputKind kind);

/// Flat experiment description. Real-valued fields stay decimal strings until a precision
/// scope is active, so they convert exactly at the configured precision.
struct ExperimentConfig {
  std::string name = "run";
  std::string objective;  // "exampleA", "exampleB" or "poly1d"
  int p = 3;
  std::optional<int> q;
  std::vector<std::string> coeffs;
  std::string solver = "arp";  // "arp" or "newton"
  int precision_bits = 512;
  std::string x0;
  std::string eta1 = "0.5";
  std::string eta2 = "0.5";
  std::string gamma1 = "0.5";
  std::string gamma2 = "2";
  std::string theta = "0";
  std::string sigma0 = "0.5";
  std::optional<std::string> sigma_min;
  std::optional<std::string> grad_tol;
  std::optional<std::string> dist_tol;
  std::string policy = "component";
  int max_iterations = 1000;
  std::vector<OutputKind> outputs;
};

/// Decimal ("-1.25e-3") or integer ratio ("1/3") literal, rounded once at the ambient
/// precision. DomainError otherwise.
[[nodiscard]] Real parse_real_literal(const std::string& text);

/// Parses `key = value` lines; several pairs may share a line separated by commas.
/// Values are quoted strings, bare tokens or [a, b, ...] lists; `#` starts a comment.
/// ConfigError with "source:line: field 'key': ..." diagnostics.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// The builders below convert decimal fields at the ambient precision and report
/// inconsistencies as ConfigError.
[[nodiscard]] ObjectiveSpec build_objective(const ExperimentConfig& cfg);
[[nodiscard]] ArpConfig build_arp_config(const ExperimentConfig& cfg, const ObjectiveSpec& f);
[[nodiscard]] NewtonConfig build_newton_config(const ExperimentConfig& cfg, const ObjectiveSpec& f);
[[nodiscard]] Real build_x0(const ExperimentConfig& cfg);

/// Policy from its config name; nearest_ref uses the objective's minimizer as reference.
[[nodiscard]] SelectionPolicy make_policy(const std::string& name, const ObjectiveSpec& f, int p, std::optional<int> q);

}  // namespace arp
