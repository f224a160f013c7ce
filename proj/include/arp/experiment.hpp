#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "arp/analysis.hpp"
#include "arp/config.hpp"

namespace arp {

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Serialized forms of the analysis results, one `key: value` per line.
[[nodiscard]] std::string format_order_report(const Trace& trace, const ObjectiveSpec& f);
[[nodiscard]] std::string format_cycle_report(const CycleReport& report);
[[nodiscard]] std::string format_audit_report(const AuditReport& report);
/// Columns k,log10_inv_dist, one row per iterate (records then the final point).
[[nodiscard]] std::string format_plotdata(const Trace& trace, const ObjectiveSpec& f);
[[nodiscard]] std::string format_trace(const Trace& trace);

/// Runs the solver described by a parsed config at its precision.
[[nodiscard]] Trace run_experiment(const ExperimentConfig& cfg);

/// Runs a config file and writes the requested outputs into out_dir as <name>.<kind>.
/// Returns 0 on normal termination, 2 for configuration errors, 3 for numerical contract
/// violations; diagnostics go to `err`.
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& err);

/// Reproduces "fig-top", "fig-bottom", "example-2-1" or "sigma-star" into out_dir/<figure>/.
/// Independent runs execute concurrently when `parallel` is set; outputs are identical either way.
int cmd_reproduce(const std::string& figure, const std::filesystem::path& out_dir, std::ostream& err,
                  bool parallel = true);

/// Canned configurations used by cmd_reproduce.
[[nodiscard]] ExperimentConfig canned_config(const std::string& name);

}  // namespace arp
