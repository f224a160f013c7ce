#pragma once

#include <iosfwd>

#include "arp/driver.hpp"

namespace arp {

/// CSV with `# key: value` metadata lines (solver, objective, precision, configuration,
/// termination, final iterate) followed by the columns
/// k,status,sigma,x,f_gap,grad_norm,step_norm,rho. Reals use full serialization digits;
/// a missing f_gap is written as "nan".
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Inverse of write_trace_csv. Must run at the precision recorded in the file.
/// f_value, y and taylor_decrease are not serialized: y is the next iterate for accepted
/// records and x itself otherwise, f_value and taylor_decrease are zero.
/// ConfigError on malformed input.
[[nodiscard]] Trace read_trace_csv(std::istream& in);

}  // namespace arp
