#pragma once

#include "arp/driver.hpp"

namespace arp {

struct NewtonConfig {
  int max_iterations = 1000;
  StopRule stop;
};

/// Pure Newton iteration x <- x - f'(x) / f''(x) without globalization. Records use the
/// driver's format with sigma = 0, status 'S', and rho measured against the quadratic model.
/// NumericContractError on a zero second derivative.
[[nodiscard]] Trace newton_run(const ObjectiveSpec& f, const Real& x0, const NewtonConfig& cfg);

}  // namespace arp
