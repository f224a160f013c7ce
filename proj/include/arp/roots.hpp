#pragma once

#include <vector>

#include "arp/polynomial.hpp"
#include "arp/real.hpp"

namespace arp {

/// A real root of a polynomial on an interval, with the signs of the polynomial just
/// before and just after it and the final bisection bracket.
struct IsolatedRoot {
  Real root;
  Real bracket_lo;
  Real bracket_hi;
  int sign_before = 0;
  int sign_after = 0;
};

/// Every root of P in [a, b] where P changes sign or vanishes exactly, in increasing order.
/// The roots of P' split [a, b] into pieces on which P is monotone; each piece with a sign
/// change is bisected until its bracket has relative width 2^-(bits - 8).
/// The zero polynomial yields no roots.
[[nodiscard]] std::vector<IsolatedRoot> isolate_roots(const Polynomial1D& P, const Real& a, const Real& b);

}  // namespace arp
