#include "arp/roots.hpp"

#include <algorithm>

#include "arp/errors.hpp"

namespace arp {

namespace {

bool narrow_enough(const Real& lo, const Real& hi, const Real& rel) {
  const Real scale = max(abs(lo), abs(hi));
  return hi - lo <= rel * scale;
}

IsolatedRoot bisect(const Polynomial1D& P, Real lo, Real hi, int sign_lo, int sign_hi, const Real& rel) {
  while (!narrow_enough(lo, hi, rel)) {
    Real mid = (lo + hi) / Real(2);
    if (mid == lo || mid == hi) break;
    const int s = P(mid).sign();
    if (s == 0) return {mid, mid, mid, sign_lo, sign_hi};
    if (s == sign_lo) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  Real root = (lo + hi) / Real(2);
  return {root, lo, hi, sign_lo, sign_hi};
}

}  // namespace

std::vector<IsolatedRoot> isolate_roots(const Polynomial1D& P, const Real& a, const Real& b) {
  if (b < a) throw DomainError("isolate_roots needs a <= b");
  std::vector<IsolatedRoot> out;
  if (P.degree() <= 0) return out;
  if (a == b) {
    if (P(a).is_zero()) out.push_back({a, a, a, 0, 0});
    return out;
  }
  const Real rel = Real::pow2(-(a.precision() - 8));

  std::vector<Real> cuts{a};
  if (P.degree() >= 2) {
    for (auto& r : isolate_roots(P.derivative(), a, b)) {
      if (a < r.root && r.root < b && !(r.root == cuts.back())) cuts.push_back(r.root);
    }
  }
  cuts.push_back(b);

  std::vector<int> signs;
  signs.reserve(cuts.size());
  for (const auto& c : cuts) signs.push_back(P(c).sign());

  auto side_sign = [&](std::size_t seg) {
    // Sign of P inside segment seg, which is monotone and has no interior zero adjacent to its ends.
    const int left = signs[seg];
    const int right = signs[seg + 1];
    if (left != 0 && right != 0 && left == right) return left;
    Real mid = (cuts[seg] + cuts[seg + 1]) / Real(2);
    return P(mid).sign();
  };

  const std::size_t segments = cuts.size() - 1;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (signs[i] == 0) {
      const int before = i > 0 ? side_sign(i - 1) : 0;
      const int after = i < segments ? side_sign(i) : 0;
      out.push_back({cuts[i], cuts[i], cuts[i], before, after});
    }
    if (i < segments && signs[i] * signs[i + 1] < 0) {
      out.push_back(bisect(P, cuts[i], cuts[i + 1], signs[i], signs[i + 1], rel));
    }
  }
  return out;
}

}  // namespace arp
