#pragma once

// Brute-force ground truth: multiply an explicit per-delta transfer matrix
// for every position and read T = 1/|m22|^2 off the product. Shares no code
// path with the Chebyshev engine beyond the single-delta matrix itself, so
// agreement between the two pins every sign and phase convention.

#include <vector>

namespace cdcomb {

struct CombRealization {
  std::vector<double> positions;  // strictly increasing
  double strength = 1.0;

  void validate() const;  // throws std::domain_error on violation
};

// T of the ordered matrix product. Internally long double with magnitude
// rescaling: deep forbidden bands push |m22| past 1e300 for strong coupling
// (zeta ~ 150, 128 deltas reaches ~1e317), so the product is renormalized by
// its largest element and the log-scale tracked on the side; only the ratio
// 1/|m22|^2 is ever consumed.
double oracle_transmission(const CombRealization& comb, double k);

// Half-trace of the composite matrix of a sub-comb treated as the unit cell
// of a lattice with repetition period `period`: Re[(m11 e^{-ik period} +
// m22 e^{+ik period})/2]. This is the Bloch phase Gamma of that lattice and
// validates the gamma_sequence recursion level by level.
double oracle_sub_trace(const CombRealization& comb, double period, double k);

// |det(product) - 1|: every factor is unimodular, so the defect measures the
// accumulated rounding of the ordered product. Stays below ~1e-10 * count
// for any physically sensible comb.
double oracle_unimodularity_defect(const CombRealization& comb, double k);

}  // namespace cdcomb
