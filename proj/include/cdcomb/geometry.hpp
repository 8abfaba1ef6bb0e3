#pragma once

// Cantor Dirac comb geometry. A CDC-rho_N comb at stage S puts a delta at
// every boundary of the stage-(S-1) polyadic Cantor set on [0, L]: each
// subdivision round splits a segment of length l into N children of length
// l*(1 - (N-1)/rho)/N separated by N-1 gaps of length l/rho (minimum-
// lacunarity layout). Stage S therefore carries 2*N^(S-1) deltas.
//
// The same comb, read bottom-up, is a super-periodic hierarchy: a pair at
// spacing r_1, repeated N times at spacing r_2, ... repeated N times at
// spacing r_S, with
//   r_1 = (L / N^(S-1)) * (1 - (N-1)/rho)^(S-1)
//   r_q = (L * (1 + 1/rho) / N^(S-q+1)) * (1 - (N-1)/rho)^(S-q),  q >= 2.

#include <string>
#include <vector>

namespace cdcomb {

struct CdcSpec {
  int branch_count = 2;  // N >= 2; N = 2 is the classic Cantor comb
  double rho = 3.0;      // scaling parameter, > N-1
  double span = 1.0;     // L > 0
  int stage = 1;         // S >= 1

  void validate() const;  // throws std::domain_error on violation
};

struct SuperPeriodicLayout {
  std::vector<int> counts;        // N_1 .. N_S
  std::vector<double> distances;  // r_1 .. r_S

  int order() const { return static_cast<int>(counts.size()); }
};

// Scaling parameter at which the stage-2 comb degenerates to an equally
// spaced (periodic) comb.
double critical_rho(int branch_count);

// Segment length b_stage = (L/N^stage) * (1 - (N-1)/rho)^stage; stage 0 is
// the full span.
double segment_length(const CdcSpec& spec, int stage);

SuperPeriodicLayout layout(const CdcSpec& spec);

// Sorted delta positions in [0, L]; equal to the translation expansion of
// layout(spec) within 1e-12 * L.
std::vector<double> delta_positions(const CdcSpec& spec);

// Flat JSON dump {N, rho, L, S, counts, distances, positions}, numbers at
// 17 significant digits.
std::string geometry_json(const CdcSpec& spec);

}  // namespace cdcomb
