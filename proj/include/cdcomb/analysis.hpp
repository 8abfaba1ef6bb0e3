#pragma once

// Spectrum analytics over the closed-form engine: resonance location and
// attribution, band-peak counting, allowed/forbidden classification,
// central-resonance shift measurement, and the large-k reflection scaling
// fit.

#include <cdcomb/engine.hpp>
#include <cdcomb/grid.hpp>

#include <utility>
#include <vector>

namespace cdcomb {

struct Resonance {
  double k_star = 0.0;
  // Smallest order s whose partial product prod_{p<=s} U_{N_p-1}(Gamma_p)
  // vanishes at k_star (|.| < 1e-6); ties resolve to the smallest s.
  int order_attribution = 0;
  double refinement_width = 0.0;
  // Grid maxima with T >= 1-1e-8 that bracket no sign change of the
  // resonance function (tangent/double roots) are reported with this flag
  // and carry one grid cell of width.
  bool tangent = false;
};

enum class BandKind { allowed, forbidden };

struct BandRegion {
  double k_lo = 0.0;
  double k_hi = 0.0;
  BandKind kind = BandKind::allowed;  // forbidden <=> |Gamma_S| > 1 throughout
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::pair<double, double> k_range{0.0, 0.0};
  double r_squared = 0.0;
};

// Zeros of D(k) = zeta * prod_q U_{N_q-1}(Gamma_q) by sign-change bisection
// on a grid_n-point scan, refined to bracket width <= tol; every returned
// root has T(k_star) >= 1-1e-8. Sorted ascending.
std::vector<Resonance> find_resonances(const SppSpec& spec, double k_lo, double k_hi, int grid_n,
                                       double tol);

// Nyquist-style default scan density: ~20 samples per oscillation of the
// fastest factor, estimated from the total comb extent sum (N_q-1) r_q.
int default_resonance_grid(const SppSpec& spec, double k_lo, double k_hi);

// Strict local maxima of T with T >= 0.99 on a grid_n-point scan. The window
// must bracket exactly one parent resonance and grid_n must separate
// adjacent peaks by >= 3 samples (caller responsibility).
int count_band_peaks(const SppSpec& spec, double k_lo, double k_hi, int grid_n);

// Partition of [k_lo, k_hi] by the sign of |Gamma_S| - 1, sampled on the
// grid with linear-interpolation boundary refinement.
std::vector<BandRegion> classify_gamma_regions(const SppSpec& spec, double k_lo, double k_hi,
                                               int grid_n);

// k*_b - k*_a for the single resonances of the two specs inside the window
// (negative = redshift). Throws if either spec has zero or multiple
// resonances there.
double resonance_shift(const SppSpec& spec_a, const SppSpec& spec_b,
                       std::pair<double, double> k_window);

// Least-squares slope of log10(R envelope) vs log10(k) over log-spaced
// samples, envelope = per-decade-bin maxima (10 bins per decade). Requires
// the large-k regime k_lo >= max(10|V|, 1/r_1) and samples >= 1000.
ScalingFit scaling_fit(const SppSpec& spec, double k_lo, double k_hi, int samples);

// Row-major T(rho_i, k_j) over the CDC family spanned by `base` with rho
// swept across [rho_lo, rho_hi]. Result is bitwise independent of the
// thread count.
SpectrumGrid density_grid(const CdcSpec& base, double strength, double rho_lo, double rho_hi,
                          int rho_n, double k_lo, double k_hi, int k_n, int threads = 1);

}  // namespace cdcomb
