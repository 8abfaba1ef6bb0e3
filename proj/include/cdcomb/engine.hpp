#pragma once

// Closed-form spectrum of a super-periodic delta comb of any order S.
//
// A hierarchy (counts N_1..N_S, distances r_1..r_S) built on a single delta
// has transmission
//   T = 1 / (1 + [ |zeta| * prod_q U_{N_q - 1}(Gamma_q) ]^2)
// where Gamma_q is the Bloch phase of the order-q composite unit cell. The
// Gamma_q recursion (general path below) costs O(S^2) per wavenumber; no
// positions are ever materialized, which is what makes stage ~50 combs
// (2^50 deltas) evaluable.
//
// Recursion, with empty sums = 0, empty products = 1:
//   Gamma_1 = cos(k r_1) + zeta sin(k r_1)
//   Gamma_q = |M22| cos(tau - k A_q) prod_{p<q} U_{N_p-1}(Gamma_p)
//           - sum_{h<q} cos(k B_qh) U_{N_h-2}(Gamma_h) prod_{p=h+1}^{q-1} U_{N_p-1}(Gamma_p)
//   A_q  = sum_{p<q} (N_p - 1) r_p - r_q
//   B_qh = sum_{p=h}^{q-1} N_p r_p - sum_{p=h+1}^{q} r_p
// The minus sign on the history sum is the convention that reproduces the
// brute-force transfer-matrix product (see the oracle tests).

#include <cdcomb/chebyshev.hpp>
#include <cdcomb/geometry.hpp>
#include <cdcomb/wave.hpp>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace cdcomb {

// Super-periodic potential spec: delta strength plus the repetition
// hierarchy. The per-cell matrix summary (|M12|, |M22|, tau) depends on k
// through zeta = V/k, so it lives in UnitCellSummary, not here.
struct SppSpec {
  double strength = 1.0;  // V (negative = attractive comb)
  SuperPeriodicLayout layout;

  void validate() const {
    if (layout.counts.empty() || layout.counts.size() != layout.distances.size())
      throw std::domain_error("SppSpec: counts and distances must be non-empty and same length");
    for (int c : layout.counts)
      if (c < 1) throw std::domain_error("SppSpec: counts must be >= 1");
    for (double r : layout.distances)
      if (!(r > 0)) throw std::domain_error("SppSpec: distances must be > 0");
  }
};

struct UnitCellSummary {
  double m12_mag;  // |zeta|
  double m22_mag;  // sqrt(1 + zeta^2)
  double tau;      // -atan(zeta)
};

inline UnitCellSummary unit_cell_summary(double strength, double k) {
  const WaveContextd w(k, strength);
  return {std::abs(w.zeta()), w.m22_magnitude(), w.tau()};
}

inline SppSpec spp_from_cdc(const CdcSpec& spec, double strength) {
  spec.validate();
  return {strength, layout(spec)};
}

using GammaSequence = std::vector<double>;

namespace detail {

// U_{n}(x) extended by U_{-1} = 0, as needed for count-1 levels.
template <class Scalar>
Scalar chebyshev_u_ext(int n, Scalar x) {
  return n < 0 ? Scalar(0) : chebyshev_u(n, x);
}

}  // namespace detail

// General recursion over an arbitrary hierarchy. Scalar is double in
// production; tests also instantiate long double.
template <class Scalar>
std::vector<Scalar> gamma_sequence(std::span<const int> counts, std::span<const Scalar> distances,
                                   Scalar strength, Scalar k) {
  if (!(k > Scalar(0))) throw std::domain_error("gamma_sequence: k must be > 0");
  const std::size_t s = counts.size();
  const Scalar zeta = strength / k;
  const Scalar m22 = std::hypot(Scalar(1), zeta);
  const Scalar tau = -std::atan(zeta);

  // Prefix sums: pn[i] = sum_{p<=i} N_p r_p, pr[i] = sum_{p<=i} r_p (1-based).
  std::vector<Scalar> pn(s + 1, Scalar(0)), pr(s + 1, Scalar(0));
  for (std::size_t i = 1; i <= s; ++i) {
    pn[i] = pn[i - 1] + Scalar(counts[i - 1]) * distances[i - 1];
    pr[i] = pr[i - 1] + distances[i - 1];
  }

  std::vector<Scalar> g(s), u(s), u2(s);
  Scalar u_prefix = Scalar(1);  // prod_{p<q} U_{N_p-1}(Gamma_p)
  for (std::size_t q = 1; q <= s; ++q) {
    Scalar acc;
    if (q == 1) {
      acc = std::cos(k * distances[0]) + zeta * std::sin(k * distances[0]);
    } else {
      const Scalar a_q = (pn[q - 1] - pr[q - 1]) - distances[q - 1];
      acc = m22 * std::cos(tau - k * a_q) * u_prefix;
      Scalar u_suffix = Scalar(1);  // prod_{p=h+1}^{q-1} U_{N_p-1}(Gamma_p)
      for (std::size_t h = q - 1; h >= 1; --h) {
        const Scalar b_qh = (pn[q - 1] - pn[h - 1]) - (pr[q] - pr[h]);
        acc -= std::cos(k * b_qh) * u2[h - 1] * u_suffix;
        u_suffix *= u[h - 1];
      }
    }
    g[q - 1] = acc;
    u[q - 1] = detail::chebyshev_u_ext(counts[q - 1] - 1, acc);
    u2[q - 1] = detail::chebyshev_u_ext(counts[q - 1] - 2, acc);
    u_prefix *= u[q - 1];
  }
  return g;
}

// Specialized recursion for all-counts-2 hierarchies (U_1(x) = 2x collapses
// the U-products to Gamma-products):
//   Gamma_q = 2^{q-1} sqrt(1+zeta^2) cos(tau - k chi1(q)) prod_{p<q} Gamma_p
//           - sum_{h<q} 2^{q-h-1} cos(k (chi1(q)-chi1(h))) prod_{p=h+1}^{q-1} Gamma_p
//   chi1(q) = sum_{p<q} r_p - r_q
// Must agree with the general path to ~1e-12; kept as an independent route.
template <class Scalar>
std::vector<Scalar> gamma_sequence_dyadic(std::span<const int> counts,
                                          std::span<const Scalar> distances, Scalar strength,
                                          Scalar k) {
  if (!(k > Scalar(0))) throw std::domain_error("gamma_sequence_dyadic: k must be > 0");
  const std::size_t s = counts.size();
  for (std::size_t i = 0; i < s; ++i)
    if (counts[i] != 2)
      throw std::domain_error("gamma_sequence_dyadic: all counts must equal 2");
  const Scalar zeta = strength / k;
  const Scalar m22 = std::hypot(Scalar(1), zeta);
  const Scalar tau = -std::atan(zeta);

  std::vector<Scalar> chi1(s + 1, Scalar(0));
  Scalar rsum = Scalar(0);
  for (std::size_t q = 1; q <= s; ++q) {
    chi1[q] = rsum - distances[q - 1];
    rsum += distances[q - 1];
  }

  std::vector<Scalar> g(s);
  Scalar g_prefix = Scalar(1);
  Scalar pow2 = Scalar(1);  // 2^{q-1}
  for (std::size_t q = 1; q <= s; ++q) {
    Scalar acc;
    if (q == 1) {
      acc = std::cos(k * distances[0]) + zeta * std::sin(k * distances[0]);
    } else {
      acc = pow2 * m22 * std::cos(tau - k * chi1[q]) * g_prefix;
      Scalar g_suffix = Scalar(1);
      Scalar pow2h = Scalar(1);  // 2^{q-h-1}
      for (std::size_t h = q - 1; h >= 1; --h) {
        acc -= pow2h * std::cos(k * (chi1[q] - chi1[h])) * g_suffix;
        g_suffix *= g[h - 1];
        pow2h *= Scalar(2);
      }
    }
    g[q - 1] = acc;
    g_prefix *= acc;
    pow2 *= Scalar(2);
  }
  return g;
}

namespace detail {

// prod_q U_{N_q-1}(Gamma_q). An exact-zero factor wins over any overflow
// elsewhere (the comb is transparent at that k); a non-finite product marks
// a deeply opaque band and is resolved by the caller.
template <class Scalar>
Scalar chebyshev_product(std::span<const int> counts, const std::vector<Scalar>& gammas) {
  Scalar prod = Scalar(1);
  for (std::size_t q = 0; q < gammas.size(); ++q) {
    const Scalar u = chebyshev_u_ext(counts[q] - 1, gammas[q]);
    if (u == Scalar(0)) return Scalar(0);
    prod *= u;
  }
  return prod;
}

}  // namespace detail

template <class Scalar>
Scalar transmission(std::span<const int> counts, std::span<const Scalar> distances,
                    Scalar strength, Scalar k) {
  const auto g = gamma_sequence(counts, distances, strength, k);
  const Scalar x = std::abs(strength / k) * std::abs(detail::chebyshev_product(counts, g));
  if (!std::isfinite(x)) return Scalar(0);
  return Scalar(1) / (Scalar(1) + x * x);
}

// Reflection per the direct closed form X^2/(1+X^2); satisfies R + T = 1.
template <class Scalar>
Scalar reflection(std::span<const int> counts, std::span<const Scalar> distances, Scalar strength,
                  Scalar k) {
  const auto g = gamma_sequence(counts, distances, strength, k);
  const Scalar x = std::abs(strength / k) * std::abs(detail::chebyshev_product(counts, g));
  if (!std::isfinite(x)) return Scalar(1);
  const Scalar x2 = x * x;
  if (!std::isfinite(x2)) return Scalar(1);
  return x2 / (Scalar(1) + x2);
}

// Scaling function W_S = prod_q [U_{N_q-1}(Gamma_q)]^2, the large-k envelope
// factor of R ~ (V/k)^2 W_S.
template <class Scalar>
Scalar scaling_function(std::span<const int> counts, std::span<const Scalar> distances,
                        Scalar strength, Scalar k) {
  const auto g = gamma_sequence(counts, distances, strength, k);
  const Scalar p = detail::chebyshev_product(counts, g);
  return p * p;
}

// SppSpec conveniences (double precision).

inline GammaSequence gamma_sequence(const SppSpec& spec, double k) {
  spec.validate();
  return gamma_sequence<double>(spec.layout.counts, spec.layout.distances, spec.strength, k);
}

inline GammaSequence gamma_sequence_dyadic(const SppSpec& spec, double k) {
  spec.validate();
  return gamma_sequence_dyadic<double>(spec.layout.counts, spec.layout.distances, spec.strength,
                                       k);
}

inline double transmission(const SppSpec& spec, double k) {
  spec.validate();
  return transmission<double>(spec.layout.counts, spec.layout.distances, spec.strength, k);
}

inline double reflection(const SppSpec& spec, double k) {
  spec.validate();
  return reflection<double>(spec.layout.counts, spec.layout.distances, spec.strength, k);
}

inline double scaling_function(const SppSpec& spec, double k) {
  spec.validate();
  return scaling_function<double>(spec.layout.counts, spec.layout.distances, spec.strength, k);
}

// Order-1 comb: N1 equally spaced deltas, T = 1/(1 + [zeta U_{N1-1}(Gamma_1)]^2).
inline double dirac_comb_transmission(int n1, double r1, const WaveContextd& ctx) {
  if (n1 < 1) throw std::domain_error("dirac_comb_transmission: N1 must be >= 1");
  if (!(r1 > 0)) throw std::domain_error("dirac_comb_transmission: r1 must be > 0");
  const double zeta = ctx.zeta();
  const double k = ctx.k();
  const double g1 = std::cos(k * r1) + zeta * std::sin(k * r1);
  const double x = std::abs(zeta) * std::abs(chebyshev_u(n1 - 1, g1));
  if (!std::isfinite(x)) return 0.0;
  return 1.0 / (1.0 + x * x);
}

}  // namespace cdcomb
