#pragma once

// Chebyshev polynomials of the second kind and the Laue intensity function,
// evaluated in closed form. These are the scalar kernels behind the
// band-structure factors of a finite periodic scatterer chain: a chain of N
// identical unimodular cells with Bloch phase Gamma has off-diagonal growth
// factor U_{N-1}(Gamma).

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cdcomb {

namespace detail {

// Width of the crossover band around |x| = 1 where both the trigonometric
// and the hyperbolic closed forms of U_n lose digits to cancellation
// (sin(gamma) -> 0). Inside the band a short Taylor expansion about x = 1 is
// exact to ~1e-15 relative for n <= 64, comfortably inside the 1e-10
// agreement contract with the three-term recurrence.
inline constexpr double chebyshev_edge_band = 1e-8;

}  // namespace detail

// U_n(x) for n >= 0, total on the real line.
//   |x| < 1 : sin((n+1) acos x) / sin(acos x)
//   |x| > 1 : sign(x)^n * sinh((n+1) t) / sinh(t),  t = acosh |x|
//   |x| ~ 1 : Taylor about +1 (reflected via U_n(-x) = (-1)^n U_n(x)),
//             anchored at U_n(1) = n+1.
// Overflow for huge x or n yields +/-inf, which downstream consumers treat
// as a fully opaque (T -> 0) band.
template <class Scalar>
Scalar chebyshev_u(int n, Scalar x) {
  if (n < 0) throw std::domain_error("chebyshev_u: order must be >= 0");
  if (n == 0) return Scalar(1);
  const Scalar ax = std::abs(x);
  const Scalar np1 = Scalar(n + 1);
  const bool flip = (x < Scalar(0)) && (n % 2 == 1);
  const Scalar sgn = flip ? Scalar(-1) : Scalar(1);
  if (std::abs(ax - Scalar(1)) <= Scalar(detail::chebyshev_edge_band)) {
    const Scalar d = ax - Scalar(1);
    const Scalar c1 = Scalar(n) * np1 * Scalar(n + 2) / Scalar(3);
    const Scalar c2 = Scalar(n - 1) * Scalar(n) * np1 * Scalar(n + 2) * Scalar(n + 3) / Scalar(30);
    return sgn * (np1 + d * (c1 + d * c2));
  }
  if (ax < Scalar(1)) {
    const Scalar g = std::acos(x);
    return std::sin(np1 * g) / std::sin(g);
  }
  const Scalar t = std::acosh(ax);
  return sgn * (std::sinh(np1 * t) / std::sinh(t));
}

// Chebyshev argument pair: the Bloch phase Gamma together with its angle
// gamma = acos(Gamma). The angle is real on [-1, 1]; outside, it picks up a
// pure-imaginary offset (gamma = i*acosh(Gamma) for Gamma > 1, and
// pi + i*acosh(-Gamma) for Gamma < -1), which is what turns oscillation into
// exponential growth inside forbidden bands.
template <class Scalar>
struct ChebyshevArg {
  Scalar gamma_cap;                  // Gamma
  std::complex<Scalar> gamma_low;    // gamma = acos(Gamma), complex-permitted
};

template <class Scalar>
ChebyshevArg<Scalar> chebyshev_arg(Scalar gamma_cap) {
  ChebyshevArg<Scalar> out;
  out.gamma_cap = gamma_cap;
  if (gamma_cap >= Scalar(-1) && gamma_cap <= Scalar(1)) {
    out.gamma_low = std::complex<Scalar>(std::acos(gamma_cap), Scalar(0));
  } else if (gamma_cap > Scalar(1)) {
    out.gamma_low = std::complex<Scalar>(Scalar(0), std::acosh(gamma_cap));
  } else {
    const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
    out.gamma_low = std::complex<Scalar>(pi, std::acosh(-gamma_cap));
  }
  return out;
}

// Laue intensity sin^2(N gamma) / sin^2(gamma) for a real angle, with the
// limit N^2 at the zeros of sin(gamma). Deliberately evaluated through the
// sine ratio (not through chebyshev_u) so the two stay independent routes
// for cross-validation.
template <class Scalar>
Scalar laue(int n_cells, Scalar gamma) {
  if (n_cells < 1) throw std::domain_error("laue: cell count must be >= 1");
  const Scalar s = std::sin(gamma);
  // Below this the ratio is N^2 to better than 1e-10 relative already.
  if (std::abs(s) <= Scalar(1e-9)) return Scalar(n_cells) * Scalar(n_cells);
  const Scalar r = std::sin(Scalar(n_cells) * gamma) / s;
  return r * r;
}

}  // namespace cdcomb
