#pragma once

// Plane-wave scattering context and single-delta transfer matrices.
// Conventions (m = hbar = 1): a delta of strength V probed at wavenumber
// k > 0 has the dimensionless coupling zeta = V/k; its transfer matrix is
//   [ 1 + i*zeta      i*zeta    ]
//   [  -i*zeta      1 - i*zeta  ]
// with |m22| = sqrt(1 + zeta^2), arg(m22) = tau = -atan(zeta), det = 1.
// Transmission through any chain is T = 1/|m22_total|^2.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cdcomb {

template <class Scalar>
using TransferMatrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

using TransferMatrix2d = TransferMatrix2<double>;

template <class Scalar>
class WaveContext {
 public:
  WaveContext(Scalar k, Scalar strength) : k_(k), strength_(strength) {
    if (!(k > Scalar(0)))
      throw std::domain_error("WaveContext: k must be > 0 (zeta singular at k = 0)");
  }

  Scalar k() const { return k_; }
  Scalar strength() const { return strength_; }
  Scalar zeta() const { return strength_ / k_; }
  Scalar m22_magnitude() const { return std::hypot(Scalar(1), zeta()); }
  Scalar tau() const { return -std::atan(zeta()); }

 private:
  Scalar k_;
  Scalar strength_;
};

using WaveContextd = WaveContext<double>;

template <class Scalar>
TransferMatrix2<Scalar> delta_transfer_matrix(const WaveContext<Scalar>& ctx) {
  const std::complex<Scalar> iz(Scalar(0), ctx.zeta());
  TransferMatrix2<Scalar> m;
  m << Scalar(1) + iz, iz, -iz, Scalar(1) - iz;
  return m;
}

// Similarity transform placing a scatterer at x0: off-diagonals pick up
// e^{-2ikx0} (upper) and e^{+2ikx0} (lower); diagonals and |m22| unchanged.
// The sign convention is pinned by the two-delta comb reproducing the
// closed-form T = 1/(1 + [zeta*U_1(Gamma_1)]^2), checked in the oracle tests.
template <class Scalar>
TransferMatrix2<Scalar> propagation_phase_shift(const TransferMatrix2<Scalar>& mat, Scalar x0,
                                                Scalar k) {
  const Scalar th = Scalar(-2) * k * x0;
  const std::complex<Scalar> ph(std::cos(th), std::sin(th));
  TransferMatrix2<Scalar> out = mat;
  out(0, 1) *= ph;
  out(1, 0) *= std::conj(ph);
  return out;
}

}  // namespace cdcomb
