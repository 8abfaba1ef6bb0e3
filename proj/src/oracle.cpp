#include <cdcomb/oracle.hpp>

#include <cdcomb/wave.hpp>

#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cdcomb {

void CombRealization::validate() const {
  if (positions.empty()) throw std::domain_error("CombRealization: no positions");
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (!(positions[i] > positions[i - 1]))
      throw std::domain_error(
          "CombRealization: positions must be strictly increasing (coincident deltas are a "
          "different physical object)");
}

namespace {

using Mat = TransferMatrix2<long double>;

struct ScaledProduct {
  Mat m = Mat::Identity();
  long double log_scale = 0.0L;  // true matrix = m * exp(log_scale)

  void absorb(const Mat& factor) {
    m = (m * factor).eval();
    const long double mag = m.cwiseAbs().maxCoeff();
    if (mag > 1e100L) {
      m /= mag;
      log_scale += std::log(mag);
    }
  }
};

ScaledProduct comb_product(const CombRealization& comb, long double k) {
  comb.validate();
  if (!(k > 0.0L)) throw std::domain_error("oracle: k must be > 0");
  const WaveContext<long double> ctx(k, static_cast<long double>(comb.strength));
  const Mat base = delta_transfer_matrix(ctx);
  ScaledProduct prod;
  for (double x : comb.positions)
    prod.absorb(propagation_phase_shift(base, static_cast<long double>(x), k));
  return prod;
}

}  // namespace

double oracle_transmission(const CombRealization& comb, double k) {
  const ScaledProduct prod = comb_product(comb, k);
  const long double m22 = std::abs(prod.m(1, 1));
  // T = 1/|m22 e^{sigma}|^2 = e^{-2(log|m22| + sigma)}; underflow -> 0.
  return static_cast<double>(std::exp(-2.0L * (std::log(m22) + prod.log_scale)));
}

double oracle_sub_trace(const CombRealization& comb, double period, double k) {
  if (!(period > 0)) throw std::domain_error("oracle_sub_trace: period must be > 0");
  const ScaledProduct prod = comb_product(comb, k);
  const long double kl = k;
  const std::complex<long double> ph(std::cos(kl * period), std::sin(kl * period));
  const std::complex<long double> half =
      (prod.m(0, 0) * std::conj(ph) + prod.m(1, 1) * ph) * 0.5L;
  return static_cast<double>(half.real() * std::exp(prod.log_scale));
}

double oracle_unimodularity_defect(const CombRealization& comb, double k) {
  const ScaledProduct prod = comb_product(comb, k);
  // det(true) = det(scaled) * e^{2 sigma}; near-cancellation keeps both
  // factors representable even when individual entries overflowed 1e100.
  const std::complex<long double> det =
      prod.m.determinant() * std::exp(2.0L * prod.log_scale);
  return static_cast<double>(std::abs(det - std::complex<long double>(1.0L)));
}

}  // namespace cdcomb
