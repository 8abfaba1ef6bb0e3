#pragma once

// Shared helpers for the unit tests: reference implementations kept
// deliberately independent of the library code paths they check.

#include <cdcomb/engine.hpp>
#include <cdcomb/geometry.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace testsupport {

// Chebyshev U_n by the three-term recurrence; the textbook definition.
inline double chebyshev_u_recurrence(int n, double x) {
    double prev = 1.0;      // U_0
    if (n == 0) return prev;
    double cur = 2.0 * x;   // U_1
    for (int m = 2; m <= n; ++m) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Transmission through two equal deltas a distance r apart, from the
// closed form T = 1 / (1 + [zeta * U_1(Gamma_1)]^2) with
// Gamma_1 = cos(kr) + zeta*sin(kr).
inline double two_delta_transmission(double strength, double r, double k) {
    const double zeta = strength / k;
    const double g1 = std::cos(k * r) + zeta * std::sin(k * r);
    const double x = zeta * 2.0 * g1;
    return 1.0 / (1.0 + x * x);
}

// Bloch-phase recursion evaluated entirely in complex arithmetic:
// gamma_q = acos(Gamma_q) is complex outside [-1,1] and every U factor is
// computed as sin((n+1)gamma)/sin(gamma).  The imaginary parts must cancel.
inline std::vector<std::complex<double>> complex_gamma_sequence(
    const std::vector<int>& counts, const std::vector<double>& dists,
    double strength, double k) {
    using C = std::complex<double>;
    const std::size_t s = counts.size();
    const double zeta = strength / k;
    const double m22 = std::hypot(1.0, zeta);
    const double tau = -std::atan(zeta);

    auto cheb_c = [](int n, C gamma) -> C {
        if (n < 0) return C(0.0);
        const C sg = std::sin(gamma);
        if (std::abs(sg) < 1e-12) {
            // gamma ~ integer multiple of pi: fall back to the limit value.
            const double cg = std::cos(gamma).real();
            const double sign = cg >= 0.0 ? 1.0 : ((n % 2 == 0) ? 1.0 : -1.0);
            return C(sign * (n + 1));
        }
        return std::sin(double(n + 1) * gamma) / sg;
    };

    std::vector<C> gam(s);
    std::vector<C> u(s);       // U_{N_q-1}(Gamma_q)
    std::vector<C> u_lower(s); // U_{N_q-2}(Gamma_q)
    std::vector<double> pn(s + 1, 0.0), pr(s + 1, 0.0);
    for (std::size_t q = 1; q <= s; ++q) {
        pn[q] = pn[q - 1] + counts[q - 1] * dists[q - 1];
        pr[q] = pr[q - 1] + dists[q - 1];
    }
    for (std::size_t q = 1; q <= s; ++q) {
        const double rq = dists[q - 1];
        C g;
        if (q == 1) {
            g = C(std::cos(k * rq) + zeta * std::sin(k * rq));
        } else {
            const double aq = (pn[q - 1] - pr[q - 1]) - rq;
            C lead = C(m22 * std::cos(tau - k * aq));
            for (std::size_t p = 0; p + 1 < q; ++p) lead *= u[p];
            C hist(0.0);
            for (std::size_t h = 1; h < q; ++h) {
                const double bqh = (pn[q - 1] - pn[h - 1]) - (pr[q] - pr[h]);
                C term = C(std::cos(k * bqh)) * u_lower[h - 1];
                for (std::size_t p = h; p + 1 < q; ++p) term *= u[p];
                hist += term;
            }
            g = lead - hist;
        }
        gam[q - 1] = g;
        const C gamma_angle = std::acos(g);
        u[q - 1] = cheb_c(counts[q - 1] - 1, gamma_angle);
        u_lower[q - 1] = cheb_c(counts[q - 1] - 2, gamma_angle);
    }
    return gam;
}

// Expand a super-periodic layout into explicit delta positions: the order-q
// cell is the order-(q-1) cell repeated counts[q] times at spacing dists[q].
inline std::vector<double> expand_layout(const std::vector<int>& counts,
                                         const std::vector<double>& dists) {
    std::vector<double> pos{0.0};
    for (std::size_t q = 0; q < counts.size(); ++q) {
        std::vector<double> next;
        next.reserve(pos.size() * static_cast<std::size_t>(counts[q]));
        for (int c = 0; c < counts[q]; ++c)
            for (double p : pos) next.push_back(p + c * dists[q]);
        pos.swap(next);
    }
    return pos;
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

}  // namespace testsupport
