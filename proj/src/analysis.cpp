#include <cdcomb/analysis.hpp>

#include <cdcomb/version.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cdcomb {

namespace {

constexpr double resonance_t_floor = 1.0 - 1e-8;
constexpr double attribution_threshold = 1e-6;

// Resonance function D(k) = zeta * prod_q U_{N_q-1}(Gamma_q): continuous,
// simple zeros at unit-transmission points (U roots all lie in |Gamma| < 1).
double resonance_function(const SppSpec& spec, double k) {
  const auto g =
      gamma_sequence<double>(spec.layout.counts, spec.layout.distances, spec.strength, k);
  double d = spec.strength / k;
  for (std::size_t q = 0; q < g.size(); ++q)
    d *= detail::chebyshev_u_ext(spec.layout.counts[q] - 1, g[q]);
  return d;
}

int attribute_order(const SppSpec& spec, double k) {
  const auto g =
      gamma_sequence<double>(spec.layout.counts, spec.layout.distances, spec.strength, k);
  double partial = 1.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    partial *= detail::chebyshev_u_ext(spec.layout.counts[q] - 1, g[q]);
    if (std::abs(partial) < attribution_threshold) return static_cast<int>(q) + 1;
  }
  return static_cast<int>(g.size());
}

double grid_point(double lo, double hi, int i, int n) { return lo + (hi - lo) * i / (n - 1); }

}  // namespace

int default_resonance_grid(const SppSpec& spec, double k_lo, double k_hi) {
  spec.validate();
  double extent = 0.0;
  for (std::size_t q = 0; q < spec.layout.counts.size(); ++q)
    extent += (spec.layout.counts[q] - 1) * spec.layout.distances[q];
  const double oscillations = (k_hi - k_lo) * extent / 3.141592653589793;
  const double n = 20.0 * std::max(oscillations, 1.0);
  return static_cast<int>(std::min(n, 2e7)) + 2;
}

std::vector<Resonance> find_resonances(const SppSpec& spec, double k_lo, double k_hi, int grid_n,
                                       double tol) {
  spec.validate();
  if (!(k_lo > 0) || !(k_hi > k_lo)) throw std::domain_error("find_resonances: bad k range");
  if (grid_n < 2) throw std::domain_error("find_resonances: grid_n must be >= 2");
  if (!(tol > 0)) throw std::domain_error("find_resonances: tol must be > 0");

  std::vector<double> dval(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i)
    dval[static_cast<std::size_t>(i)] = resonance_function(spec, grid_point(k_lo, k_hi, i, grid_n));

  std::vector<Resonance> out;
  std::vector<char> cell_has_root(static_cast<std::size_t>(grid_n), 0);
  for (int i = 0; i + 1 < grid_n; ++i) {
    double a = grid_point(k_lo, k_hi, i, grid_n);
    double b = grid_point(k_lo, k_hi, i + 1, grid_n);
    double fa = dval[static_cast<std::size_t>(i)];
    double fb = dval[static_cast<std::size_t>(i + 1)];
    if (fa == 0.0) {  // grid sample happens to sit on the root
      out.push_back({a, attribute_order(spec, a), 0.0, false});
      cell_has_root[static_cast<std::size_t>(i)] = 1;
      continue;
    }
    if (!(std::signbit(fa) != std::signbit(fb)) || fb == 0.0) continue;
    // Bisect to machine width; tol is the reporting requirement, and extra
    // refinement is nearly free.
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double fm = resonance_function(spec, mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if (std::signbit(fm) == std::signbit(fa)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
      if (b - a <= std::min(tol, 8 * std::numeric_limits<double>::epsilon() * b)) break;
    }
    const double mid = 0.5 * (a + b);
    const double t = transmission(spec, mid);
    if (t < resonance_t_floor) continue;  // cannot certify unit transmission
    out.push_back({mid, attribute_order(spec, mid), b - a, false});
    cell_has_root[static_cast<std::size_t>(i)] = 1;
  }

  // Safety net for tangent (double) roots: T maxima that reach unit
  // transmission without a sign change of D.
  const double cell = (k_hi - k_lo) / (grid_n - 1);
  std::vector<double> tval(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i)
    tval[static_cast<std::size_t>(i)] = transmission(spec, grid_point(k_lo, k_hi, i, grid_n));
  for (int i = 1; i + 1 < grid_n; ++i) {
    if (tval[i] < resonance_t_floor) continue;
    if (!(tval[i] > tval[i - 1] && tval[i] >= tval[i + 1])) continue;
    if (cell_has_root[static_cast<std::size_t>(i - 1)] || cell_has_root[static_cast<std::size_t>(i)] ||
        cell_has_root[static_cast<std::size_t>(i + 1)])
      continue;
    const double k = grid_point(k_lo, k_hi, i, grid_n);
    out.push_back({k, attribute_order(spec, k), cell, true});
  }

  std::sort(out.begin(), out.end(),
            [](const Resonance& x, const Resonance& y) { return x.k_star < y.k_star; });
  return out;
}

int count_band_peaks(const SppSpec& spec, double k_lo, double k_hi, int grid_n) {
  spec.validate();
  if (!(k_lo > 0) || !(k_hi > k_lo) || grid_n < 3)
    throw std::domain_error("count_band_peaks: degenerate window");
  std::vector<double> t(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i)
    t[static_cast<std::size_t>(i)] = transmission(spec, grid_point(k_lo, k_hi, i, grid_n));
  int peaks = 0;
  for (int i = 1; i + 1 < grid_n; ++i)
    if (t[i] >= 0.99 && t[i] > t[i - 1] && t[i] >= t[i + 1]) ++peaks;
  return peaks;
}

std::vector<BandRegion> classify_gamma_regions(const SppSpec& spec, double k_lo, double k_hi,
                                               int grid_n) {
  spec.validate();
  if (!(k_lo > 0) || !(k_hi > k_lo) || grid_n < 2)
    throw std::domain_error("classify_gamma_regions: bad range");
  // f = |Gamma_S| - 1; forbidden where f > 0.
  auto f = [&spec](double k) {
    const auto g =
        gamma_sequence<double>(spec.layout.counts, spec.layout.distances, spec.strength, k);
    return std::abs(g.back()) - 1.0;
  };
  std::vector<BandRegion> out;
  double prev_k = k_lo;
  double prev_f = f(k_lo);
  double start = k_lo;
  BandKind kind = prev_f > 0 ? BandKind::forbidden : BandKind::allowed;
  for (int i = 1; i < grid_n; ++i) {
    const double k = grid_point(k_lo, k_hi, i, grid_n);
    const double fv = f(k);
    const BandKind here = fv > 0 ? BandKind::forbidden : BandKind::allowed;
    if (here != kind) {
      // Linear-interpolation boundary between the two samples.
      const double kb = prev_k + (k - prev_k) * (prev_f / (prev_f - fv));
      if (kb > start) out.push_back({start, kb, kind});
      start = kb;
      kind = here;
    }
    prev_k = k;
    prev_f = fv;
  }
  if (k_hi > start) out.push_back({start, k_hi, kind});
  return out;
}

double resonance_shift(const SppSpec& spec_a, const SppSpec& spec_b,
                       std::pair<double, double> k_window) {
  auto single = [&k_window](const SppSpec& spec, const char* which) {
    const int grid_n = default_resonance_grid(spec, k_window.first, k_window.second);
    const auto res = find_resonances(spec, k_window.first, k_window.second, grid_n, 1e-12);
    if (res.size() != 1)
      throw std::runtime_error(std::string("resonance_shift: window holds ") +
                               std::to_string(res.size()) + " resonances for spec " + which +
                               " (need exactly 1)");
    return res.front().k_star;
  };
  return single(spec_b, "b") - single(spec_a, "a");
}

ScalingFit scaling_fit(const SppSpec& spec, double k_lo, double k_hi, int samples) {
  spec.validate();
  if (!(k_lo > 0) || !(k_hi > k_lo)) throw std::domain_error("scaling_fit: bad k range");
  if (samples < 1000) throw std::domain_error("scaling_fit: samples must be >= 1000");
  // Quadratic-envelope regime: zeta = V/k must be small (k >= 10|V|) and the
  // slowest envelope oscillation must have turned on (k >= 1/r1).
  const double regime = std::max(10.0 * std::abs(spec.strength), 1.0 / spec.layout.distances[0]);
  if (k_lo < regime)
    throw std::domain_error("scaling_fit: k_lo below the large-k regime max(10|V|, 1/r1)");

  // Eight bins per decade: wide enough that low-k bins span the slowest
  // envelope oscillation (period pi/r1) for S <= 4 combs, narrow enough that
  // the k^-2 trend dominates the in-bin variation.
  const double lga = std::log10(k_lo), lgb = std::log10(k_hi);
  const int bins = std::max(3, static_cast<int>(std::ceil((lgb - lga) * 8.0)));
  std::vector<double> best_r(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> best_k(static_cast<std::size_t>(bins), 0.0);
  for (int i = 0; i < samples; ++i) {
    const double lg = lga + (lgb - lga) * i / (samples - 1);
    const double k = std::pow(10.0, lg);
    const double r = reflection(spec, k);
    int b = static_cast<int>((lg - lga) / (lgb - lga) * bins);
    b = std::clamp(b, 0, bins - 1);
    if (r > best_r[static_cast<std::size_t>(b)]) {
      best_r[static_cast<std::size_t>(b)] = r;
      best_k[static_cast<std::size_t>(b)] = k;
    }
  }

  // Least squares on the envelope points (log10 k, log10 R_max).
  std::vector<std::pair<double, double>> pts;
  for (int b = 0; b < bins; ++b)
    if (best_r[static_cast<std::size_t>(b)] > 0 && std::isfinite(best_r[static_cast<std::size_t>(b)]))
      pts.emplace_back(std::log10(best_k[static_cast<std::size_t>(b)]),
                       std::log10(best_r[static_cast<std::size_t>(b)]));
  if (pts.size() < 3)
    throw std::domain_error("scaling_fit: fewer than 3 non-empty envelope bins (R degenerate)");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (auto [x, y] : pts) {
    const double e = y - (slope * x + intercept);
    ss_res += e * e;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  ScalingFit fit;
  fit.slope = slope;
  fit.intercept = intercept;
  fit.k_range = {k_lo, k_hi};
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

SpectrumGrid density_grid(const CdcSpec& base, double strength, double rho_lo, double rho_hi,
                          int rho_n, double k_lo, double k_hi, int k_n, int threads) {
  base.validate();
  if (!(rho_lo > base.branch_count - 1))
    throw std::domain_error("density_grid: rho_lo must exceed N-1");
  if (!(rho_hi >= rho_lo) || rho_n < 1 || k_n < 1 || !(k_lo > 0) || !(k_hi >= k_lo))
    throw std::domain_error("density_grid: bad ranges");

  SpectrumGrid grid;
  grid.rows = {"rho", rho_lo, rho_hi, rho_n, false};
  grid.cols = {"k", k_lo, k_hi, k_n, false};
  grid.values.assign(static_cast<std::size_t>(rho_n) * static_cast<std::size_t>(k_n), 0.0);
  const std::vector<double> rows = axis_values(grid.rows);
  const std::vector<double> cols = axis_values(grid.cols);

  {
    char meta[256];
    std::snprintf(meta, sizeof meta,
                  "{\"N\":%d,\"S\":%d,\"L\":%.17g,\"V\":%.17g,\"version\":\"%s\"}",
                  base.branch_count, base.stage, base.span, strength, version_string);
    grid.metadata_json = meta;
  }

  // Rows are independent; any partition of the row index set gives bitwise
  // identical results.
  auto compute_row = [&](int i) {
    CdcSpec spec = base;
    spec.rho = rows[static_cast<std::size_t>(i)];
    const SuperPeriodicLayout lay = layout(spec);
    double* row = grid.values.data() + static_cast<std::size_t>(i) * cols.size();
    for (std::size_t j = 0; j < cols.size(); ++j)
      row[j] = transmission<double>(lay.counts, lay.distances, strength, cols[j]);
  };

  const int workers = std::max(1, std::min(threads, rho_n));
  if (workers == 1) {
    for (int i = 0; i < rho_n; ++i) compute_row(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < rho_n; i = next.fetch_add(1)) compute_row(i);
      });
    for (auto& th : pool) th.join();
  }
  return grid;
}

}  // namespace cdcomb
