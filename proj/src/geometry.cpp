#include <cdcomb/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cdcomb {

void CdcSpec::validate() const {
  if (branch_count < 2) throw std::domain_error("CdcSpec: N must be >= 2");
  if (!(rho > branch_count - 1))
    throw std::domain_error("CdcSpec: rho must exceed N-1 (segment lengths must stay positive)");
  if (!(span > 0)) throw std::domain_error("CdcSpec: L must be > 0");
  if (stage < 1) throw std::domain_error("CdcSpec: S must be >= 1");
}

double critical_rho(int branch_count) {
  if (branch_count < 2) throw std::domain_error("critical_rho: N must be >= 2");
  return 2.0 * branch_count - 1.0;
}

double segment_length(const CdcSpec& spec, int stage) {
  spec.validate();
  if (stage < 0) throw std::domain_error("segment_length: stage must be >= 0");
  const double shrink = 1.0 - (spec.branch_count - 1) / spec.rho;
  return spec.span * std::pow(shrink / spec.branch_count, stage);
}

SuperPeriodicLayout layout(const CdcSpec& spec) {
  spec.validate();
  const int n = spec.branch_count;
  const int s = spec.stage;
  const double shrink = 1.0 - (n - 1) / spec.rho;
  const double rho_plus = 1.0 + 1.0 / spec.rho;

  SuperPeriodicLayout out;
  out.counts.assign(static_cast<std::size_t>(s), n);
  out.counts[0] = 2;
  out.distances.resize(static_cast<std::size_t>(s));
  // r_1 is the width of a stage-(S-1) segment; each higher r_q spans one
  // parent segment plus one gap of the corresponding generation.
  out.distances[0] = spec.span * std::pow(shrink / n, s - 1);
  for (int q = 2; q <= s; ++q)
    out.distances[static_cast<std::size_t>(q - 1)] =
        spec.span * rho_plus / std::pow(n, s - q + 1) * std::pow(shrink, s - q);
  return out;
}

std::vector<double> delta_positions(const CdcSpec& spec) {
  spec.validate();
  const int n = spec.branch_count;
  // Stage S marks the boundaries of the stage-(S-1) Cantor segments:
  // S-1 subdivision rounds, then two deltas per surviving segment.
  std::vector<double> starts{0.0};
  double len = spec.span;
  for (int round = 1; round < spec.stage; ++round) {
    const double child = len * (spec.rho - n + 1) / (n * spec.rho);
    const double step = child + len / spec.rho;  // child width + gap
    std::vector<double> next;
    next.reserve(starts.size() * static_cast<std::size_t>(n));
    for (double a : starts)
      for (int j = 0; j < n; ++j) next.push_back(a + j * step);
    starts.swap(next);
    len = child;
  }
  std::vector<double> out;
  out.reserve(starts.size() * 2);
  for (double a : starts) {
    out.push_back(a);
    out.push_back(a + len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void append_number(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

void append_array(std::string& s, const std::vector<double>& vals) {
  s += '[';
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) s += ',';
    append_number(s, vals[i]);
  }
  s += ']';
}

}  // namespace

std::string geometry_json(const CdcSpec& spec) {
  spec.validate();
  const SuperPeriodicLayout lay = layout(spec);
  const std::vector<double> pos = delta_positions(spec);

  std::string s = "{\n  \"N\": ";
  s += std::to_string(spec.branch_count);
  s += ",\n  \"rho\": ";
  append_number(s, spec.rho);
  s += ",\n  \"L\": ";
  append_number(s, spec.span);
  s += ",\n  \"S\": ";
  s += std::to_string(spec.stage);
  s += ",\n  \"counts\": [";
  for (std::size_t i = 0; i < lay.counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(lay.counts[i]);
  }
  s += "],\n  \"distances\": ";
  append_array(s, lay.distances);
  s += ",\n  \"positions\": ";
  append_array(s, pos);
  s += "\n}\n";
  return s;
}

}  // namespace cdcomb
