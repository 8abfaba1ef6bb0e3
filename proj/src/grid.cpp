#include <cdcomb/grid.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cdcomb {

std::vector<double> axis_values(const GridAxis& axis) {
  if (axis.n < 1) throw std::domain_error("axis_values: n must be >= 1");
  if (axis.log_spacing && !(axis.lo > 0))
    throw std::domain_error("axis_values: log spacing needs lo > 0");
  std::vector<double> out(static_cast<std::size_t>(axis.n));
  if (axis.n == 1) {
    out[0] = axis.lo;
    return out;
  }
  if (axis.log_spacing) {
    const double la = std::log10(axis.lo), lb = std::log10(axis.hi);
    for (int i = 0; i < axis.n; ++i)
      out[static_cast<std::size_t>(i)] = std::pow(10.0, la + (lb - la) * i / (axis.n - 1));
    out.back() = axis.hi;
  } else {
    for (int i = 0; i < axis.n; ++i)
      out[static_cast<std::size_t>(i)] = axis.lo + (axis.hi - axis.lo) * i / (axis.n - 1);
    out.back() = axis.hi;
  }
  return out;
}

namespace {

void append_g(std::string& s, double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  s += buf;
}

}  // namespace

std::string spectrum_csv(const SpectrumGrid& grid) {
  const std::vector<double> kv = axis_values(grid.cols);
  const std::vector<double> rv = axis_values(grid.rows);
  if (grid.values.size() != kv.size() * rv.size())
    throw std::domain_error("spectrum_csv: values length != rows*cols");
  std::string s;
  s.reserve(grid.values.size() * 14 + kv.size() * 14);
  s += grid.cols.name;
  for (double k : kv) {
    s += ',';
    append_g(s, k, 12);
  }
  s += '\n';
  for (std::size_t i = 0; i < rv.size(); ++i) {
    append_g(s, rv[i], 12);
    for (std::size_t j = 0; j < kv.size(); ++j) {
      s += ',';
      append_g(s, grid.values[i * kv.size() + j], 12);
    }
    s += '\n';
  }
  return s;
}

std::string spectrum_json(const SpectrumGrid& grid) {
  const std::vector<double> kv = axis_values(grid.cols);
  const std::vector<double> rv = axis_values(grid.rows);
  if (grid.values.size() != kv.size() * rv.size())
    throw std::domain_error("spectrum_json: values length != rows*cols");
  auto axis_obj = [](const GridAxis& a) {
    std::string s = "{\"name\":\"" + a.name + "\",\"lo\":";
    append_g(s, a.lo, 17);
    s += ",\"hi\":";
    append_g(s, a.hi, 17);
    s += ",\"n\":" + std::to_string(a.n);
    s += ",\"spacing\":\"";
    s += (a.log_spacing ? "log" : "linear");
    s += "\"}";
    return s;
  };
  std::string s = "{\n\"metadata\":";
  s += grid.metadata_json.empty() ? "{}" : grid.metadata_json;
  s += ",\n\"rows\":" + axis_obj(grid.rows);
  s += ",\n\"cols\":" + axis_obj(grid.cols);
  s += ",\n\"row_values\":[";
  for (std::size_t i = 0; i < rv.size(); ++i) {
    if (i) s += ',';
    append_g(s, rv[i], 17);
  }
  s += "],\n\"col_values\":[";
  for (std::size_t j = 0; j < kv.size(); ++j) {
    if (j) s += ',';
    append_g(s, kv[j], 17);
  }
  s += "],\n\"values\":[";
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (i) s += ',';
    append_g(s, grid.values[i], 17);
  }
  s += "]\n}\n";
  return s;
}

}  // namespace cdcomb
