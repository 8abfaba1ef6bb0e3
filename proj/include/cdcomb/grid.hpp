#pragma once

// Rectangular spectrum grids and their serialized forms. CSV is the plotting
// channel (12 significant digits); JSON is the machine-exact channel (17).

#include <string>
#include <vector>

namespace cdcomb {

struct GridAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  bool log_spacing = false;
};

// Axis sample points: linear or base-10 logarithmic, endpoints exact.
std::vector<double> axis_values(const GridAxis& axis);

struct SpectrumGrid {
  GridAxis rows;               // rho axis for density grids
  GridAxis cols;               // k axis
  std::vector<double> values;  // row-major, rows.n * cols.n
  std::string metadata_json;   // config echo + artifact version (JSON object)
};

// "k,<k1>,...\n<rho_1>,<T_11>,...\n..." with 12-significant-digit numbers.
std::string spectrum_csv(const SpectrumGrid& grid);

// Full object: axes, metadata, values at 17 significant digits.
std::string spectrum_json(const SpectrumGrid& grid);

}  // namespace cdcomb
