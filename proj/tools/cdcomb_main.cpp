// cdcomb: command-line surface for Cantor Dirac comb spectra.
// Commands: geometry, sweep, density, resonances, scaling, oracle-check.
// Exit codes: 0 success, 1 check failure (oracle-check mismatch), 2 usage or
// configuration error.

#include <cdcomb/analysis.hpp>
#include <cdcomb/engine.hpp>
#include <cdcomb/geometry.hpp>
#include <cdcomb/grid.hpp>
#include <cdcomb/oracle.hpp>
#include <cdcomb/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

struct RunConfig {
  std::string command;
  cdcomb::CdcSpec cdc;
  double strength = 1.0;
  double k_min = 0.1, k_max = 10.0;
  int k_n = 1000;
  std::string k_scale = "linear";
  double rho_min = 0.0, rho_max = 0.0;
  int rho_n = 100;
  std::string out_path;      // empty = stdout
  std::string format = "csv";
  std::string threads_arg;   // number or "auto"; empty = env or 1
  double tol = 1e-9;         // oracle-check tolerance / resonance bracket width
  std::string geometry_path; // oracle-check: re-ingest a geometry dump
  bool log10_column = false;
  std::string observable = "transmission";
};

int resolve_threads(const std::string& arg) {
  std::string v = arg;
  if (v.empty()) {
    if (const char* env = std::getenv("CDCOMB_THREADS")) v = env;
  }
  if (v.empty()) return 1;
  if (v == "auto") {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }
  try {
    const int n = std::stoi(v);
    if (n < 1) throw std::invalid_argument("nonpositive");
    return n;
  } catch (const std::exception&) {
    throw std::domain_error("threads must be a positive integer or \"auto\"");
  }
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw std::domain_error("cannot open output file: " + cfg.out_path);
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::domain_error("cannot open output file: " + path);
  f << text;
}

std::string fmt_g(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string config_json(const RunConfig& cfg) {
  std::string s = "{\"command\":\"" + cfg.command + "\",\"N\":" +
                  std::to_string(cfg.cdc.branch_count) + ",\"rho\":" + fmt_g(cfg.cdc.rho, 17) +
                  ",\"L\":" + fmt_g(cfg.cdc.span, 17) + ",\"S\":" + std::to_string(cfg.cdc.stage) +
                  ",\"V\":" + fmt_g(cfg.strength, 17) + ",\"k_min\":" + fmt_g(cfg.k_min, 17) +
                  ",\"k_max\":" + fmt_g(cfg.k_max, 17) + ",\"k_n\":" + std::to_string(cfg.k_n) +
                  ",\"k_scale\":\"" + cfg.k_scale + "\",\"version\":\"" +
                  cdcomb::version_string + "\"}";
  return s;
}

void parallel_indices(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::string sweep_plot_script(const std::string& csv_path) {
  return "#!/usr/bin/env python3\n"
         "# Companion plot for " + csv_path + "\n"
         "import csv\n"
         "import math\n"
         "import matplotlib.pyplot as plt\n"
         "ks, ys = [], []\n"
         "with open(\"" + csv_path + "\") as f:\n"
         "    rows = csv.reader(f)\n"
         "    header = next(rows)\n"
         "    for row in rows:\n"
         "        ks.append(float(row[0]))\n"
         "        ys.append(float(row[1]))\n"
         "plt.plot(ks, [math.log10(max(y, 1e-300)) for y in ys])\n"
         "plt.xlabel(header[0])\n"
         "plt.ylabel(\"log10 \" + header[1])\n"
         "plt.tight_layout()\n"
         "plt.show()\n";
}

std::string density_plot_script(const std::string& csv_path) {
  return "#!/usr/bin/env python3\n"
         "# Companion plot for " + csv_path + "\n"
         "import csv\n"
         "import matplotlib.pyplot as plt\n"
         "with open(\"" + csv_path + "\") as f:\n"
         "    rows = list(csv.reader(f))\n"
         "ks = [float(v) for v in rows[0][1:]]\n"
         "rhos = [float(r[0]) for r in rows[1:]]\n"
         "grid = [[float(v) for v in r[1:]] for r in rows[1:]]\n"
         "plt.pcolormesh(ks, rhos, grid, shading=\"nearest\")\n"
         "plt.xlabel(\"k\")\n"
         "plt.ylabel(\"rho\")\n"
         "plt.colorbar(label=\"T\")\n"
         "plt.tight_layout()\n"
         "plt.show()\n";
}

int cmd_geometry(const RunConfig& cfg) {
  write_output(cfg, cdcomb::geometry_json(cfg.cdc));
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  if (cfg.k_n < 1 || !(cfg.k_min > 0) || !(cfg.k_max >= cfg.k_min))
    throw std::domain_error("sweep: bad k range");
  const cdcomb::SppSpec spec = cdcomb::spp_from_cdc(cfg.cdc, cfg.strength);
  cdcomb::GridAxis axis{"k", cfg.k_min, cfg.k_max, cfg.k_n, cfg.k_scale == "log"};
  const std::vector<double> ks = cdcomb::axis_values(axis);
  std::vector<double> ys(ks.size());

  const int threads = resolve_threads(cfg.threads_arg);
  std::function<double(double)> eval;
  std::string column;
  if (cfg.observable == "transmission") {
    eval = [&spec](double k) { return cdcomb::transmission(spec, k); };
    column = "T";
  } else if (cfg.observable == "reflection") {
    eval = [&spec](double k) { return cdcomb::reflection(spec, k); };
    column = "R";
  } else if (cfg.observable == "scaling-function") {
    eval = [&spec](double k) { return cdcomb::scaling_function(spec, k); };
    column = "W";
  } else {
    throw std::domain_error("sweep: unknown observable " + cfg.observable);
  }
  parallel_indices(static_cast<int>(ks.size()), threads,
                   [&](int i) { ys[static_cast<std::size_t>(i)] = eval(ks[static_cast<std::size_t>(i)]); });

  std::string text;
  if (cfg.format == "csv") {
    text = "k," + column;
    if (cfg.log10_column) text += ",log10" + column;
    text += '\n';
    for (std::size_t i = 0; i < ks.size(); ++i) {
      text += fmt_g(ks[i], 12);
      text += ',';
      text += fmt_g(ys[i], 12);
      if (cfg.log10_column) {
        text += ',';
        text += fmt_g(std::log10(std::max(ys[i], 1e-300)), 12);
      }
      text += '\n';
    }
  } else {
    text = "{\n\"metadata\":" + config_json(cfg) + ",\n\"k\":[";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (i) text += ',';
      text += fmt_g(ks[i], 17);
    }
    text += "],\n\"" + column + "\":[";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (i) text += ',';
      text += fmt_g(ys[i], 17);
    }
    text += "]\n}\n";
  }
  write_output(cfg, text);
  if (!cfg.out_path.empty() && cfg.format == "csv")
    write_file(cfg.out_path + ".plot.py", sweep_plot_script(cfg.out_path));
  return 0;
}

int cmd_density(const RunConfig& cfg) {
  if (!(cfg.rho_min > 0) || !(cfg.rho_max >= cfg.rho_min))
    throw std::domain_error("density: set --rho-min/--rho-max (rho_min > N-1)");
  const int threads = resolve_threads(cfg.threads_arg);
  cdcomb::SpectrumGrid grid =
      cdcomb::density_grid(cfg.cdc, cfg.strength, cfg.rho_min, cfg.rho_max, cfg.rho_n, cfg.k_min,
                           cfg.k_max, cfg.k_n, threads);
  grid.metadata_json = config_json(cfg);
  const std::string text =
      cfg.format == "csv" ? cdcomb::spectrum_csv(grid) : cdcomb::spectrum_json(grid);
  write_output(cfg, text);
  if (!cfg.out_path.empty() && cfg.format == "csv")
    write_file(cfg.out_path + ".plot.py", density_plot_script(cfg.out_path));
  return 0;
}

int cmd_resonances(const RunConfig& cfg) {
  const cdcomb::SppSpec spec = cdcomb::spp_from_cdc(cfg.cdc, cfg.strength);
  const int grid_n =
      cfg.k_n > 1 ? cfg.k_n : cdcomb::default_resonance_grid(spec, cfg.k_min, cfg.k_max);
  const auto res = cdcomb::find_resonances(spec, cfg.k_min, cfg.k_max, grid_n,
                                           cfg.tol > 0 ? cfg.tol : 1e-10);
  std::string text = "[";
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (i) text += ',';
    text += "\n  {\"k_star\":" + fmt_g(res[i].k_star, 17) +
            ",\"order\":" + std::to_string(res[i].order_attribution) +
            ",\"width\":" + fmt_g(res[i].refinement_width, 17) +
            ",\"tangent\":" + (res[i].tangent ? "true" : "false") + "}";
  }
  text += "\n]\n";
  write_output(cfg, text);
  return 0;
}

int cmd_scaling(const RunConfig& cfg) {
  const cdcomb::SppSpec spec = cdcomb::spp_from_cdc(cfg.cdc, cfg.strength);
  const cdcomb::ScalingFit fit =
      cdcomb::scaling_fit(spec, cfg.k_min, cfg.k_max, std::max(cfg.k_n, 1000));
  const std::string text = "{\"slope\":" + fmt_g(fit.slope, 17) +
                           ",\"intercept\":" + fmt_g(fit.intercept, 17) +
                           ",\"r_squared\":" + fmt_g(fit.r_squared, 17) +
                           ",\"k_min\":" + fmt_g(fit.k_range.first, 17) +
                           ",\"k_max\":" + fmt_g(fit.k_range.second, 17) + "}\n";
  write_output(cfg, text);
  return 0;
}

// FNV-1a over the 17-digit position strings; stable identity for a comb.
std::string positions_hash(const std::vector<double>& positions) {
  std::uint64_t h = 1469598103934665603ull;
  for (double p : positions) {
    const std::string s = fmt_g(p, 17);
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    h ^= static_cast<unsigned char>(';');
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int cmd_oracle_check(const RunConfig& cfg) {
  if (cfg.k_n < 1 || !(cfg.k_min > 0) || !(cfg.k_max >= cfg.k_min))
    throw std::domain_error("oracle-check: bad k range");

  cdcomb::CombRealization comb;
  comb.strength = cfg.strength;
  cdcomb::CdcSpec cdc = cfg.cdc;
  if (cfg.geometry_path.empty()) {
    comb.positions = cdcomb::delta_positions(cdc);
  } else {
    // The dump is self-describing: the closed-form side is rebuilt from the
    // file's own N/rho/L/S while the brute-force side uses the positions
    // verbatim, so an edited position list fails the check instead of being
    // silently compared against itself.
    std::ifstream f(cfg.geometry_path);
    if (!f) throw std::domain_error("cannot read geometry file: " + cfg.geometry_path);
    nlohmann::json j;
    f >> j;
    cdc.branch_count = j.at("N").get<int>();
    cdc.rho = j.at("rho").get<double>();
    cdc.span = j.at("L").get<double>();
    cdc.stage = j.at("S").get<int>();
    comb.positions = j.at("positions").get<std::vector<double>>();
  }
  comb.validate();

  const cdcomb::SppSpec spec = cdcomb::spp_from_cdc(cdc, cfg.strength);
  cdcomb::GridAxis axis{"k", cfg.k_min, cfg.k_max, cfg.k_n, cfg.k_scale == "log"};
  const std::vector<double> ks = cdcomb::axis_values(axis);

  double max_delta = -1.0;
  double argmax_k = ks.front();
  for (double k : ks) {
    const double d = std::abs(cdcomb::transmission(spec, k) - oracle_transmission(comb, k));
    if (d > max_delta) {
      max_delta = d;
      argmax_k = k;
    }
  }
  const bool pass = max_delta < cfg.tol;
  const std::string text = std::string("{\"pass\":") + (pass ? "true" : "false") +
                           ",\"max_abs_delta\":" + fmt_g(max_delta, 17) +
                           ",\"argmax_k\":" + fmt_g(argmax_k, 17) +
                           ",\"samples\":" + std::to_string(cfg.k_n) +
                           ",\"tolerance\":" + fmt_g(cfg.tol, 17) + ",\"positions_hash\":\"" +
                           positions_hash(comb.positions) + "\"}\n";
  write_output(cfg, text);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Cantor Dirac comb spectrum tool"};
  app.add_option("--command", cfg.command, "geometry|sweep|density|resonances|scaling|oracle-check")
      ->required()
      ->check(CLI::IsMember(
          {"geometry", "sweep", "density", "resonances", "scaling", "oracle-check"}));
  app.add_option("--N", cfg.cdc.branch_count, "branch count N (>= 2)");
  app.add_option("--rho", cfg.cdc.rho, "scaling parameter rho (> N-1)");
  app.add_option("--L", cfg.cdc.span, "total span L (> 0)");
  app.add_option("--S", cfg.cdc.stage, "stage S (>= 1)");
  app.add_option("--V", cfg.strength, "delta strength V");
  app.add_option("--k-min", cfg.k_min, "lower wavenumber");
  app.add_option("--k-max", cfg.k_max, "upper wavenumber");
  app.add_option("--k-n", cfg.k_n, "wavenumber sample count");
  app.add_option("--k-scale", cfg.k_scale, "k spacing: linear|log")
      ->check(CLI::IsMember({"linear", "log"}));
  app.add_option("--rho-min", cfg.rho_min, "density: lower rho");
  app.add_option("--rho-max", cfg.rho_max, "density: upper rho");
  app.add_option("--rho-n", cfg.rho_n, "density: rho sample count");
  app.add_option("--out", cfg.out_path, "output file (default stdout)");
  app.add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", cfg.threads_arg,
                 "worker threads (positive integer or \"auto\"; default from CDCOMB_THREADS)");
  app.add_option("--tol", cfg.tol, "oracle-check tolerance / resonance bracket width");
  app.add_option("--geometry", cfg.geometry_path,
                 "oracle-check: spec and comb positions from a geometry JSON dump");
  app.add_flag("--log10", cfg.log10_column, "sweep: append a log10 column (csv)");
  app.add_option("--observable", cfg.observable,
                 "sweep: transmission|reflection|scaling-function")
      ->check(CLI::IsMember({"transmission", "reflection", "scaling-function"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cdcomb: " << e.what() << '\n';
    return 2;
  }

  try {
    cfg.cdc.validate();
    resolve_threads(cfg.threads_arg);  // validate early
    if (cfg.command == "geometry") return cmd_geometry(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "density") return cmd_density(cfg);
    if (cfg.command == "resonances") return cmd_resonances(cfg);
    if (cfg.command == "scaling") return cmd_scaling(cfg);
    if (cfg.command == "oracle-check") return cmd_oracle_check(cfg);
    std::cerr << "cdcomb: unknown command " << cfg.command << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cdcomb: " << e.what() << '\n';
    return 2;
  }
}
