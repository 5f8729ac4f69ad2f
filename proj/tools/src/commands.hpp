#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace vxl::app {

struct FlowOptions {
  int n = 32;
  double box_length = 2.0 * std::numbers::pi;
  std::optional<double> nu;
  std::optional<double> re;
  std::string ic = "taylor-green";
  std::uint64_t seed = 0;
  double k0 = 4.0;
  double energy = 0.5;
  double abc_a = 1.0;
  double abc_b = 1.0;
  double abc_c = 1.0;
  int band_limit = 0;
};

struct SimulateOptions {
  FlowOptions flow;
  double dt = 1e-3;
  double t_end = 1.0;
  double output_interval = 0.1;
  double cfl = 0.5;
  std::string out = "run";
  std::string q_list = "1,2,3";
  int bins = 64;
  bool snapshots = false;
};

struct VerifyOptions {
  FlowOptions flow;
  std::string snapshot;
  std::string out;
};

struct StatsOptions {
  std::string run_dir;
  std::string out;
};

struct KernelOptions {
  std::optional<double> sigma;
  std::optional<double> re;
  double delta = 0.01;
  std::vector<double> drift;
  bool monte_carlo = false;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  int lattice = 21;
  bool timescale = false;
  double nu = 1e-6;
  double velocity = 1.0;
  std::optional<double> length;
  std::string out;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out);
int cmd_verify(const VerifyOptions& o, std::ostream& out);
int cmd_stats(const StatsOptions& o, std::ostream& out);
int cmd_kernel(const KernelOptions& o, std::ostream& out);

std::vector<double> parse_list(const std::string& text);

}  // namespace vxl::app
