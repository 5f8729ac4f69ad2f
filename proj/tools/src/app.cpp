#include "vxl/app.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "vxl/errors.hpp"

namespace vxl::app {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int report_error(std::ostream& err, const std::string& message, int code) {
  err << nlohmann::json{{"error", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

void add_flow_options(CLI::App& cmd, FlowOptions& f) {
  cmd.add_option("--n", f.n, "grid points per axis (even, >= 8)");
  cmd.add_option("--box-length", f.box_length, "periodic box length");
  auto* nu = cmd.add_option("--nu", f.nu, "kinematic viscosity");
  auto* re = cmd.add_option("--re", f.re, "Reynolds number (dimensionless mode, viscosity 1/Re)");
  nu->excludes(re);
  cmd.add_option("--ic", f.ic, "initial condition")->check(CLI::IsMember({"taylor-green", "abc", "random"}));
  cmd.add_option("--seed", f.seed, "random seed");
  cmd.add_option("--k0", f.k0, "spectral peak of the random initial condition");
  cmd.add_option("--energy", f.energy, "kinetic energy (1/2)<|u|^2> of the random initial condition");
  cmd.add_option("--abc-a", f.abc_a);
  cmd.add_option("--abc-b", f.abc_b);
  cmd.add_option("--abc-c", f.abc_c);
  cmd.add_option("--band-limit", f.band_limit, "keep modes with every |k_i| below this (0: two-thirds mask)");
}

// Index of the first argument that names a subcommand.
std::size_t subcommand_position(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] == "simulate" || args[i] == "verify" || args[i] == "stats" || args[i] == "kernel") return i;
  return args.size();
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const auto extra = config_arguments(path);
  auto result = args;
  const std::size_t at = std::min(subcommand_position(args) + 1, result.size());
  result.insert(result.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  return result;
}

}  // namespace

std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config file " + path);
  std::vector<std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw FormatError(path + ":" + std::to_string(number) + ": expected key=value");
    const auto key = trim(t.substr(0, eq));
    const auto value = trim(t.substr(eq + 1));
    if (key.empty() || key == "config") throw FormatError(path + ":" + std::to_string(number) + ": invalid key");
    out.push_back(value == "true" ? "--" + key : "--" + key + "=" + value);
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Vorticity and strain diagnostics for decaying periodic turbulence", "vxl"};
  cli.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cli.require_subcommand(1);
  std::string config;

  SimulateOptions sim;
  auto* simulate = cli.add_subcommand("simulate", "run the pseudo-spectral solver and record diagnostics");
  add_flow_options(*simulate, sim.flow);
  simulate->add_option("--dt", sim.dt, "time step");
  simulate->add_option("--t-end", sim.t_end, "final time");
  simulate->add_option("--output-interval", sim.output_interval, "time between diagnostics records");
  simulate->add_option("--cfl", sim.cfl, "advective CFL constant");
  simulate->add_option("--out", sim.out, "output directory");
  simulate->add_option("--q-list", sim.q_list, "comma-separated exponents q for <|omega|^q>");
  simulate->add_option("--bins", sim.bins, "bins per axis of the (trA^2, trA^3) histogram");
  simulate->add_flag("--snapshots", sim.snapshots, "write a VXL1 snapshot at every output time");
  simulate->add_option("--config", config, "key=value file; flags override");

  VerifyOptions ver;
  auto* verify = cli.add_subcommand("verify", "evaluate identity and evolution residuals");
  add_flow_options(*verify, ver.flow);
  verify->add_option("--snapshot", ver.snapshot, "VXL1 velocity snapshot to verify");
  verify->add_option("--out", ver.out, "also write the report array to this file");
  verify->add_option("--config", config, "key=value file; flags override");

  StatsOptions st;
  auto* stats = cli.add_subcommand("stats", "entropy monotonicity and L^q checks over a completed run");
  stats->add_option("run", st.run_dir, "run directory written by simulate")->required();
  stats->add_option("--out", st.out, "also write the report to this file");
  stats->add_option("--config", config, "key=value file; flags override");

  KernelOptions ker;
  auto* kernel = cli.add_subcommand("kernel", "heat-kernel bounds, f+/- limits, propagators and time scale");
  auto* sigma = kernel->add_option("--sigma", ker.sigma, "sigma = sqrt(Re / 2)");
  auto* kre = kernel->add_option("--re", ker.re, "Reynolds number (sets sigma)");
  sigma->excludes(kre);
  kernel->add_option("--delta", ker.delta, "elapsed time");
  kernel->add_option("--drift", ker.drift, "constant drift phi (3 values) for the bounds check")->expected(3)->delimiter(',');
  kernel->add_flag("--monte-carlo", ker.monte_carlo, "run the Euler-Maruyama density check");
  kernel->add_option("--samples", ker.samples, "Monte Carlo samples");
  kernel->add_option("--seed", ker.seed, "Monte Carlo seed");
  kernel->add_option("--lattice", ker.lattice, "offsets per axis in the bounds lattice");
  kernel->add_flag("--timescale", ker.timescale, "only report the vorticity time scale 2 nu / U^2");
  kernel->add_option("--nu", ker.nu, "viscosity for --timescale");
  kernel->add_option("--u", ker.velocity, "velocity scale for --timescale");
  kernel->add_option("--length", ker.length, "length scale for --timescale");
  kernel->add_option("--out", ker.out, "also write the report to this file");
  kernel->add_option("--config", config, "key=value file; flags override");

  try {
    const auto args = expand_config(raw_args);
    std::vector<const char*> argv{"vxl"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      cli.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << cli.help();
      return kPass;
    } catch (const CLI::CallForAllHelp&) {
      out << cli.help();
      return kPass;
    } catch (const CLI::ParseError& e) {
      return report_error(err, e.what(), kUsage);
    }
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (verify->parsed()) return cmd_verify(ver, out);
    if (stats->parsed()) return cmd_stats(st, out);
    if (kernel->parsed()) return cmd_kernel(ker, out);
    return report_error(err, "no subcommand given", kUsage);
  } catch (const CflViolation& e) {
    return report_error(err, e.what(), kNumericalAbort);
  } catch (const Error& e) {
    return report_error(err, e.what(), kUsage);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, e.what(), kUsage);
  } catch (const std::exception& e) {
    return report_error(err, e.what(), kUsage);
  }
}

}  // namespace vxl::app
