#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vxl/dynvars.hpp"
#include "vxl/errors.hpp"
#include "vxl/evolution.hpp"
#include "vxl/heatkernel.hpp"
#include "vxl/identities.hpp"
#include "vxl/initial_conditions.hpp"
#include "vxl/snapshot.hpp"
#include "vxl/spectral.hpp"
#include "vxl/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vxl::app {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number list: " + text);
    }
  }
  if (values.empty()) throw InvalidArgument("empty number list");
  return values;
}

namespace {

// Exclusive claim on an output directory for the lifetime of a run.
class RunLock {
 public:
  explicit RunLock(const fs::path& dir) : path_(dir / ".vxl.lock") {
    fs::create_directories(dir);
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw Error("output directory is in use by another run: " + dir.string());
    std::fclose(f);
  }
  ~RunLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  fs::path path_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path.string());
  f << text;
}

json flow_params(const FlowOptions& f, InitialKind kind) {
  switch (kind) {
    case InitialKind::taylor_green:
      return json::object();
    case InitialKind::abc:
      return {{"A", f.abc_a}, {"B", f.abc_b}, {"C", f.abc_c}};
    case InitialKind::random_isotropic:
      return {{"k0", f.k0}, {"energy", f.energy}, {"band_limit", f.band_limit}};
  }
  return json::object();
}

void validate_flow(const FlowOptions& f) {
  if (f.nu && !(*f.nu > 0.0)) throw InvalidArgument("--nu must be positive");
  if (f.re && !(*f.re > 0.0)) throw InvalidArgument("--re must be positive");
  if (!(f.box_length > 0.0)) throw InvalidArgument("--box-length must be positive");
  if (f.n < 8 || f.n % 2 != 0) throw InvalidArgument("--n must be even and at least 8");
  if (f.band_limit < 0) throw InvalidArgument("--band-limit must be nonnegative");
}

FlowState make_state(const FlowOptions& f, int default_band_limit = 0) {
  validate_flow(f);
  const auto kind = parse_initial_kind(f.ic);
  InitialConditionParams p;
  p.a = f.abc_a;
  p.b = f.abc_b;
  p.c = f.abc_c;
  p.k0 = f.k0;
  p.energy = f.energy;
  p.band_limit = f.band_limit > 0 ? f.band_limit : default_band_limit;
  const auto grid = Grid::create(f.n, f.box_length);
  const double nu = f.re ? 1.0 / *f.re : f.nu.value_or(0.01);
  auto state = initial_condition(kind, grid, p, f.seed, nu);
  if (f.re) state = FlowState::dimensionless(state.u, *f.re);
  return state;
}

json viscosity_json(const FlowState& s) {
  return s.mode == ViscosityMode::dimensional ? json{{"nu", s.nu_or_re}} : json{{"Re", s.nu_or_re}};
}

void emit(std::ostream& out, const json& j, const std::string& file) {
  const auto text = j.dump(2);
  out << text << '\n';
  if (!file.empty()) write_text(file, text + "\n");
}

}  // namespace

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  SolverConfig config{o.dt, o.t_end, o.output_interval, o.cfl};
  config.validate();
  DiagnoseOptions diag{parse_list(o.q_list)};
  for (double q : diag.q_list)
    if (!(q >= 1.0)) throw InvalidArgument("--q-list entries must be >= 1");
  if (o.bins < 2) throw InvalidArgument("--bins must be at least 2");
  validate_flow(o.flow);
  const auto kind = parse_initial_kind(o.flow.ic);

  const fs::path dir(o.out);
  RunLock lock(dir);
  auto state = make_state(o.flow);

  json manifest{{"n", o.flow.n},
                {"box_length", o.flow.box_length},
                {"nu_or_Re", viscosity_json(state)},
                {"dt", o.dt},
                {"t_end", o.t_end},
                {"output_interval", o.output_interval},
                {"cfl", o.cfl},
                {"seed", o.flow.seed},
                {"ic_kind", std::string(to_string(kind))},
                {"ic_params", flow_params(o.flow, kind)},
                {"q_list", diag.q_list}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  std::vector<DiagnosticsRecord> records;
  auto flush = [&] {
    std::ofstream csv(dir / "diagnostics.csv", std::ios::binary);
    if (!csv) throw FormatError("cannot write diagnostics.csv");
    write_csv(csv, records);
  };
  auto snapshot = [&](std::int64_t k) {
    if (!o.snapshots) return;
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%06lld.vxl", static_cast<long long>(k));
    write_snapshot(dir / name, make_snapshot(state.u, state.t, state.viscosity()));
  };

  records.push_back(diagnose(state, diag));
  snapshot(0);
  Stepper stepper(state.u.grid(), state.viscosity(), o.dt, o.cfl);
  const auto per_output = config.steps_per_output();
  const auto outputs = config.output_count();
  try {
    for (std::int64_t k = 1; k <= outputs; ++k) {
      for (std::int64_t s = 0; s < per_output; ++s) stepper.advance(state);
      state.t = static_cast<double>(k) * o.output_interval;
      records.push_back(diagnose(state, diag));
      snapshot(k);
    }
  } catch (const CflViolation&) {
    flush();
    throw;
  }
  flush();
  write_text(dir / "qr_histogram.json", to_json(qr_invariants(state.u, o.bins)).dump(2) + "\n");
  out << json{{"out", dir.string()}, {"rows", records.size()}, {"t_final", state.t}}.dump() << '\n';
  return 0;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  FlowState state;
  if (!o.snapshot.empty()) {
    const auto snap = read_snapshot(fs::path(o.snapshot));
    const double nu = o.flow.re ? 1.0 / *o.flow.re : o.flow.nu.value_or(snap.viscosity);
    if (!(nu > 0.0)) throw InvalidArgument("snapshot carries no positive viscosity; pass --nu");
    state = FlowState::dimensional(snap.as_vector(), nu, snap.time);
  } else {
    state = make_state(o.flow, o.flow.ic == "random" ? o.flow.n / 4 : 0);
  }
  state.validate();

  std::vector<ResidualReport> reports;
  const auto& u = state.u;
  reports.push_back(residual_tr2(u));
  reports.push_back(residual_tr3(u, Tr3Flux::half));
  reports.push_back(residual_tr3(u, Tr3Flux::three_halves));
  reports.push_back(residual_tr2_sw(u));
  reports.push_back(residual_tr3_sw(u));
  reports.push_back(residual_grad_sw(u));
  reports.push_back(residual_pressure_hessian(u, pressure_from_velocity(u)));
  reports.push_back(gamma2_residual(u, u[0], state.viscosity()));
  for (auto which : kAllEvolutionChecks)
    for (auto& r : evolution_residual(state, which)) reports.push_back(std::move(r));
  for (auto& r : mean_identities(u)) reports.push_back(std::move(r));

  bool ok = true;
  for (const auto& r : reports)
    if (r.expected_exact && !r.passed()) ok = false;
  emit(out, to_json(reports), o.out);
  return ok ? 0 : 1;
}

int cmd_stats(const StatsOptions& o, std::ostream& out) {
  const fs::path dir(o.run_dir);
  std::ifstream csv(dir / "diagnostics.csv");
  if (!csv) throw FormatError("cannot read " + (dir / "diagnostics.csv").string());
  const auto records = read_csv(csv);
  json manifest;
  if (std::ifstream m(dir / "manifest.json"); m) manifest = json::parse(m);

  const auto entropy = entropy_monotonicity_check(records);
  bool ok = entropy.passed();

  json lq = json::array();
  std::map<double, std::pair<double, bool>> worst;  // q -> (min slack/scale, all passed)
  for (const auto& r : records) {
    for (auto l : r.lq) {
      const double normalized = l.slack / std::max(l.scale, 1e-300);
      auto [it, fresh] = worst.try_emplace(l.q, normalized, true);
      if (!fresh) it->second.first = std::min(it->second.first, normalized);
      if (!l.passed()) {
        it->second.second = false;
        ok = false;
      }
    }
  }
  for (const auto& [q, w] : worst) lq.push_back({{"q", q}, {"min_relative_slack", w.first}, {"passed", w.second}});

  double energy_printed = 0.0, energy_exact = 0.0, strain = 0.0;
  for (const auto& r : records) {
    const auto d = dissipation_check(r);
    energy_printed = std::max(energy_printed, std::abs(d.energy_printed));
    energy_exact = std::max(energy_exact, std::abs(d.energy_exact));
    strain = std::max(strain, std::abs(d.strain));
  }
  json report{{"run", dir.string()},
              {"records", records.size()},
              {"entropy", to_json(entropy)},
              {"lq", lq},
              {"dissipation",
               {{"max_relative_energy_nu_omega2", energy_printed},
                {"max_relative_energy_2nu_omega2", energy_exact},
                {"max_relative_strain", strain}}},
              {"passed", ok}};
  if (!manifest.is_null()) report["manifest"] = manifest;
  emit(out, report, o.out);
  return ok ? 0 : 1;
}

namespace {

json p_beta_sweep() {
  double worst = 0.0;
  std::size_t points = 0;
  for (int ib = 0; ib <= 10; ++ib)
    for (int ir = 0; ir <= 10; ++ir)
      for (double t : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        const double beta = -5.0 + ib, r = 0.5 * ir;
        const double closed = p_beta(0.0, t, r, beta);
        const double integral = p_beta_integral(0.0, t, r, beta);
        const double diff = std::abs(closed - integral) / std::max(std::abs(integral), std::numeric_limits<double>::min());
        worst = std::isnan(diff) ? diff : std::max(worst, diff);
        ++points;
      }
  return {{"points", points}, {"max_relative_difference", worst}, {"passed", !std::isnan(worst) && worst < 1e-10}};
}

json f_pm_limits() {
  json cases = json::array();
  bool ok = true;
  auto add = [&](int sign, double r, double delta_of_sigma_fixed, const char* label, double limit) {
    json row{{"sign", sign}, {"case", label}, {"limit", limit}};
    json factors = json::array();
    double last = 0.0;
    for (double s : {10.0, 100.0, 1000.0}) {
      const double delta = delta_of_sigma_fixed > 0.0 ? delta_of_sigma_fixed / (s * s) : 1.0;
      const double rr = delta_of_sigma_fixed > 0.0 ? delta + r : r;
      last = f_pm_psi_factor(s, rr, delta, sign);
      factors.push_back({{"sigma", s},
                         {"delta", delta},
                         {"psi_factor", last},
                         {"psi_term", f_pm_psi_term(s, rr, delta, sign)}});
    }
    row["values"] = factors;
    row["passed"] = std::abs(last - limit) < 1e-6;
    ok = ok && row["passed"].get<bool>();
    cases.push_back(row);
  };
  add(+1, 0.5, 1.0, "r - delta = +0.5, sigma^2 delta = 1", 0.0);
  add(+1, 1.5, 0.0, "r - delta > 0", 0.0);
  add(+1, 0.5, 0.0, "r - delta < 0", 1.0);
  add(+1, 1.0, 0.0, "r - delta = 0", 0.5);
  add(-1, 0.5, 0.0, "r + delta > 0", 0.0);
  add(-1, 0.0, 0.0, "r + delta > 0 at r = 0", 0.0);
  return {{"cases", cases}, {"passed", ok}};
}

json propagator_convergence(double sigma) {
  const auto grid = Grid::create(32);
  const auto theta = VectorField::sample(grid, [](double x, double y, double z) {
    return std::array<double, 3>{std::sin(y), std::sin(z), std::sin(x)};
  });
  const Mat3 gamma{{{1.0, 0.0, 0.0}, {0.0, -0.5, 0.0}, {0.0, 0.0, -0.5}}};
  json rows = json::array();
  double previous = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (double delta : {0.02, 0.01, 0.005}) {
    const KernelParams p{sigma, delta};
    const auto diff = short_time_vorticity_step(theta, gamma, p) -
                      exact_linear_vorticity_step(theta, gamma, {0.0, 0.0, 0.0}, p).to_physical();
    const double d = sup_norm(diff);
    monotone = monotone && d < previous;
    previous = d;
    rows.push_back({{"delta", delta}, {"sup_difference", d}});
  }
  return {{"sigma", sigma}, {"differences", rows}, {"passed", monotone}};
}

}  // namespace

int cmd_kernel(const KernelOptions& o, std::ostream& out) {
  if (o.timescale) {
    const auto rep = o.length ? vorticity_timescale(DimensionlessScaling{*o.length, o.velocity, o.nu})
                              : vorticity_timescale(o.nu, o.velocity);
    emit(out, to_json(rep), o.out);
    return 0;
  }
  const double sigma = o.sigma ? *o.sigma : std::sqrt(o.re.value_or(100.0) / 2.0);
  const KernelParams params{sigma, o.delta};
  params.validate();
  if (!o.drift.empty() && o.drift.size() != 3) throw InvalidArgument("--drift takes three values");
  std::vector<Vec3> drifts;
  if (o.drift.empty()) {
    drifts = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  } else {
    drifts = {{o.drift[0], o.drift[1], o.drift[2]}};
  }
  if (o.lattice < 2) throw InvalidArgument("--lattice must be at least 2");
  if (o.monte_carlo && o.samples < 100000) throw InvalidArgument("--samples must be at least 1e5");

  bool ok = true;
  json report;
  report["sigma"] = sigma;
  report["delta"] = o.delta;
  report["p_beta"] = p_beta_sweep();
  ok = ok && report["p_beta"]["passed"].get<bool>();

  json sandwich = json::array();
  KernelBoundsOptions lattice;
  lattice.points_per_axis = o.lattice;
  for (const auto& d : drifts) {
    const auto rep = kernel_bounds_check(params, d, lattice);
    ok = ok && rep.passed();
    sandwich.push_back(to_json(rep));
  }
  report["sandwich"] = sandwich;

  report["f_pm"] = f_pm_limits();
  ok = ok && report["f_pm"]["passed"].get<bool>();
  report["propagator"] = propagator_convergence(sigma);
  ok = ok && report["propagator"]["passed"].get<bool>();
  report["memory_factor"] = memory_factor(params);
  report["timescale"] = to_json(vorticity_timescale(o.nu, o.velocity));

  if (o.monte_carlo) {
    MonteCarloOptions mc;
    mc.samples = o.samples;
    const auto rep = monte_carlo_kernel_check(params, {0.0, 0.0, 0.0}, DriftField::uniform(drifts.front()), o.seed, mc);
    ok = ok && rep.passed();
    report["monte_carlo"] = to_json(rep);
  }
  report["passed"] = ok;
  emit(out, report, o.out);
  return ok ? 0 : 1;
}

}  // namespace vxl::app
