#include "vxl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "vxl/dynvars.hpp"
#include "vxl/errors.hpp"
#include "vxl/spectral.hpp"

namespace vxl {

std::int64_t Histogram2D::total() const {
  std::int64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

double Histogram2D::mass(std::int64_t points) const {
  return points > 0 ? static_cast<double>(total()) / static_cast<double>(points) : 0.0;
}

namespace {

double midpoint(const std::vector<double>& edges, std::size_t i) { return 0.5 * (edges[i] + edges[i + 1]); }

}  // namespace

double Histogram2D::mean_q() const {
  const std::size_t nr = r_edges.size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < q_edges.size(); ++i)
    for (std::size_t j = 0; j < nr; ++j) s += midpoint(q_edges, i) * static_cast<double>(counts[i * nr + j]);
  const auto t = total();
  return t > 0 ? s / static_cast<double>(t) : 0.0;
}

double Histogram2D::mean_r() const {
  const std::size_t nr = r_edges.size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < q_edges.size(); ++i)
    for (std::size_t j = 0; j < nr; ++j) s += midpoint(r_edges, j) * static_cast<double>(counts[i * nr + j]);
  const auto t = total();
  return t > 0 ? s / static_cast<double>(t) : 0.0;
}

namespace {

std::vector<double> edges_for(std::span<const double> v, int bins) {
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double a = *lo, b = *hi;
  if (!(b > a)) {
    a -= 0.5;
    b += 0.5;
  }
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) e[static_cast<std::size_t>(i)] = a + (b - a) * i / bins;
  e.back() = b;
  return e;
}

std::size_t bin_of(double v, const std::vector<double>& edges) {
  const std::size_t bins = edges.size() - 1;
  const double a = edges.front(), b = edges.back();
  auto i = static_cast<std::ptrdiff_t>(std::floor((v - a) / (b - a) * static_cast<double>(bins)));
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(bins) - 1));
}

Histogram2D histogram(std::string ql, std::string rl, std::span<const double> q, std::span<const double> r,
                      int bins) {
  Histogram2D h{std::move(ql), std::move(rl), edges_for(q, bins), edges_for(r, bins), {}};
  h.counts.assign(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0);
  for (std::size_t k = 0; k < q.size(); ++k) {
    ++h.counts[bin_of(q[k], h.q_edges) * static_cast<std::size_t>(bins) + bin_of(r[k], h.r_edges)];
  }
  return h;
}

}  // namespace

QRHistogram qr_invariants(const VectorField& u, int bins) {
  if (bins < 2) throw InvalidArgument("histogram needs at least 2 bins");
  const auto a = velocity_gradient(u);
  const auto tr2 = contract(a, a.transpose());
  const auto tr3 = contract(matmul(a, a), a.transpose());
  const auto q = tr2.values(), r = tr3.values();
  std::vector<double> qc(q.size()), rc(r.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    qc[i] = -0.5 * q[i];
    rc[i] = -r[i] / 3.0;
  }
  return {histogram("trA2", "trA3", q, r, bins), histogram("Q", "R", qc, rc, bins)};
}

nlohmann::json to_json(const Histogram2D& h) {
  const std::size_t nr = h.r_edges.size() - 1;
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i + 1 < h.q_edges.size(); ++i) {
    rows.push_back(std::vector<std::int64_t>(h.counts.begin() + static_cast<std::ptrdiff_t>(i * nr),
                                             h.counts.begin() + static_cast<std::ptrdiff_t>((i + 1) * nr)));
  }
  return {{"q_label", h.q_label}, {"r_label", h.r_label}, {"q_edges", h.q_edges}, {"r_edges", h.r_edges},
          {"counts", rows}};
}

nlohmann::json to_json(const QRHistogram& h) {
  auto j = to_json(h.traces);
  j["alternate"] = to_json(h.conventional);
  return j;
}

namespace {

TensorField3 symmetric_part(const TensorField3& a) {
  const auto p = a.to_physical();
  auto sym = [&](int i, int j) { return (p(i, j) + p(j, i)) * 0.5; };
  return TensorField3::symmetric_from({sym(0, 0), sym(0, 1), sym(0, 2), sym(1, 1), sym(1, 2), sym(2, 2)});
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Pointwise ingredients shared by the L^q check and the diagnostics.
struct VorticityTerms {
  RealBuffer w2;       // |omega|^2
  RealBuffer wsw;      // omega . S omega
  RealBuffer w_wt;     // omega . d_t omega
  RealBuffer grad_w2;  // sum_k (omega . d_k omega)^2
};

VorticityTerms vorticity_terms(const VelocityJet& jet, const VectorField& omega_t) {
  const auto w = jet.vorticity;
  const auto dw = jet.vorticity_gradient();
  const auto w2 = norm_squared(w);
  const auto wsw = dot(w, apply(jet.strain, w));
  const auto wwt = dot(w, omega_t.to_physical());
  VorticityTerms t;
  t.w2.assign(w2.values().begin(), w2.values().end());
  t.wsw.assign(wsw.values().begin(), wsw.values().end());
  t.w_wt.assign(wwt.values().begin(), wwt.values().end());
  t.grad_w2.assign(t.w2.size(), 0.0);
  for (int k = 0; k < 3; ++k) {
    const auto g = (w[0] * dw(0, k) + w[1] * dw(1, k) + w[2] * dw(2, k));
    const auto gv = g.values();
    for (std::size_t i = 0; i < gv.size(); ++i) t.grad_w2[i] += gv[i] * gv[i];
  }
  return t;
}

LqReport lq_from_terms(const VorticityTerms& t, double q, double nu) {
  if (!(q >= 1.0)) throw InvalidArgument("q must be at least 1");
  const std::size_t n = t.w2.size();
  double lhs = 0.0, stretch = 0.0, grad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = t.w2[i] + kOmegaFloor;
    const double pm2 = std::pow(a2, 0.5 * (q - 2.0));
    lhs += q * pm2 * t.w_wt[i];
    stretch += q * pm2 * t.wsw[i];
    if (q != 1.0) grad += 0.25 * q * q * std::pow(a2, 0.5 * (q - 4.0)) * t.grad_w2[i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  lhs *= inv;
  stretch *= inv;
  grad *= inv;
  const double grad_term = -4.0 * (1.0 - 1.0 / q) * nu * grad;
  LqReport r;
  r.q = q;
  r.lhs = lhs;
  r.rhs = grad_term + stretch;
  r.slack = r.rhs - r.lhs;
  r.scale = std::abs(lhs) + std::abs(grad_term) + std::abs(stretch);
  return r;
}

}  // namespace

LqReport lq_inequality_check(const FlowState& state, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("q must be at least 1");
  const auto jet = velocity_jet(state.u);
  const auto wt = curl(ns_rhs(state));
  return lq_from_terms(vorticity_terms(jet, wt), q, state.viscosity());
}

DiagnosticsRecord diagnose(const FlowState& state, const DiagnoseOptions& options) {
  for (double q : options.q_list)
    if (!(q >= 1.0)) throw InvalidArgument("q must be at least 1");
  const double nu = state.viscosity();
  const auto jet = velocity_jet(state.u);
  const auto ut = ns_rhs(state);
  const auto wt = curl(ut);
  const auto st = symmetric_part(gradient_tensor(ut));
  const auto terms = vorticity_terms(jet, wt);

  DiagnosticsRecord r;
  r.t = state.t;
  r.viscosity = nu;
  r.mean_u2 = mean_of(norm_squared(jet.u).values());
  r.mean_enstrophy = mean_of(terms.w2);
  r.mean_S2 = mean_of(contract(jet.strain, jet.strain).values());
  r.mean_trS3 = mean_of(contract(matmul(jet.strain, jet.strain), jet.strain).values());
  r.mean_omega_S_omega = mean_of(terms.wsw);
  r.mean_grad_omega2 = mean_of(contract(jet.vorticity_gradient(), jet.vorticity_gradient()).values());
  double gs = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto d = jet.strain_derivative(k);
    gs += mean_of(contract(d, d).values());
  }
  r.mean_grad_S2 = gs;
  r.mean_helicity = mean_of(dot(jet.u, jet.vorticity).values());

  double abs_w = 0.0;
  for (double v : terms.w2) abs_w += std::sqrt(v);
  r.mean_abs_omega = abs_w / static_cast<double>(terms.w2.size());
  r.entropy_functional = r.mean_abs_omega + r.mean_u2 / (std::sqrt(2.0) * nu);

  for (double q : options.q_list) {
    double s = 0.0;
    for (double v : terms.w2) s += std::pow(v, 0.5 * q);
    r.mean_abs_omega_q.emplace_back(q, s / static_cast<double>(terms.w2.size()));
    r.lq.push_back(lq_from_terms(terms, q, nu));
  }

  r.d_mean_u2_dt = 2.0 * mean_of(dot(jet.u, ut.to_physical()).values());
  r.d_mean_S2_dt = 2.0 * mean_of(contract(jet.strain, st).values());
  const auto first = lq_from_terms(terms, 1.0, nu);
  r.d_mean_abs_omega_dt = first.lhs;
  r.mean_stretching_over_abs_omega = first.rhs;
  return r;
}

DissipationCheck dissipation_check(const DiagnosticsRecord& r) {
  auto rel = [](double num, double den) { return num / std::max(std::abs(den), 1e-300); };
  const double dis = r.viscosity * r.mean_enstrophy;
  DissipationCheck c;
  c.energy_printed = rel(r.d_mean_u2_dt + dis, dis);
  c.energy_exact = rel(r.d_mean_u2_dt + 2.0 * dis, 2.0 * dis);
  const double strain_scale =
      std::abs(r.d_mean_S2_dt) + r.viscosity * r.mean_grad_omega2 + std::abs(r.mean_omega_S_omega);
  c.strain = rel(r.d_mean_S2_dt + r.viscosity * r.mean_grad_omega2 - r.mean_omega_S_omega, strain_scale);
  return c;
}

EntropyReport entropy_monotonicity_check(const std::vector<DiagnosticsRecord>& series) {
  if (series.size() < 3) throw InvalidArgument("entropy check needs at least 3 samples");
  EntropyReport rep;
  rep.samples = series.size();
  rep.tolerance = 1e-10 * std::abs(series.front().entropy_functional);
  rep.max_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < series.size(); ++k) {
    const double inc = series[k + 1].entropy_functional - series[k].entropy_functional;
    rep.max_increase = std::max(rep.max_increase, inc);
    if (inc > rep.tolerance) ++rep.violations;
  }
  rep.min_slack_rate = rep.min_slack_cauchy = std::numeric_limits<double>::infinity();
  rep.max_equality_defect = 0.0;
  for (const auto& r : series) {
    const double rate = r.d_mean_abs_omega_dt;
    const double stretch = r.mean_stretching_over_abs_omega;
    const double cauchy = std::sqrt(r.mean_S2) * std::sqrt(r.mean_enstrophy);
    const double closed = r.mean_enstrophy / std::sqrt(2.0);
    const double s1 = (stretch - rate) / std::max(std::abs(stretch) + std::abs(rate), 1e-300);
    const double s2 = (cauchy - stretch) / std::max(cauchy + std::abs(stretch), 1e-300);
    const double d3 = std::abs(cauchy - closed) / std::max(closed, 1e-300);
    rep.min_slack_rate = std::min(rep.min_slack_rate, s1);
    rep.min_slack_cauchy = std::min(rep.min_slack_cauchy, s2);
    rep.max_equality_defect = std::max(rep.max_equality_defect, d3);
    if (s1 < -1e-9 || s2 < -1e-12 || d3 > 1e-10) ++rep.bound_violations;
  }
  return rep;
}

nlohmann::json to_json(const LqReport& r) {
  return {{"q", r.q},         {"lhs", r.lhs},     {"rhs", r.rhs},
          {"slack", r.slack}, {"scale", r.scale}, {"tolerance", r.tolerance},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const EntropyReport& r) {
  return {{"samples", r.samples},
          {"tolerance", r.tolerance},
          {"max_increase", r.max_increase},
          {"violations", r.violations},
          {"min_slack_rate", r.min_slack_rate},
          {"min_slack_cauchy_schwarz", r.min_slack_cauchy},
          {"max_equality_defect", r.max_equality_defect},
          {"bound_violations", r.bound_violations},
          {"passed", r.passed()}};
}

namespace {

std::string q_label(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", q);
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Column {
  std::string name;
  double DiagnosticsRecord::*field;
};

const std::vector<Column>& scalar_columns() {
  static const std::vector<Column> cols{
      {"t", &DiagnosticsRecord::t},
      {"mean_u2", &DiagnosticsRecord::mean_u2},
      {"mean_enstrophy", &DiagnosticsRecord::mean_enstrophy},
      {"mean_abs_omega", &DiagnosticsRecord::mean_abs_omega},
      {"mean_S2", &DiagnosticsRecord::mean_S2},
      {"mean_trS3", &DiagnosticsRecord::mean_trS3},
      {"mean_omega_S_omega", &DiagnosticsRecord::mean_omega_S_omega},
      {"mean_grad_omega2", &DiagnosticsRecord::mean_grad_omega2},
      {"mean_grad_S2", &DiagnosticsRecord::mean_grad_S2},
      {"entropy_functional", &DiagnosticsRecord::entropy_functional},
      {"mean_helicity", &DiagnosticsRecord::mean_helicity},
      {"viscosity", &DiagnosticsRecord::viscosity},
      {"d_mean_u2_dt", &DiagnosticsRecord::d_mean_u2_dt},
      {"d_mean_S2_dt", &DiagnosticsRecord::d_mean_S2_dt},
      {"d_mean_abs_omega_dt", &DiagnosticsRecord::d_mean_abs_omega_dt},
      {"mean_stretching_over_abs_omega", &DiagnosticsRecord::mean_stretching_over_abs_omega},
  };
  return cols;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  std::vector<double> qs;
  if (!records.empty())
    for (const auto& [q, v] : records.front().mean_abs_omega_q) qs.push_back(q);
  std::string header;
  for (const auto& c : scalar_columns()) header += (header.empty() ? "" : ",") + c.name;
  for (double q : qs) header += ",mean_abs_omega_q" + q_label(q);
  for (double q : qs) {
    const auto l = q_label(q);
    header += ",lq_lhs_q" + l + ",lq_rhs_q" + l + ",lq_slack_q" + l + ",lq_scale_q" + l;
  }
  out << header << '\n';
  for (const auto& r : records) {
    std::string line;
    for (const auto& c : scalar_columns()) line += (line.empty() ? "" : ",") + num(r.*(c.field));
    for (const auto& [q, v] : r.mean_abs_omega_q) line += "," + num(v);
    for (const auto& l : r.lq) line += "," + num(l.lhs) + "," + num(l.rhs) + "," + num(l.slack) + "," + num(l.scale);
    out << line << '\n';
  }
}

std::vector<DiagnosticsRecord> read_csv(std::istream& in) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty diagnostics CSV");
  const auto header = split(line);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  for (const auto& c : scalar_columns())
    if (!index.count(c.name)) throw FormatError("diagnostics CSV lacks column " + c.name);
  std::vector<std::pair<double, std::string>> qs;
  const std::string prefix = "mean_abs_omega_q";
  for (const auto& h : header)
    if (h.rfind(prefix, 0) == 0) qs.emplace_back(std::stod(h.substr(prefix.size())), h.substr(prefix.size()));

  std::vector<DiagnosticsRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw FormatError("diagnostics CSV row has wrong width");
    auto value = [&](const std::string& name) {
      const auto it = index.find(name);
      if (it == index.end()) throw FormatError("diagnostics CSV lacks column " + name);
      try {
        return std::stod(cells[it->second]);
      } catch (const std::exception&) {
        throw FormatError("bad number in diagnostics CSV: " + cells[it->second]);
      }
    };
    DiagnosticsRecord r;
    for (const auto& c : scalar_columns()) r.*(c.field) = value(c.name);
    for (const auto& [q, l] : qs) {
      r.mean_abs_omega_q.emplace_back(q, value(prefix + l));
      if (index.count("lq_lhs_q" + l)) {
        LqReport lq;
        lq.q = q;
        lq.lhs = value("lq_lhs_q" + l);
        lq.rhs = value("lq_rhs_q" + l);
        lq.slack = value("lq_slack_q" + l);
        lq.scale = value("lq_scale_q" + l);
        r.lq.push_back(lq);
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace vxl
