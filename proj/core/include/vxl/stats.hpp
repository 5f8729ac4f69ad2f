#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vxl/evolution.hpp"

namespace vxl {

/// Floor added to |omega|^2 before negative or fractional powers are taken.
inline constexpr double kOmegaFloor = 1e-30;

/// Joint histogram over two pointwise invariants; counts are row-major with
/// the first variable as the row.
struct Histogram2D {
  std::string q_label;
  std::string r_label;
  std::vector<double> q_edges;
  std::vector<double> r_edges;
  std::vector<std::int64_t> counts;

  std::int64_t total() const;
  /// Fraction of points binned (1 when every point fell in range).
  double mass(std::int64_t points) const;
  /// Means reconstructed from bin midpoints.
  double mean_q() const;
  double mean_r() const;
};

/// Histogram of (trA^2, trA^3) plus the conventional (Q, R) = (-trA^2/2, -trA^3/3).
struct QRHistogram {
  Histogram2D traces;
  Histogram2D conventional;
};

/// Throws InvalidArgument for bins < 2. A degenerate range is widened by 0.5
/// on each side.
QRHistogram qr_invariants(const VectorField& u, int bins = 64);

nlohmann::json to_json(const Histogram2D& h);
/// {q_edges, r_edges, counts, q_label, r_label, alternate: {...}}.
nlohmann::json to_json(const QRHistogram& h);

/// Pointwise L^q enstrophy inequality in mean form,
///   d<|omega|^q>/dt <= -4(1 - 1/q) nu <|grad |omega|^{q/2}|^2> + q <|omega|^{q-2} omega.S omega>.
struct LqReport {
  double q = 1.0;
  double lhs = 0.0;    ///< d<|omega|^q>/dt by the chain rule
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs
  double scale = 0.0;  ///< sum of magnitudes of the three terms
  double tolerance = 1e-9;

  bool passed() const { return slack >= -tolerance * scale; }
};

/// Throws InvalidArgument for q < 1.
LqReport lq_inequality_check(const FlowState& state, double q);

struct DiagnosticsRecord {
  double t = 0.0;
  double mean_u2 = 0.0;
  double mean_enstrophy = 0.0;
  double mean_abs_omega = 0.0;
  double mean_S2 = 0.0;
  double mean_trS3 = 0.0;
  double mean_omega_S_omega = 0.0;
  double mean_grad_omega2 = 0.0;
  double mean_grad_S2 = 0.0;
  double entropy_functional = 0.0;
  double mean_helicity = 0.0;
  /// (q, <|omega|^q>)
  std::vector<std::pair<double, double>> mean_abs_omega_q;

  double viscosity = 0.0;
  /// Chain-rule time derivatives from ns_rhs.
  double d_mean_u2_dt = 0.0;
  double d_mean_S2_dt = 0.0;
  double d_mean_abs_omega_dt = 0.0;
  /// <omega . S omega / |omega|>
  double mean_stretching_over_abs_omega = 0.0;
  std::vector<LqReport> lq;
};

struct DiagnoseOptions {
  std::vector<double> q_list{1.0, 2.0, 3.0};
};

/// Volume means of a state; entropy_functional = <|omega|> + <|u|^2> / (sqrt(2) nu).
DiagnosticsRecord diagnose(const FlowState& state, const DiagnoseOptions& options = {});

/// Energy and strain-dissipation laws evaluated on a record.
struct DissipationCheck {
  /// (d<|u|^2>/dt + nu <|omega|^2>) / (nu <|omega|^2>)
  double energy_printed = 0.0;
  /// (d<|u|^2>/dt + 2 nu <|omega|^2>) / (2 nu <|omega|^2>)
  double energy_exact = 0.0;
  /// (d<|S|^2>/dt + nu <|grad omega|^2> - <omega.S omega>) / scale
  double strain = 0.0;
};

DissipationCheck dissipation_check(const DiagnosticsRecord& r);

struct EntropyReport {
  std::size_t samples = 0;
  double tolerance = 0.0;
  double max_increase = 0.0;  ///< largest E(t_{k+1}) - E(t_k), may be negative
  std::size_t violations = 0;
  /// Chained bounds at each sample: d<|omega|>/dt <= <omega.S omega/|omega|>
  /// <= sqrt(<|S|^2>) sqrt(<|omega|^2>) = <|omega|^2> / sqrt(2).
  double min_slack_rate = 0.0;        ///< relative slack of the first bound
  double min_slack_cauchy = 0.0;      ///< relative slack of the second
  double max_equality_defect = 0.0;   ///< relative defect of the last equality
  std::size_t bound_violations = 0;

  bool passed() const { return violations == 0 && bound_violations == 0; }
};

/// Throws InvalidArgument for fewer than three samples.
EntropyReport entropy_monotonicity_check(const std::vector<DiagnosticsRecord>& series);

nlohmann::json to_json(const LqReport& r);
nlohmann::json to_json(const EntropyReport& r);

/// CSV with one row per record; columns are the record fields, with
/// mean_abs_omega_q<q> and lq_{lhs,rhs,slack,scale}_q<q> per configured q.
void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_csv(std::istream& in);

}  // namespace vxl
