#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vxl/fields.hpp"

namespace vxl {

/// Norms of an identity residual. `relative` is sup_norm divided by the
/// sup-norm of the identity's left-hand side (floored at 1e-300).
struct ResidualReport {
  std::string name;
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  double reference_scale = 0.0;
  double relative = 0.0;
  /// Pass threshold on `relative` used by callers that gate on the report.
  double threshold = 0.0;
  /// False for forms that are measured but not expected to vanish.
  bool expected_exact = true;

  bool passed() const { return relative < threshold; }
};

inline constexpr double kRelativeFloor = 1e-300;

ResidualReport make_report(std::string name, const ScalarField& residual, double reference_scale,
                           double threshold);
ResidualReport make_report(std::string name, const VectorField& residual, double reference_scale,
                           double threshold);
ResidualReport make_report(std::string name, const TensorField3& residual, double reference_scale,
                           double threshold);
/// Report for a scalar (mean-value) residual.
ResidualReport make_scalar_report(std::string name, double residual, double reference_scale, double threshold);

/// {name, sup_norm, l2_norm, reference_scale, relative} plus threshold,
/// expected_exact and passed.
nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const std::vector<ResidualReport>& reports);

}  // namespace vxl
