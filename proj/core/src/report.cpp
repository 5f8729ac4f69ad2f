#include "vxl/report.hpp"

#include <algorithm>
#include <cmath>

namespace vxl {

namespace {

ResidualReport finish(std::string name, double sup, double l2, double scale, double threshold) {
  ResidualReport r;
  r.name = std::move(name);
  r.sup_norm = sup;
  r.l2_norm = l2;
  r.reference_scale = scale;
  r.relative = sup / std::max(scale, kRelativeFloor);
  r.threshold = threshold;
  return r;
}

}  // namespace

ResidualReport make_report(std::string name, const ScalarField& residual, double reference_scale,
                           double threshold) {
  return finish(std::move(name), sup_norm(residual), rms(residual), reference_scale, threshold);
}

ResidualReport make_report(std::string name, const VectorField& residual, double reference_scale,
                           double threshold) {
  const double l2 = std::sqrt(std::pow(rms(residual[0]), 2) + std::pow(rms(residual[1]), 2) +
                              std::pow(rms(residual[2]), 2));
  return finish(std::move(name), sup_norm(residual), l2, reference_scale, threshold);
}

ResidualReport make_report(std::string name, const TensorField3& residual, double reference_scale,
                           double threshold) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += std::pow(rms(residual(i, j)), 2);
  return finish(std::move(name), sup_norm(residual), std::sqrt(s), reference_scale, threshold);
}

ResidualReport make_scalar_report(std::string name, double residual, double reference_scale, double threshold) {
  return finish(std::move(name), std::abs(residual), std::abs(residual), std::abs(reference_scale), threshold);
}

nlohmann::json to_json(const ResidualReport& r) {
  return {{"name", r.name},
          {"sup_norm", r.sup_norm},
          {"l2_norm", r.l2_norm},
          {"reference_scale", r.reference_scale},
          {"relative", r.relative},
          {"threshold", r.threshold},
          {"expected_exact", r.expected_exact},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const std::vector<ResidualReport>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

}  // namespace vxl
