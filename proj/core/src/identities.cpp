#include "vxl/identities.hpp"

#include <cmath>

#include "vxl/dynvars.hpp"
#include "vxl/spectral.hpp"

namespace vxl {

namespace {

double mean_abs(const ScalarField& f) {
  const auto p = f.to_physical();
  double s = 0.0;
  for (double v : p.values()) s += std::abs(v);
  return s / static_cast<double>(p.values().size());
}

}  // namespace

VectorField verification_field(const VectorField& u, int factor) {
  return resample(u, u.grid()->refined(factor)).to_physical();
}

ScalarField verification_field(const ScalarField& f, int factor) {
  return resample(f, f.grid()->refined(factor)).to_physical();
}

ResidualReport residual_tr2(const VectorField& u) {
  const auto jet = velocity_jet(verification_field(u));
  const auto lhs = contract(jet.grad, jet.grad.transpose());
  const auto rhs = divergence(advect(jet.u, jet.u));
  return make_report("tr2", lhs - rhs, sup_norm(lhs), kPointwiseTolerance);
}

ResidualReport residual_tr3(const VectorField& u, Tr3Flux flux) {
  const auto jet = velocity_jet(verification_field(u));
  const auto lhs = contract(matmul(jet.grad, jet.grad), jet.grad.transpose());
  const auto w = advect(jet.u, jet.u);
  const auto div_w = divergence(w).to_physical();
  const double c = flux == Tr3Flux::half ? 0.5 : 1.5;
  const auto f = advect(jet.u, w) - (div_w * jet.u) * c;
  auto r = make_report(flux == Tr3Flux::half ? "tr3" : "tr3_three_halves_flux", lhs - divergence(f), sup_norm(lhs),
                       kPointwiseTolerance);
  r.expected_exact = flux == Tr3Flux::three_halves;
  return r;
}

ResidualReport residual_tr2_sw(const VectorField& u) {
  const auto jet = velocity_jet(verification_field(u));
  const auto lhs = contract(jet.grad, jet.grad.transpose());
  const auto rhs = contract(jet.strain, jet.strain) - norm_squared(jet.vorticity) * 0.5;
  return make_report("tr2_sw", lhs - rhs, sup_norm(lhs), kPointwiseTolerance);
}

ResidualReport residual_tr3_sw(const VectorField& u) {
  const auto jet = velocity_jet(verification_field(u));
  const auto lhs = contract(matmul(jet.grad, jet.grad), jet.grad.transpose());
  const auto rhs = contract(matmul(jet.strain, jet.strain), jet.strain) +
                   dot(jet.vorticity, apply(jet.strain, jet.vorticity)) * 0.75;
  return make_report("tr3_sw", lhs - rhs, sup_norm(lhs), kPointwiseTolerance);
}

VectorField grad_sw_flux(const VectorField& u) {
  const auto us = u.to_spectral();
  const auto up = u.to_physical();
  VectorField flux = VectorField::zeros(u.grid(), Representation::spectral);
  for (int k = 0; k < 3; ++k) {
    const auto axis = static_cast<Axis>(k);
    const VectorField dku{derivative(us[0], axis), derivative(us[1], axis), derivative(us[2], axis)};
    const auto transported = advect(up, dku);
    flux += VectorField{derivative(transported[0], axis), derivative(transported[1], axis),
                        derivative(transported[2], axis)};
  }
  flux -= advect(up, laplacian(us));
  return flux;
}

ResidualReport residual_grad_sw(const VectorField& u) {
  const auto jet = velocity_jet(verification_field(u));
  ScalarField grad_s = contract(jet.strain_derivative(0), jet.strain_derivative(0));
  grad_s += contract(jet.strain_derivative(1), jet.strain_derivative(1));
  grad_s += contract(jet.strain_derivative(2), jet.strain_derivative(2));
  const auto dw = jet.vorticity_gradient();
  const auto lhs = grad_s - contract(dw, dw) * 0.5;
  const auto rhs = divergence(grad_sw_flux(jet.u));
  return make_report("grad_sw", lhs - rhs, sup_norm(lhs), kPointwiseTolerance);
}

ResidualReport residual_pressure_hessian(const VectorField& u, const ScalarField& p) {
  const auto jet = velocity_jet(verification_field(u));
  const auto pr = verification_field(p);
  const auto h = hessian(pr).to_physical();
  const auto lhs = contract(jet.strain, h);
  const auto grad_p = gradient(pr);
  const auto rhs = divergence(advect(jet.u, grad_p)) - divergence(laplacian(pr).to_physical() * jet.u);
  return make_report("pressure_hessian", lhs - rhs, sup_norm(lhs), kPointwiseTolerance);
}

ResidualReport gamma2_residual(const VectorField& u, const ScalarField& f, double nu) {
  const auto jet = velocity_jet(verification_field(u));
  const auto fr = verification_field(f);
  auto L = [&](const ScalarField& g) { return (laplacian(g) * nu).to_physical() + advect(jet.u, g); };
  auto carre = [&](const ScalarField& a, const ScalarField& b) {
    return (L(a * b) - a * L(b) - b * L(a)) * 0.5;
  };
  const auto lf = L(fr);
  const auto gamma2 = (L(carre(fr, fr)) - carre(fr, lf) * 2.0) * 0.5;

  const auto h = hessian(fr).to_physical();
  const auto g = gradient(fr).to_physical();
  const auto closed = contract(h, h) * (nu * nu) - dot(g, apply(jet.strain, g)) * nu;
  return make_report("gamma2", gamma2 - closed, sup_norm(gamma2), kPointwiseTolerance);
}

std::array<ResidualReport, 3> mean_identities(const VectorField& u) {
  const auto inv = invariants(u);
  const double s2 = volume_mean(inv.trS2);
  const double w2 = volume_mean(inv.enstrophy);
  const double s3 = volume_mean(inv.trS3);
  const double wsw = volume_mean(inv.omega_S_omega);
  const double gs = volume_mean(inv.grad_S_sq);
  const double gw = volume_mean(inv.grad_omega_sq);
  return {make_scalar_report("mean_s2", s2 - 0.5 * w2, mean_abs(inv.trS2), kMeanTolerance),
          make_scalar_report("mean_s3", s3 + 0.75 * wsw, mean_abs(inv.trS3), kMeanTolerance),
          make_scalar_report("mean_grad_sw", gs - 0.5 * gw, mean_abs(inv.grad_S_sq), kMeanTolerance)};
}

}  // namespace vxl
