#include "vxl/dynvars.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vxl/errors.hpp"
#include "vxl/spectral.hpp"

namespace vxl {

double max_divergence(const VectorField& u) { return sup_norm(divergence(u)); }

void require_solenoidal(const VectorField& u, double tolerance) {
  const double div = max_divergence(u);
  if (div == 0.0) return;
  const double scale = std::max(1.0, sup_norm(gradient_tensor(u)));
  if (div > tolerance * scale) {
    throw NonSolenoidal("velocity is not divergence-free: max |div u| = " + std::to_string(div), div);
  }
}

TensorField3 velocity_gradient(const VectorField& u) {
  require_solenoidal(u);
  return gradient_tensor(u).to_physical();
}

StrainVorticity decompose(const TensorField3& a) {
  const auto p = a.to_physical();
  auto sym = [&](int i, int j) { return (p(i, j) + p(j, i)) * 0.5; };
  auto s = TensorField3::symmetric_from({sym(0, 0), sym(0, 1), sym(0, 2), sym(1, 1), sym(1, 2), sym(2, 2)});
  VectorField w(p(2, 1) - p(1, 2), p(0, 2) - p(2, 0), p(1, 0) - p(0, 1));
  return {std::move(s), std::move(w)};
}

TensorField3 VelocityJet::strain_derivative(int k) const {
  const auto& d = dgrad[static_cast<std::size_t>(k)];
  auto sym = [&](int i, int j) { return (d(i, j) + d(j, i)) * 0.5; };
  return TensorField3::symmetric_from({sym(0, 0), sym(0, 1), sym(0, 2), sym(1, 1), sym(1, 2), sym(2, 2)});
}

TensorField3 VelocityJet::vorticity_gradient() const {
  std::array<ScalarField, 9> c;
  for (int k = 0; k < 3; ++k) {
    const auto& d = dgrad[static_cast<std::size_t>(k)];
    c[static_cast<std::size_t>(0 + k)] = d(2, 1) - d(1, 2);
    c[static_cast<std::size_t>(3 + k)] = d(0, 2) - d(2, 0);
    c[static_cast<std::size_t>(6 + k)] = d(1, 0) - d(0, 1);
  }
  return TensorField3(std::move(c), false);
}

VelocityJet velocity_jet(const VectorField& u) {
  const auto us = u.to_spectral();
  require_solenoidal(us);
  VelocityJet jet;
  jet.u = us.to_physical();
  const auto grad_s = gradient_tensor(us);
  jet.grad = grad_s.to_physical();
  // d_k A_ij = d_k d_j u_i is symmetric in (j, k); transform each pair once.
  std::array<std::array<ScalarField, 9>, 3> dd;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = j; k < 3; ++k) {
        auto v = derivative(grad_s(i, j), static_cast<Axis>(k)).to_physical();
        dd[static_cast<std::size_t>(j)][static_cast<std::size_t>(3 * i + k)] = v;
        dd[static_cast<std::size_t>(k)][static_cast<std::size_t>(3 * i + j)] = std::move(v);
      }
    }
  }
  for (int k = 0; k < 3; ++k) jet.dgrad[static_cast<std::size_t>(k)] = TensorField3(dd[static_cast<std::size_t>(k)], false);
  auto sv = decompose(jet.grad);
  jet.strain = std::move(sv.strain);
  jet.vorticity = std::move(sv.vorticity);
  return jet;
}

std::array<double, 3> symmetric_eigenvalues(const std::array<double, 6>& s) {
  const double q = (s[0] + s[3] + s[5]) / 3.0;
  const double d0 = s[0] - q, d1 = s[3] - q, d2 = s[5] - q;
  const double off = s[1] * s[1] + s[2] * s[2] + s[4] * s[4];
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off;
  if (p2 == 0.0) return {q, q, q};
  const double p = std::sqrt(p2 / 6.0);
  // B = (S - qI) / p; r = det(B) / 2
  const double b00 = d0 / p, b11 = d1 / p, b22 = d2 / p;
  const double b01 = s[1] / p, b02 = s[2] / p, b12 = s[4] / p;
  const double det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) + b02 * (b01 * b12 - b11 * b02);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  std::array<double, 3> e{q + 2.0 * p * std::cos(phi), 0.0,
                          q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0)};
  e[1] = 3.0 * q - e[0] - e[2];
  std::stable_sort(e.begin(), e.end(), std::greater<>());
  return e;
}

StrainEigenvalues strain_eigenvalues(const TensorField3& strain) {
  const auto s = strain.to_physical();
  const auto& g = s.grid();
  const std::size_t size = g->physical_size();
  std::array<std::span<const double>, 6> c{s(0, 0).values(), s(0, 1).values(), s(0, 2).values(),
                                           s(1, 1).values(), s(1, 2).values(), s(2, 2).values()};
  RealBuffer a(size), b(size), cc(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto e = symmetric_eigenvalues({c[0][i], c[1][i], c[2][i], c[3][i], c[4][i], c[5][i]});
    a[i] = e[0];
    b[i] = e[1];
    cc[i] = e[2];
  }
  return {ScalarField::from_values(g, std::move(a)), ScalarField::from_values(g, std::move(b)),
          ScalarField::from_values(g, std::move(cc))};
}

EigenvalueSpread variance_P(const StrainEigenvalues& eigs) {
  auto av = eigs.a.values(), bv = eigs.b.values(), cv = eigs.c.values();
  RealBuffer p(av.size()), v(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double ab = av[i] - bv[i], bc = bv[i] - cv[i], ca = cv[i] - av[i];
    p[i] = (ab * ab + bc * bc + ca * ca) / 3.0;
    v[i] = (av[i] * av[i] + bv[i] * bv[i] + cv[i] * cv[i]) / 3.0;
  }
  return {ScalarField::from_values(eigs.a.grid(), std::move(p)), ScalarField::from_values(eigs.a.grid(), std::move(v))};
}

namespace {

ScalarField sum_of_squares(const TensorField3& t) { return contract(t, t); }

ScalarField cubic_trace(const TensorField3& a) {
  const auto a2 = matmul(a, a);
  return contract(a2, a.transpose());
}

}  // namespace

InvariantFields invariants(const VelocityJet& jet) {
  InvariantFields out;
  out.trA2 = contract(jet.grad, jet.grad.transpose());
  out.trA3 = cubic_trace(jet.grad);
  out.trS2 = sum_of_squares(jet.strain);
  out.trS3 = cubic_trace(jet.strain);
  out.enstrophy = norm_squared(jet.vorticity);
  out.omega_S_omega = dot(jet.vorticity, apply(jet.strain, jet.vorticity));
  ScalarField gs = sum_of_squares(jet.strain_derivative(0));
  gs += sum_of_squares(jet.strain_derivative(1));
  gs += sum_of_squares(jet.strain_derivative(2));
  out.grad_S_sq = std::move(gs);
  out.grad_omega_sq = sum_of_squares(jet.vorticity_gradient());
  out.variance_P = variance_P(strain_eigenvalues(jet.strain)).P;
  return out;
}

InvariantFields invariants(const VectorField& u) { return invariants(velocity_jet(u)); }

double mean_helicity(const VectorField& u) {
  require_solenoidal(u);
  double s = 0.0;
  const auto h = dot(u.to_physical(), curl(u).to_physical());
  for (double v : h.values()) s += v;
  return s / static_cast<double>(h.values().size());
}

}  // namespace vxl
