#include "vxl/fields.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "vxl/errors.hpp"

namespace vxl {

ScalarField::ScalarField(GridPtr grid, Representation rep, RealBuffer values, ComplexBuffer coefficients)
    : grid_(std::move(grid)), rep_(rep), values_(std::move(values)), coefficients_(std::move(coefficients)) {}

ScalarField ScalarField::zeros(GridPtr grid, Representation rep) {
  if (!grid) throw InvalidArgument("null grid");
  if (rep == Representation::physical) {
    const auto size = grid->physical_size();
    return ScalarField(std::move(grid), rep, RealBuffer(size, 0.0), {});
  }
  const auto size = grid->spectral_size();
  return ScalarField(std::move(grid), rep, {}, ComplexBuffer(size, Complex{}));
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
  const auto size = grid->physical_size();
  return ScalarField(std::move(grid), Representation::physical, RealBuffer(size, value), {});
}

ScalarField ScalarField::from_values(GridPtr grid, RealBuffer values) {
  if (!grid) throw InvalidArgument("null grid");
  if (values.size() != grid->physical_size()) throw GridMismatch("value buffer size does not match grid");
  return ScalarField(std::move(grid), Representation::physical, std::move(values), {});
}

ScalarField ScalarField::from_coefficients(GridPtr grid, ComplexBuffer coefficients) {
  if (!grid) throw InvalidArgument("null grid");
  if (coefficients.size() != grid->spectral_size()) {
    throw GridMismatch("coefficient buffer size does not match grid");
  }
  return ScalarField(std::move(grid), Representation::spectral, {}, std::move(coefficients));
}

ScalarField ScalarField::sample(GridPtr grid, const std::function<double(double, double, double)>& f) {
  const int n = grid->n();
  RealBuffer v(grid->physical_size());
  for (int z = 0; z < n; ++z) {
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        v[grid->physical_index(x, y, z)] = f(grid->coordinate(x), grid->coordinate(y), grid->coordinate(z));
      }
    }
  }
  return from_values(std::move(grid), std::move(v));
}

std::span<const double> ScalarField::values() const {
  if (rep_ != Representation::physical) throw InvalidArgument("field is not in physical representation");
  return values_;
}

std::span<const Complex> ScalarField::coefficients() const {
  if (rep_ != Representation::spectral) throw InvalidArgument("field is not in spectral representation");
  return coefficients_;
}

ScalarField ScalarField::to(Representation rep) const {
  if (rep == rep_) return *this;
  if (rep == Representation::spectral) {
    ComplexBuffer out(grid_->spectral_size());
    grid_->forward(values_, out);
    return ScalarField(grid_, rep, {}, std::move(out));
  }
  RealBuffer out(grid_->physical_size());
  grid_->inverse(coefficients_, out);
  return ScalarField(grid_, rep, std::move(out), {});
}

ScalarField transform(const ScalarField& field, Representation target) {
  if (field.representation() == target) {
    throw InvalidArgument("transform: field already in target representation");
  }
  return field.to(target);
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.empty() || b.empty() || !a.grid_ref().same_as(b.grid_ref())) {
    throw GridMismatch("fields live on different grids");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  if (rep_ == Representation::physical) {
    const auto o = other.to_physical();
    auto ov = o.values();
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += ov[i];
  } else {
    const auto o = other.to_spectral();
    auto oc = o.coefficients();
    for (std::size_t i = 0; i < coefficients_.size(); ++i) coefficients_[i] += oc[i];
  }
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  if (rep_ == Representation::physical) {
    const auto o = other.to_physical();
    auto ov = o.values();
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= ov[i];
  } else {
    const auto o = other.to_spectral();
    auto oc = o.coefficients();
    for (std::size_t i = 0; i < coefficients_.size(); ++i) coefficients_[i] -= oc[i];
  }
  return *this;
}

ScalarField& ScalarField::operator*=(double factor) {
  for (auto& v : values_) v *= factor;
  for (auto& c : coefficients_) c *= factor;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double factor) { return a *= factor; }
ScalarField operator*(double factor, ScalarField a) { return a *= factor; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  const auto pa = a.to_physical();
  const auto pb = b.to_physical();
  auto va = pa.values();
  auto vb = pb.values();
  RealBuffer out(va.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * vb[i];
  return ScalarField::from_values(a.grid(), std::move(out));
}

ScalarField map(const ScalarField& a, const std::function<double(double)>& f) {
  const auto pa = a.to_physical();
  auto va = pa.values();
  RealBuffer out(va.size());
  std::transform(va.begin(), va.end(), out.begin(), f);
  return ScalarField::from_values(a.grid(), std::move(out));
}

// ---------------------------------------------------------------------------

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z) : c_{std::move(x), std::move(y), std::move(z)} {
  require_same_grid(c_[0], c_[1]);
  require_same_grid(c_[0], c_[2]);
  if (c_[0].representation() != c_[1].representation() || c_[0].representation() != c_[2].representation()) {
    // Components must share a representation.
    for (auto& c : c_) c = c.to(c_[0].representation());
  }
}

VectorField VectorField::zeros(GridPtr grid, Representation rep) {
  return {ScalarField::zeros(grid, rep), ScalarField::zeros(grid, rep), ScalarField::zeros(grid, rep)};
}

VectorField VectorField::sample(GridPtr grid,
                                const std::function<std::array<double, 3>(double, double, double)>& f) {
  const int n = grid->n();
  std::array<RealBuffer, 3> v;
  for (auto& b : v) b.resize(grid->physical_size());
  for (int z = 0; z < n; ++z) {
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const auto idx = grid->physical_index(x, y, z);
        const auto w = f(grid->coordinate(x), grid->coordinate(y), grid->coordinate(z));
        for (int c = 0; c < 3; ++c) v[c][idx] = w[c];
      }
    }
  }
  return {ScalarField::from_values(grid, std::move(v[0])), ScalarField::from_values(grid, std::move(v[1])),
          ScalarField::from_values(grid, std::move(v[2]))};
}

VectorField VectorField::to(Representation rep) const { return {c_[0].to(rep), c_[1].to(rep), c_[2].to(rep)}; }

VectorField& VectorField::operator+=(const VectorField& other) {
  for (int i = 0; i < 3; ++i) c_[i] += other[i];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& other) {
  for (int i = 0; i < 3; ++i) c_[i] -= other[i];
  return *this;
}
VectorField& VectorField::operator*=(double factor) {
  for (auto& c : c_) c *= factor;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(VectorField a, double factor) { return a *= factor; }
VectorField operator*(double factor, VectorField a) { return a *= factor; }
VectorField operator*(const ScalarField& s, const VectorField& v) { return {s * v[0], s * v[1], s * v[2]}; }

ScalarField dot(const VectorField& a, const VectorField& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

VectorField cross(const VectorField& a, const VectorField& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

ScalarField norm_squared(const VectorField& a) { return dot(a, a); }

VectorField transform(const VectorField& field, Representation target) {
  return {transform(field[0], target), transform(field[1], target), transform(field[2], target)};
}

// ---------------------------------------------------------------------------

TensorField3::TensorField3(std::array<ScalarField, 9> components, bool symmetric)
    : c_(std::move(components)), symmetric_(symmetric) {
  for (std::size_t i = 1; i < 9; ++i) require_same_grid(c_[0], c_[i]);
  if (symmetric_) {
    c_[3] = c_[1];
    c_[6] = c_[2];
    c_[7] = c_[5];
  }
}

TensorField3 TensorField3::zeros(GridPtr grid, bool symmetric) {
  std::array<ScalarField, 9> c;
  for (auto& s : c) s = ScalarField::zeros(grid);
  return TensorField3(std::move(c), symmetric);
}

TensorField3 TensorField3::symmetric_from(std::array<ScalarField, 6> u) {
  return TensorField3({u[0], u[1], u[2], u[1], u[3], u[4], u[2], u[4], u[5]}, true);
}

TensorField3 TensorField3::to(Representation rep) const {
  std::array<ScalarField, 9> c;
  for (std::size_t i = 0; i < 9; ++i) c[i] = c_[i].to(rep);
  return TensorField3(std::move(c), symmetric_);
}

TensorField3 TensorField3::transpose() const {
  std::array<ScalarField, 9> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[static_cast<std::size_t>(3 * i + j)] = (*this)(j, i);
  return TensorField3(std::move(c), symmetric_);
}

TensorField3 operator+(const TensorField3& a, const TensorField3& b) {
  std::array<ScalarField, 9> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[static_cast<std::size_t>(3 * i + j)] = a(i, j) + b(i, j);
  return TensorField3(std::move(c), a.symmetric() && b.symmetric());
}

TensorField3 operator-(const TensorField3& a, const TensorField3& b) {
  std::array<ScalarField, 9> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[static_cast<std::size_t>(3 * i + j)] = a(i, j) - b(i, j);
  return TensorField3(std::move(c), a.symmetric() && b.symmetric());
}

TensorField3 operator*(const TensorField3& a, double factor) {
  std::array<ScalarField, 9> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[static_cast<std::size_t>(3 * i + j)] = a(i, j) * factor;
  return TensorField3(std::move(c), a.symmetric());
}

TensorField3 matmul(const TensorField3& a, const TensorField3& b) {
  std::array<ScalarField, 9> c;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ScalarField s = a(i, 0) * b(0, j);
      s += a(i, 1) * b(1, j);
      s += a(i, 2) * b(2, j);
      c[static_cast<std::size_t>(3 * i + j)] = std::move(s);
    }
  }
  return TensorField3(std::move(c), false);
}

VectorField apply(const TensorField3& a, const VectorField& v) {
  std::array<ScalarField, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
  return {out[0], out[1], out[2]};
}

ScalarField contract(const TensorField3& a, const TensorField3& b) {
  ScalarField s = a(0, 0) * b(0, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 0 || j != 0) s += a(i, j) * b(i, j);
  return s;
}

ScalarField trace(const TensorField3& a) { return a(0, 0).to_physical() + a(1, 1) + a(2, 2); }

double sup_norm(const ScalarField& f) {
  const auto p = f.to_physical();
  double m = 0.0;
  for (double v : p.values()) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm(const VectorField& v) { return std::max({sup_norm(v[0]), sup_norm(v[1]), sup_norm(v[2])}); }

double sup_norm(const TensorField3& t) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, sup_norm(t(i, j)));
  return m;
}

double rms(const ScalarField& f) {
  const auto p = f.to_physical();
  double s = 0.0;
  for (double v : p.values()) s += v * v;
  return std::sqrt(s / static_cast<double>(p.values().size()));
}

}  // namespace vxl
