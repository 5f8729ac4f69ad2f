#pragma once

#include <array>
#include <functional>
#include <span>

#include "vxl/grid.hpp"

namespace vxl {

enum class Representation { physical, spectral };

/// Real scalar field on a periodic grid, held either as point values or as
/// Hermitian half-spectrum coefficients. Values are immutable once built;
/// every operation returns a fresh field.
class ScalarField {
 public:
  ScalarField() = default;

  static ScalarField zeros(GridPtr grid, Representation rep = Representation::physical);
  static ScalarField constant(GridPtr grid, double value);
  static ScalarField from_values(GridPtr grid, RealBuffer values);
  static ScalarField from_coefficients(GridPtr grid, ComplexBuffer coefficients);
  /// Samples f(x, y, z) at the grid points.
  static ScalarField sample(GridPtr grid, const std::function<double(double, double, double)>& f);

  const GridPtr& grid() const noexcept { return grid_; }
  const Grid& grid_ref() const noexcept { return *grid_; }
  Representation representation() const noexcept { return rep_; }
  bool is_physical() const noexcept { return rep_ == Representation::physical; }
  bool is_spectral() const noexcept { return rep_ == Representation::spectral; }
  bool empty() const noexcept { return grid_ == nullptr; }

  /// Point values; requires physical representation.
  std::span<const double> values() const;
  /// Spectral coefficients; requires spectral representation.
  std::span<const Complex> coefficients() const;

  /// Converts to the requested representation (no-op copy if already there).
  ScalarField to(Representation rep) const;
  ScalarField to_physical() const { return to(Representation::physical); }
  ScalarField to_spectral() const { return to(Representation::spectral); }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double factor);

 private:
  ScalarField(GridPtr grid, Representation rep, RealBuffer values, ComplexBuffer coefficients);

  GridPtr grid_;
  Representation rep_ = Representation::physical;
  RealBuffer values_;
  ComplexBuffer coefficients_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double factor);
ScalarField operator*(double factor, ScalarField a);
ScalarField operator-(ScalarField a);
/// Pointwise product, evaluated in physical space.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

/// Pointwise map in physical space.
ScalarField map(const ScalarField& a, const std::function<double(double)>& f);

/// Strict transform: throws if the field is already in `target`.
ScalarField transform(const ScalarField& field, Representation target);

void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Three scalar components on one grid.
class VectorField {
 public:
  VectorField() = default;
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  static VectorField zeros(GridPtr grid, Representation rep = Representation::physical);
  static VectorField sample(GridPtr grid, const std::function<std::array<double, 3>(double, double, double)>& f);

  const ScalarField& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const GridPtr& grid() const noexcept { return c_[0].grid(); }
  Representation representation() const noexcept { return c_[0].representation(); }
  bool empty() const noexcept { return c_[0].empty(); }

  VectorField to(Representation rep) const;
  VectorField to_physical() const { return to(Representation::physical); }
  VectorField to_spectral() const { return to(Representation::spectral); }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double factor);

 private:
  std::array<ScalarField, 3> c_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(VectorField a, double factor);
VectorField operator*(double factor, VectorField a);
VectorField operator*(const ScalarField& s, const VectorField& v);
ScalarField dot(const VectorField& a, const VectorField& b);
VectorField cross(const VectorField& a, const VectorField& b);
ScalarField norm_squared(const VectorField& a);
VectorField transform(const VectorField& field, Representation target);

/// Rank-2 tensor field, component (i, j) at index 3*i + j. When flagged
/// symmetric the (i, j) and (j, i) entries hold identical fields.
class TensorField3 {
 public:
  TensorField3() = default;
  TensorField3(std::array<ScalarField, 9> components, bool symmetric);

  static TensorField3 zeros(GridPtr grid, bool symmetric = false);
  /// Builds a symmetric tensor from the upper triangle
  /// (00, 01, 02, 11, 12, 22).
  static TensorField3 symmetric_from(std::array<ScalarField, 6> upper);

  const ScalarField& operator()(int i, int j) const { return c_[static_cast<std::size_t>(3 * i + j)]; }
  bool symmetric() const noexcept { return symmetric_; }
  const GridPtr& grid() const noexcept { return c_[0].grid(); }

  TensorField3 to(Representation rep) const;
  TensorField3 to_physical() const { return to(Representation::physical); }
  TensorField3 transpose() const;

 private:
  std::array<ScalarField, 9> c_;
  bool symmetric_ = false;
};

TensorField3 operator+(const TensorField3& a, const TensorField3& b);
TensorField3 operator-(const TensorField3& a, const TensorField3& b);
TensorField3 operator*(const TensorField3& a, double factor);
/// Pointwise matrix product (A B)_ij = A_ik B_kj.
TensorField3 matmul(const TensorField3& a, const TensorField3& b);
/// Pointwise matrix-vector product.
VectorField apply(const TensorField3& a, const VectorField& v);
/// Full contraction A_ij B_ij.
ScalarField contract(const TensorField3& a, const TensorField3& b);
ScalarField trace(const TensorField3& a);

/// Largest absolute point value.
double sup_norm(const ScalarField& f);
double sup_norm(const VectorField& v);
double sup_norm(const TensorField3& t);
/// Root-mean-square over grid points.
double rms(const ScalarField& f);

}  // namespace vxl
