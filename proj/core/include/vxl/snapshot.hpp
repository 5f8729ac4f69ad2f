#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "vxl/fields.hpp"

namespace vxl {

/// Field-kind tag of a VXL1 snapshot; the value is the component count.
enum class FieldKind : std::uint8_t { scalar = 1, vector = 3, tensor = 9 };

/// VXL1 binary snapshot.
///
/// Layout (little-endian, packed, 33-byte header):
///   char[4] "VXL1" | u32 n | f64 box_length | f64 time | f64 viscosity | u8 kind
/// followed by n^3 f64 physical values per component, x fastest, components
/// concatenated.
struct Snapshot {
  double time = 0.0;
  double viscosity = 0.0;
  FieldKind kind = FieldKind::vector;
  std::vector<ScalarField> components;

  GridPtr grid() const { return components.at(0).grid(); }
  VectorField as_vector() const;
};

inline constexpr std::size_t kSnapshotHeaderBytes = 33;

void write_snapshot(std::ostream& out, const Snapshot& snapshot);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

Snapshot make_snapshot(const VectorField& v, double time, double viscosity);
Snapshot make_snapshot(const ScalarField& f, double time, double viscosity);

}  // namespace vxl
