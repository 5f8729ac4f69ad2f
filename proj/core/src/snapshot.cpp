#include "vxl/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "vxl/errors.hpp"

namespace vxl {

namespace {

constexpr std::array<char, 4> kMagic{'V', 'X', 'L', '1'};

template <class U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

template <class U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("snapshot truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

VectorField Snapshot::as_vector() const {
  if (kind != FieldKind::vector || components.size() != 3) throw FormatError("snapshot does not hold a vector field");
  return {components[0], components[1], components[2]};
}

void write_snapshot(std::ostream& out, const Snapshot& s) {
  if (s.components.size() != static_cast<std::size_t>(s.kind)) {
    throw InvalidArgument("snapshot component count does not match its kind");
  }
  const Grid& g = s.components[0].grid_ref();
  out.write(kMagic.data(), kMagic.size());
  put_le(out, static_cast<std::uint32_t>(g.n()));
  put_f64(out, g.box_length());
  put_f64(out, s.time);
  put_f64(out, s.viscosity);
  put_le(out, static_cast<std::uint8_t>(s.kind));
  for (const auto& c : s.components) {
    require_same_grid(s.components[0], c);
    const auto p = c.to_physical();
    for (double v : p.values()) put_f64(out, v);
  }
  if (!out) throw FormatError("failed writing snapshot");
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_snapshot(out, snapshot);
}

Snapshot read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("not a VXL1 snapshot");
  const auto n = get_le<std::uint32_t>(in);
  const double box = get_f64(in);
  Snapshot s;
  s.time = get_f64(in);
  s.viscosity = get_f64(in);
  const auto tag = get_le<std::uint8_t>(in);
  if (tag != 1 && tag != 3 && tag != 9) throw FormatError("unknown field kind " + std::to_string(tag));
  s.kind = static_cast<FieldKind>(tag);
  if (n > 4096) throw FormatError("implausible grid size " + std::to_string(n));
  GridPtr grid = Grid::create(static_cast<int>(n), box);
  for (int c = 0; c < tag; ++c) {
    RealBuffer v(grid->physical_size());
    for (auto& x : v) x = get_f64(in);
    s.components.push_back(ScalarField::from_values(grid, std::move(v)));
  }
  return s;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_snapshot(in);
}

Snapshot make_snapshot(const VectorField& v, double time, double viscosity) {
  return {time, viscosity, FieldKind::vector, {v[0], v[1], v[2]}};
}

Snapshot make_snapshot(const ScalarField& f, double time, double viscosity) {
  return {time, viscosity, FieldKind::scalar, {f}};
}

}  // namespace vxl
