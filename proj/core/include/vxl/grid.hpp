#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <numbers>
#include <span>
#include <vector>

namespace vxl {

using Complex = std::complex<double>;

/// 64-byte aligned allocator so field buffers can be handed straight to FFTW.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    return static_cast<T*>(::operator new(count * sizeof(T), alignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using RealBuffer = std::vector<double, AlignedAllocator<double>>;
using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

enum class Axis : int { x = 0, y = 1, z = 2 };

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Number of threads the library may use (VXL_THREADS, default 1).
int thread_count();

/// Periodic cubic box with n points per axis.
///
/// Physical data is stored x-fastest: index = x + n*(y + n*z). Spectral data
/// is the FFTW real-to-complex half spectrum with the x axis halved:
/// index = kx + (n/2+1)*(ky + n*kz). Spectral coefficients are normalized so
/// that a constant field c has coefficient c at k = 0.
///
/// Grids are immutable and shared; `create` returns a cached instance for
/// repeated (n, box_length) pairs.
class Grid {
 public:
  static std::shared_ptr<const Grid> create(int n, double box_length = kTwoPi);

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  ~Grid();

  int n() const noexcept { return n_; }
  int half_n() const noexcept { return n_ / 2 + 1; }
  double box_length() const noexcept { return box_length_; }
  double spacing() const noexcept { return box_length_ / n_; }
  double cell_volume() const noexcept {
    const double h = spacing();
    return h * h * h;
  }
  /// 2*pi / box_length.
  double fundamental() const noexcept { return kTwoPi / box_length_; }

  std::size_t physical_size() const noexcept { return physical_size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }

  std::size_t physical_index(int x, int y, int z) const noexcept {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(n_) * (static_cast<std::size_t>(y) +
                                           static_cast<std::size_t>(n_) * static_cast<std::size_t>(z));
  }
  std::size_t spectral_index(int kx, int ky, int kz) const noexcept {
    return static_cast<std::size_t>(kx) +
           static_cast<std::size_t>(half_n()) *
               (static_cast<std::size_t>(ky) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(kz));
  }

  /// Coordinate of grid point i along any axis.
  double coordinate(int i) const noexcept { return spacing() * i; }

  /// Signed integer mode of storage index `index` along `axis`.
  int mode(Axis axis, int index) const noexcept {
    if (axis == Axis::x) return index;
    return index <= n_ / 2 ? index : index - n_;
  }
  bool is_nyquist(int index) const noexcept { return index == n_ / 2; }

  /// Per-axis wavenumbers (scaled by 2*pi/box_length) with the Nyquist entry
  /// set to zero. Size n/2+1 for x, n for y and z.
  std::span<const double> derivative_wavenumbers(Axis axis) const noexcept;

  /// Sum of squared derivative wavenumbers for every spectral index. The
  /// spectral Laplacian is multiplication by minus this symbol.
  std::span<const double> laplacian_symbol() const noexcept { return k_squared_; }

  /// Two-thirds rule: 1 where every |mode_i| < n/3.
  std::span<const std::uint8_t> dealias_mask() const noexcept { return mask_; }

  /// Weight of spectral index in a full-spectrum sum (1 for kx = 0 and
  /// kx = n/2 planes, 2 otherwise).
  double hermitian_weight(int kx) const noexcept {
    return (kx == 0 || kx == n_ / 2) ? 1.0 : 2.0;
  }

  /// Forward transform; out = (1/n^3) * DFT(in).
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Inverse transform; `in` is not modified.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

  /// Grid with factor*n points on the same box.
  std::shared_ptr<const Grid> refined(int factor) const;

  bool same_as(const Grid& other) const noexcept {
    return n_ == other.n_ && box_length_ == other.box_length_;
  }

 private:
  struct Plans;

  Grid(int n, double box_length);

  int n_;
  double box_length_;
  std::size_t physical_size_;
  std::size_t spectral_size_;
  std::vector<double> kx_, ky_, kz_;
  std::vector<double> k_squared_;
  std::vector<std::uint8_t> mask_;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace vxl
