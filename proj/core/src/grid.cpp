#include "vxl/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "vxl/errors.hpp"

namespace vxl {

namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads_locked() {
  static bool initialized = false;
  if (!initialized) {
    fftw_init_threads();
    initialized = true;
  }
}

bool fftw_aligned(const void* p) {
  return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0;
}

}  // namespace

int thread_count() {
  static const int count = [] {
    if (const char* env = std::getenv("VXL_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 1;
  }();
  return count;
}

struct Grid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

Grid::Grid(int n, double box_length)
    : n_(n),
      box_length_(box_length),
      physical_size_(static_cast<std::size_t>(n) * n * n),
      spectral_size_(static_cast<std::size_t>(n) * n * (n / 2 + 1)) {
  const double k0 = fundamental();
  kx_.resize(half_n());
  ky_.resize(n);
  kz_.resize(n);
  for (int i = 0; i < half_n(); ++i) kx_[i] = is_nyquist(i) ? 0.0 : k0 * mode(Axis::x, i);
  for (int i = 0; i < n; ++i) {
    ky_[i] = is_nyquist(i) ? 0.0 : k0 * mode(Axis::y, i);
    kz_[i] = ky_[i];
  }

  k_squared_.resize(spectral_size_);
  mask_.resize(spectral_size_);
  auto kept = [n](int m) { return 3 * std::abs(m) < n; };
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < half_n(); ++ix) {
        const std::size_t idx = spectral_index(ix, iy, iz);
        k_squared_[idx] = kx_[ix] * kx_[ix] + ky_[iy] * ky_[iy] + kz_[iz] * kz_[iz];
        mask_[idx] = kept(mode(Axis::x, ix)) && kept(mode(Axis::y, iy)) && kept(mode(Axis::z, iz));
      }
    }
  }

  plans_ = std::make_unique<Plans>();
  std::lock_guard lock(planner_mutex());
  init_fftw_threads_locked();
  fftw_plan_with_nthreads(thread_count());
  double* real = fftw_alloc_real(physical_size_);
  fftw_complex* cplx = fftw_alloc_complex(spectral_size_);
  plans_->forward = fftw_plan_dft_r2c_3d(n, n, n, real, cplx, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_3d(n, n, n, cplx, real, FFTW_ESTIMATE);
  fftw_free(real);
  fftw_free(cplx);
  if (!plans_->forward || !plans_->inverse) {
    throw std::runtime_error("FFTW planning failed for n = " + std::to_string(n));
  }
}

Grid::~Grid() = default;

std::shared_ptr<const Grid> Grid::create(int n, double box_length) {
  if (n < 8 || n % 2 != 0) {
    throw InvalidArgument("grid size must be even and >= 8, got " + std::to_string(n));
  }
  if (!(box_length > 0.0)) {
    throw InvalidArgument("box length must be positive");
  }
  static std::mutex cache_mutex;
  static std::map<std::pair<int, double>, std::weak_ptr<const Grid>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{n, box_length}];
  if (auto existing = slot.lock()) return existing;
  std::shared_ptr<const Grid> grid(new Grid(n, box_length));
  slot = grid;
  return grid;
}

std::span<const double> Grid::derivative_wavenumbers(Axis axis) const noexcept {
  switch (axis) {
    case Axis::x:
      return kx_;
    case Axis::y:
      return ky_;
    case Axis::z:
      return kz_;
  }
  return {};
}

void Grid::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != physical_size_ || out.size() != spectral_size_) {
    throw GridMismatch("forward transform: buffer size does not match grid");
  }
  const double scale = 1.0 / static_cast<double>(physical_size_);
  if (fftw_aligned(in.data()) && fftw_aligned(out.data())) {
    fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
  } else {
    RealBuffer tmp_in(in.begin(), in.end());
    ComplexBuffer tmp_out(spectral_size_);
    fftw_execute_dft_r2c(plans_->forward, tmp_in.data(), reinterpret_cast<fftw_complex*>(tmp_out.data()));
    std::copy(tmp_out.begin(), tmp_out.end(), out.begin());
  }
  for (auto& c : out) c *= scale;
}

void Grid::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != spectral_size_ || out.size() != physical_size_) {
    throw GridMismatch("inverse transform: buffer size does not match grid");
  }
  // c2r overwrites its input.
  ComplexBuffer scratch(in.begin(), in.end());
  if (fftw_aligned(out.data())) {
    fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  } else {
    RealBuffer tmp(physical_size_);
    fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()), tmp.data());
    std::copy(tmp.begin(), tmp.end(), out.begin());
  }
}

std::shared_ptr<const Grid> Grid::refined(int factor) const {
  if (factor < 1) throw InvalidArgument("refinement factor must be >= 1");
  return create(n_ * factor, box_length_);
}

}  // namespace vxl
