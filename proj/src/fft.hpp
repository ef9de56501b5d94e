#pragma once

// Thin RAII layer over FFTW's complex multidimensional transform.
// Planning is serialized (FFTW planners are not thread-safe); execution on
// fresh fftw_malloc'd buffers is safe from any thread.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace exset::detail {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

using ComplexBuffer = std::unique_ptr<std::complex<double>[], FftwFree>;

ComplexBuffer allocate_complex(std::size_t n);

class FftPlan {
 public:
  /// Forward (sign = -1) transform over a row-major array of shape `dims`.
  explicit FftPlan(const std::vector<std::size_t>& dims);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const noexcept { return size_; }
  /// In-place transform of a buffer from allocate_complex(size()).
  void execute(std::complex<double>* data) const;

 private:
  fftw_plan plan_ = nullptr;
  std::size_t size_ = 0;
};

}  // namespace exset::detail
