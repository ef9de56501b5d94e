#include "fft.hpp"

#include <mutex>
#include <new>

namespace exset::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

ComplexBuffer allocate_complex(std::size_t n) {
  auto* p = static_cast<std::complex<double>*>(fftw_malloc(sizeof(std::complex<double>) * n));
  if (p == nullptr) throw std::bad_alloc();
  return ComplexBuffer(p);
}

FftPlan::FftPlan(const std::vector<std::size_t>& dims) {
  std::vector<int> n(dims.begin(), dims.end());
  size_ = 1;
  for (auto d : dims) size_ *= d;
  auto scratch = allocate_complex(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.get());
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, FFTW_FORWARD,
                        FFTW_ESTIMATE);
  if (plan_ == nullptr) throw std::bad_alloc();
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan_);
}

void FftPlan::execute(std::complex<double>* data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan_, buf, buf);
}

}  // namespace exset::detail
