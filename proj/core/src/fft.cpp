#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace uq::detail {
namespace {

// The FFTW planner is not thread-safe; executing a plan is. Each thread
// caches unaligned out-of-place plans per shape and direction and executes
// them directly on caller buffers through the new-array interface.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanEntry {
  fftw_plan plan = nullptr;
  fftw_complex* scratch_in = nullptr;
  fftw_complex* scratch_out = nullptr;

  PlanEntry() = default;
  PlanEntry(const PlanEntry&) = delete;
  PlanEntry& operator=(const PlanEntry&) = delete;
  PlanEntry(PlanEntry&& o) noexcept { *this = std::move(o); }
  PlanEntry& operator=(PlanEntry&& o) noexcept {
    std::swap(plan, o.plan);
    std::swap(scratch_in, o.scratch_in);
    std::swap(scratch_out, o.scratch_out);
    return *this;
  }
  ~PlanEntry() {
    if (plan) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    if (scratch_in) fftw_free(scratch_in);
    if (scratch_out) fftw_free(scratch_out);
  }
};

using PlanKey = std::tuple<std::size_t, std::size_t, int>;

PlanEntry make_plan(std::size_t h, std::size_t w, int sign) {
  PlanEntry e;
  e.scratch_in = fftw_alloc_complex(h * w);
  e.scratch_out = fftw_alloc_complex(h * w);
  std::lock_guard<std::mutex> lock(planner_mutex());
  e.plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w),
                            e.scratch_in, e.scratch_out, sign, FFTW_ESTIMATE);
  return e;
}

}  // namespace

void fft2(std::size_t height, std::size_t width, const std::complex<double>* in,
          std::complex<double>* out, FftDir dir) {
  const int sign = (dir == FftDir::Forward) ? FFTW_FORWARD : FFTW_BACKWARD;
  thread_local std::map<PlanKey, PlanEntry> cache;
  PlanKey key{height, width, sign};
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, make_plan(height, width, sign)).first;
  }
  PlanEntry& e = it->second;

  // std::complex<double> and fftw_complex share layout.
  auto* in_c = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
  auto* out_c = reinterpret_cast<fftw_complex*>(out);

  // The new-array execute path needs the caller buffers distinct and with
  // the alignment the plan was created for; otherwise stage through the
  // plan's own buffers.
  const bool aligned = fftw_alignment_of(reinterpret_cast<double*>(in_c)) ==
                           fftw_alignment_of(reinterpret_cast<double*>(e.scratch_in)) &&
                       fftw_alignment_of(reinterpret_cast<double*>(out_c)) ==
                           fftw_alignment_of(reinterpret_cast<double*>(e.scratch_out));
  if (in != out && aligned) {
    fftw_execute_dft(e.plan, in_c, out_c);
    return;
  }
  std::memcpy(e.scratch_in, in_c, height * width * sizeof(fftw_complex));
  fftw_execute(e.plan);
  std::memcpy(out_c, e.scratch_out, height * width * sizeof(fftw_complex));
}

}  // namespace uq::detail
