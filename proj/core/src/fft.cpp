#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace anyon::detail {

namespace {

using Key = std::tuple<int, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int extent, int rank, int axis, int sign) {
    std::lock_guard lock(mutex_);
    const Key key{extent, rank, axis, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // Axes before the transformed pair collapse into one loop dimension,
    // the axes after it into another.
    std::ptrdiff_t inner = 1;
    for (int a = axis + 2; a < rank; ++a) inner *= extent;
    std::ptrdiff_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= extent;

    fftw_iodim64 dims[2] = {
        {extent, inner * extent, inner * extent},
        {extent, inner, inner},
    };
    std::vector<fftw_iodim64> loops;
    if (outer > 1) loops.push_back({outer, inner * extent * extent, inner * extent * extent});
    if (inner > 1) loops.push_back({inner, 1, 1});

    // FFTW_ESTIMATE leaves the buffer untouched, so a one-element dummy is
    // enough; FFTW_UNALIGNED lets the plan run on any caller array.
    fftw_complex dummy[1];
    fftw_plan plan = fftw_plan_guru64_dft(2, dims, static_cast<int>(loops.size()), loops.data(), dummy, dummy,
                                          sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dft_axes(std::complex<double>* data, int extent, int rank, int axis, int sign) {
  fftw_plan plan = cache().get(extent, rank, axis, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

}  // namespace anyon::detail
