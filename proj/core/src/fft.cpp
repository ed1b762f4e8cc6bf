#include "twave/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace twave::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [dims, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
    }
  }

  PlanPair get(const std::array<int, 3>& dims) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(dims); it != plans_.end()) return it->second;

    std::vector<int> rank_dims;
    for (int n : dims)
      if (n > 1) rank_dims.push_back(n);
    if (rank_dims.empty()) rank_dims.push_back(1);

    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);
    auto* buf = fftw_alloc_complex(total);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int rank = static_cast<int>(rank_dims.size());
    PlanPair p;
    p.fwd = fftw_plan_dft(rank, rank_dims.data(), buf, buf, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft(rank, rank_dims.data(), buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!p.fwd || !p.bwd) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(dims, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::array<int, 3>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_complex* as_fftw(std::span<cplx> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

void forward(const std::array<int, 3>& dims, std::span<cplx> data) {
  fftw_execute_dft(cache().get(dims).fwd, as_fftw(data), as_fftw(data));
}

void backward(const std::array<int, 3>& dims, std::span<cplx> data) {
  fftw_execute_dft(cache().get(dims).bwd, as_fftw(data), as_fftw(data));
}

}  // namespace twave::fft
