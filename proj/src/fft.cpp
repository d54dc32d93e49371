#include "shom/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "shom/errors.hpp"

namespace shom {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(const std::vector<int>& shape, int sign) {
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mutex);
  auto key = std::make_pair(shape, sign);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  std::vector<cplx> scratch(total);
  // FFTW takes the slowest axis first; the layout is x-fastest.
  std::vector<int> dims(shape.rbegin(), shape.rend());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw SpectralError("FFTW plan creation failed");
  c.plans.emplace(key, p);
  return p;
}

void execute(std::vector<cplx>& data, const std::vector<int>& shape, int sign) {
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  if (total != data.size()) throw InvalidArgument("fft: data size does not match shape");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(shape, sign), buf, buf);
}

}  // namespace

void fft_forward(std::vector<cplx>& data, const std::vector<int>& shape) {
  execute(data, shape, FFTW_FORWARD);
}

void fft_inverse(std::vector<cplx>& data, const std::vector<int>& shape) {
  execute(data, shape, FFTW_BACKWARD);
}

}  // namespace shom
