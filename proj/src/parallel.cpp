#include "shom/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace shom {
namespace {

int threads_from_env() {
  if (const char* env = std::getenv("SHOM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> n{threads_from_env()};
  return n;
}

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int n) { thread_setting().store(n > 0 ? n : 1); }

}  // namespace shom
