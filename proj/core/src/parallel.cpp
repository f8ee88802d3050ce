#include "starprod/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace starprod {

namespace {
std::atomic<int> g_override{0};

int env_threads() {
  if (const char* s = std::getenv("STARPROD_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace

int thread_count() {
  const int o = g_override.load();
  return o > 0 ? o : env_threads();
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace starprod
