#pragma once

#include <cstddef>
#include <functional>

namespace starprod {

// Thread cap: STARPROD_THREADS if set and positive, else hardware concurrency.
int thread_count();
void set_thread_count(int n);  // 0 restores the environment default

// Runs body(i) for i in [0, n).  Each index must write only its own output so
// results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace starprod
