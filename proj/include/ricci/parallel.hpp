#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ricci {

// Worker count for parallel maps. Honors the RICCI_THREADS environment
// variable as an upper bound; defaults to hardware concurrency.
inline int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("RICCI_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

// Apply fn(i) for i in [0, n). Each index writes its own output slot, so the
// result is deterministic regardless of scheduling. Exceptions from workers
// are rethrown on the calling thread (first one wins by thread order).
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    int workers = worker_count();
    if (workers <= 1 || n < 256) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = n;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int lo = w * chunk;
        int hi = std::min(n, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace ricci
