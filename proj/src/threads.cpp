#include "phasefield/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pf {

int worker_count() {
    static const int n = [] {
        const char* env = std::getenv("PHASEFIELD_THREADS");
        if (!env) return 1;
        const int v = std::atoi(env);
        if (v < 1) return 1;
        const int hw = static_cast<int>(std::thread::hardware_concurrency());
        return hw > 0 ? std::min(v, hw) : v;
    }();
    return n;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = worker_count();
    if (workers <= 1 || n < 2 * workers) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) break;
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace pf
