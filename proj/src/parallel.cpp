#include "skglass/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace skglass {

int resolve_worker_count(int requested) {
    if (requested >= 1) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(static_cast<int>(hw), 1, 32);
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
    if (count <= 0) return;
    workers = std::min(resolve_worker_count(workers), count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto run = [&] {
        for (;;) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();

    if (first_error) std::rethrow_exception(first_error);
}

} // namespace skglass
