#include "qsvm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qsvm {

namespace {

std::atomic<std::size_t> g_override{0};
thread_local bool t_inside_region = false;

std::size_t from_environment() {
    const char *raw = std::getenv("QSVM_LAB_THREADS");
    if (raw != nullptr && *raw != '\0') {
        try {
            const long value = std::stol(raw);
            if (value > 0) {
                return static_cast<std::size_t>(value);
            }
        } catch (const std::exception &) {
            // unparsable values fall back to auto
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

} // namespace

std::size_t worker_count() {
    const std::size_t forced = g_override.load();
    return forced > 0 ? forced : from_environment();
}

void set_worker_count(std::size_t workers) { g_override.store(workers); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1 || t_inside_region) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        t_inside_region = true;
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = n;
            }
        }
        t_inside_region = false;
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) {
            pool.emplace_back(run);
        }
        run();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace qsvm
