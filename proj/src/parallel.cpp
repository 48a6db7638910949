#include "nzsdg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace nzsdg {

namespace {

std::atomic<unsigned> configured_threads{0};

unsigned from_environment() {
    if (const char* value = std::getenv("NZSDG_THREADS")) {
        try {
            const long parsed = std::stol(value);
            if (parsed > 0) return static_cast<unsigned>(parsed);
        } catch (const std::exception&) {
            // fall through to auto
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void set_thread_count(unsigned count) { configured_threads = count; }

unsigned thread_count() {
    const unsigned configured = configured_threads;
    return configured > 0 ? configured : from_environment();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& thread : pool) thread.join();
    for (auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
}

}  // namespace nzsdg
