#include "qcrit/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qcrit/errors.hpp"

namespace qcrit {

int thread_count() {
    if (const char* env = std::getenv("QCRIT_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n < 1) throw schema_error("QCRIT_THREADS must be a positive integer");
            return n;
        } catch (const schema_error&) {
            throw;
        } catch (...) {
            throw schema_error("QCRIT_THREADS must be a positive integer");
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = thread_count();
    if (n == 0) return;
    if (workers == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    std::mutex err_mutex;

    auto body = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    const int spawn = int(std::min<std::size_t>(std::size_t(workers), n));
    pool.reserve(spawn);
    for (int w = 0; w < spawn; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace qcrit
