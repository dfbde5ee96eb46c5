#ifndef HYPERRADON_PARALLEL_HPP
#define HYPERRADON_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace hyperradon {

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once and results are written by index, so the outcome is
/// independent of scheduling. The first exception (lowest index) is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn)
{
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace hyperradon

#endif // HYPERRADON_PARALLEL_HPP
