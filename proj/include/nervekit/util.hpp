#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

namespace nervekit {

// Deterministic RNG wrapper.  std::uniform_*_distribution is
// implementation-defined, so draws are derived from raw mt19937_64 output to
// keep results identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, n), n >= 1.  Modulo bias is irrelevant at our sizes and
    // keeps the stream platform-stable.
    std::size_t next_index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_index(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

inline std::vector<int> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    return order;
}

namespace detail {

inline unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NERVEKIT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

}  // namespace detail

// Splits [0, n) into a fixed number of chunks and runs body(chunk, begin, end)
// on a capped worker pool.  The chunk count is independent of the thread
// count, so per-chunk partial results merged in chunk order give reductions
// that do not depend on NERVEKIT_THREADS.
inline void parallel_chunks(std::size_t n, std::size_t n_chunks,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    n_chunks = std::max<std::size_t>(1, std::min(n_chunks, n));
    unsigned workers = std::min<unsigned>(detail::thread_cap(), static_cast<unsigned>(n_chunks));
    std::size_t per = (n + n_chunks - 1) / n_chunks;
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            std::size_t b = c * per, e = std::min(n, b + per);
            if (b < e) body(c, b, e);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                std::size_t b = c * per, e = std::min(n, b + per);
                if (b < e) body(c, b, e);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace nervekit
