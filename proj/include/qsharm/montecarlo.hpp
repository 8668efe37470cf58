#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qsharm {

// Worker count: QS_THREADS if set, else hardware concurrency.
inline unsigned worker_count()
{
    if (const char* s = std::getenv("QS_THREADS")) {
        try {
            long v = std::stol(s);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string("QS_THREADS: expected a positive integer, got '") + s + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct McEstimate {
    double estimate = 0;
    double stderr_ = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

inline constexpr std::size_t mc_batch_size = 1u << 16;

// Mean of f(rng) over `samples` draws. Batch b uses its own generator seeded
// with seed + b and batches are reduced in index order, so the result does not
// depend on the number of workers.
template <class F>
McEstimate mc_mean(std::size_t samples, std::uint64_t seed, F&& f, unsigned threads = 0)
{
    if (samples < 2) throw std::invalid_argument("mc_mean: need at least 2 samples");
    if (threads == 0) threads = worker_count();
    const std::size_t nb = (samples + mc_batch_size - 1) / mc_batch_size;
    std::vector<std::array<double, 2>> acc(nb, {0.0, 0.0});
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t b = next++; b < nb; b = next++) {
            std::mt19937_64 rng(seed + b);
            const std::size_t cnt = std::min(mc_batch_size, samples - b * mc_batch_size);
            double s = 0, s2 = 0;
            for (std::size_t k = 0; k < cnt; ++k) {
                double v = f(rng);
                s += v;
                s2 += v * v;
            }
            acc[b] = {s, s2};
        }
    };
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, nb));
    if (used <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < used; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    double s = 0, s2 = 0;
    for (const auto& a : acc) {
        s += a[0];
        s2 += a[1];
    }
    const double nn = static_cast<double>(samples);
    const double mean = s / nn;
    const double var = std::max(0.0, (s2 / nn - mean * mean) * nn / (nn - 1));
    return {mean, std::sqrt(var / nn), samples, seed, used};
}

// First quaternion coordinate u = x_1 of a uniform point on S^{4n-1}:
// |u|^2 ~ Beta(2, 2n-2), direction uniform on S^3.
inline std::array<double, 4> sample_first_block(std::mt19937_64& rng, int n)
{
    if (n < 2) throw std::invalid_argument("sample_first_block: n must be at least 2");
    std::gamma_distribution<double> ga(2.0, 1.0), gb(2.0 * n - 2.0, 1.0);
    std::normal_distribution<double> nd;
    const double x = ga(rng), y = gb(rng);
    const double rad = std::sqrt(x / (x + y));
    std::array<double, 4> u{};
    double nrm = 0;
    do {
        nrm = 0;
        for (auto& v : u) {
            v = nd(rng);
            nrm += v * v;
        }
    } while (nrm == 0);
    nrm = std::sqrt(nrm);
    for (auto& v : u) v *= rad / nrm;
    return u;
}

} // namespace qsharm
