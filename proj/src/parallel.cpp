#include "gfe/parallel.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gfe {

namespace {
int g_threads = 0;
}

void set_thread_count(int threads) {
    g_threads = threads < 0 ? 0 : threads;
#ifdef _OPENMP
    if (g_threads > 0) omp_set_num_threads(g_threads);
#endif
}

int thread_count() {
#ifdef _OPENMP
    return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

void parallel_for_impl(std::size_t n, void* context, void (*body)(void*, std::size_t)) {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < count; ++i) {
        body(context, static_cast<std::size_t>(i));
    }
}

}  // namespace detail

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t block = 32;
    if (values.size() <= block) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate mean_estimate(std::span<const double> values) {
    Estimate e;
    e.count = values.size();
    if (values.empty()) return e;
    const double n = static_cast<double>(values.size());
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        e.mean = values.front();
        return e;
    }
    e.mean = pairwise_sum(values) / n;
    if (values.size() < 2) return e;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - e.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    e.std_error = std::sqrt(var / n);
    return e;
}

}  // namespace gfe
