#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace gfe {

/// Selects between the OpenMP kernel and the serial reference loop. Both
/// produce bitwise-identical results: every work item owns its RNG stream and
/// reductions happen afterwards in index order.
enum class Execution { Serial, Parallel };

/// Number of worker threads used by `Execution::Parallel` (0 = runtime default).
void set_thread_count(int threads);
int thread_count();

namespace detail {
void parallel_for_impl(std::size_t n, void* context, void (*body)(void*, std::size_t));
}

template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
    if (exec == Execution::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    using B = std::remove_reference_t<Body>;
    detail::parallel_for_impl(n, const_cast<void*>(static_cast<const void*>(&body)),
                              [](void* ctx, std::size_t i) { (*static_cast<B*>(ctx))(i); });
}

/// Evaluates `fn(i)` for i in [0, n) and returns the results in index order.
template <class Fn>
auto map_indices(std::size_t n, Execution exec, Fn&& fn) {
    using R = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<R> out(n);
    for_each_index(n, exec, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

/// Pairwise (cascade) summation in index order; deterministic for a given input.
double pairwise_sum(std::span<const double> values);

/// Sample mean with its standard error.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

Estimate mean_estimate(std::span<const double> values);

}  // namespace gfe
