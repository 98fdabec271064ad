#include "qs3/par.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qs3::par {

namespace {

int initial_threads() {
    if (const char* env = std::getenv("QS3_THREADS")) {
        int v = std::atoi(env);
        if (v >= 0) return v;
    }
    return 0;
}

std::atomic<int> g_threads{initial_threads()};

}  // namespace

void set_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int threads() {
    int t = g_threads.load();
#ifdef _OPENMP
    if (t == 0) t = omp_get_max_threads();
#else
    if (t == 0) t = 1;
#endif
    return t;
}

bool parallel_enabled() {
#ifdef _OPENMP
    return threads() > 1;
#else
    return false;
#endif
}

namespace detail {

void run_omp(std::size_t n, void* ctx, void (*body)(void*, std::size_t)) {
#ifdef _OPENMP
    // Exceptions must not cross the omp region; remember the first one.
    std::exception_ptr first_error;
    std::mutex error_mutex;
    int nt = threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(ctx, static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    for (std::size_t i = 0; i < n; ++i) body(ctx, i);
#endif
}

}  // namespace detail

}  // namespace qs3::par
