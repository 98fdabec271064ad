#ifndef QS3_PAR_HPP
#define QS3_PAR_HPP

#include <cstddef>

namespace qs3::par {

// Thread count for the component-table kernels. 1 = serial reference path,
// 0 = library default (all hardware threads). The serial path is the
// reference the parallel one is tested and benchmarked against; results are
// identical by construction because every loop iteration writes only its
// own slot.
void set_threads(int n);
int threads();

// True when the next for_each_index call would actually fan out.
bool parallel_enabled();

namespace detail {
void run_omp(std::size_t n, void* ctx, void (*body)(void*, std::size_t));
}

// Applies fn(i) for i in [0, n). fn must be pure up to writing slot i.
template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn) {
    if (!parallel_enabled() || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    auto thunk = [](void* ctx, std::size_t i) { (*static_cast<Fn*>(ctx))(i); };
    detail::run_omp(n, &fn, thunk);
}

}  // namespace qs3::par

#endif
