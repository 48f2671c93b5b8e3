#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace halfharm {

// 0 means "not set": HALFHARM_THREADS, then hardware concurrency
void set_thread_count(int n);
int thread_count();

// fn(i) for i in [0, n); results land in index order so reductions stay deterministic
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace halfharm
