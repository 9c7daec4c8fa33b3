// parallel.hpp - a small deterministic parallel-for: the index space is split
// into ordered chunks, workers fill pre-indexed result slots, and the merge
// walks the slots in order regardless of scheduling.
#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace flagval {

inline int resolve_jobs(int requested) {
    if (const char* env = std::getenv("FLAGVAL_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// fn(chunk_index, begin, end) runs on [begin, end); chunk results must go
// into slots indexed by chunk_index
inline void parallel_chunks(long long total, int jobs,
                            const std::function<void(int, long long, long long)>& fn,
                            int chunks_per_job = 8) {
    if (total <= 0) return;
    int nchunks = std::max(1, jobs * chunks_per_job);
    long long step = (total + nchunks - 1) / nchunks;
    std::vector<std::pair<long long, long long>> ranges;
    for (long long b = 0; b < total; b += step) ranges.emplace_back(b, std::min(total, b + step));
    if (jobs <= 1) {
        for (size_t i = 0; i < ranges.size(); ++i) fn(static_cast<int>(i), ranges[i].first, ranges[i].second);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t)
        threads.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= ranges.size()) return;
                fn(static_cast<int>(i), ranges[i].first, ranges[i].second);
            }
        });
    for (auto& th : threads) th.join();
}

} // namespace flagval
