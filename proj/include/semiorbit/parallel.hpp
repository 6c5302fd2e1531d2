#pragma once

#include <cstdint>
#include <functional>

namespace semiorbit {

// Called with (done, total) work units; invoked from one thread at a time.
using ProgressFn = std::function<void(std::uint64_t, std::uint64_t)>;

struct ExecPolicy {
    int threads = 0; // 0 selects default_thread_count()
    ProgressFn progress;

    int resolved_threads() const;
    void report(std::uint64_t done, std::uint64_t total) const
    {
        if (progress) {
            progress(done, total);
        }
    }
};

// SEMIORBIT_THREADS when set and positive, otherwise the OpenMP default.
int default_thread_count();

} // namespace semiorbit
