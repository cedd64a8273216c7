// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fedpath {

// Persistent worker pool for data-parallel loops. parallel_for hands out
// indices dynamically; callers must only write to disjoint, index-owned
// outputs so results do not depend on scheduling. Reductions are done by
// the caller afterwards in fixed index order.
class ThreadPool {
public:
    explicit ThreadPool(int n_threads) {
        int extra = n_threads - 1;
        if (extra < 0) extra = 0;
        workers_.reserve(static_cast<size_t>(extra));
        for (int i = 0; i < extra; ++i) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool() {
        {
            std::unique_lock<std::mutex> lock(mu_);
            stop_ = true;
        }
        cv_task_.notify_all();
        for (auto& w : workers_) w.join();
    }

    int size() const { return static_cast<int>(workers_.size()) + 1; }

    // Runs fn(i) for every i in [begin, end). Blocks until all complete.
    void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
        if (end <= begin) return;
        if (workers_.empty() || end - begin == 1) {
            for (int i = begin; i < end; ++i) fn(i);
            return;
        }
        uint32_t gen;
        {
            std::unique_lock<std::mutex> lock(mu_);
            gen = ++generation_;
            fn_ = &fn;
            end_ = end;
            pending_ = end - begin;
            cursor_.store(pack(gen, begin), std::memory_order_release);
        }
        cv_task_.notify_all();
        run_task(gen, fn);
        std::unique_lock<std::mutex> lock(mu_);
        cv_done_.wait(lock, [&] { return done_gen_ >= gen; });
    }

private:
    static uint64_t pack(uint32_t gen, int idx) {
        return (static_cast<uint64_t>(gen) << 32) | static_cast<uint32_t>(idx);
    }

    // Claims indices tagged with the task generation; claims against a
    // stale generation fail, so a late worker can never touch a newer task.
    bool claim(uint32_t gen, int& idx) {
        uint64_t c = cursor_.load(std::memory_order_acquire);
        while (true) {
            if (static_cast<uint32_t>(c >> 32) != gen) return false;
            int i = static_cast<int>(static_cast<uint32_t>(c));
            if (i >= end_) return false;
            if (cursor_.compare_exchange_weak(c, pack(gen, i + 1),
                                              std::memory_order_acq_rel)) {
                idx = i;
                return true;
            }
        }
    }

    void run_task(uint32_t gen, const std::function<void(int)>& fn) {
        int done = 0;
        int idx;
        while (claim(gen, idx)) {
            fn(idx);
            ++done;
        }
        if (done > 0) {
            std::unique_lock<std::mutex> lock(mu_);
            pending_ -= done;
            if (pending_ == 0) {
                done_gen_ = gen;
                cv_done_.notify_all();
            }
        }
    }

    void worker_loop() {
        uint32_t seen = 0;
        while (true) {
            const std::function<void(int)>* fn = nullptr;
            uint32_t gen;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_task_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                gen = seen = generation_;
                fn = fn_;
            }
            run_task(gen, *fn);
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable cv_task_;
    std::condition_variable cv_done_;
    const std::function<void(int)>* fn_ = nullptr;
    std::atomic<uint64_t> cursor_{0};
    int end_ = 0;
    int pending_ = 0;
    uint32_t generation_ = 0;
    uint32_t done_gen_ = 0;
    bool stop_ = false;
};

// Convenience wrapper: pool may be null (serial execution).
inline void parallel_for(ThreadPool* pool, int begin, int end,
                         const std::function<void(int)>& fn) {
    if (pool) {
        pool->parallel_for(begin, end, fn);
    } else {
        for (int i = begin; i < end; ++i) fn(i);
    }
}

}  // namespace fedpath
