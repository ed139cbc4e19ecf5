#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tickcep::detail {

/// Fixed set of threads that run one indexed job set at a time. `run` blocks
/// until every index has finished, so each call is a barrier.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads) {
    workers_.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) {
      workers_.emplace_back([this](std::stop_token stop) { loop(stop); });
    }
  }

  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      for (auto& worker : workers_) worker.request_stop();
    }
    wake_.notify_all();
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void run(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    std::unique_lock lock(mutex_);
    job_ = &fn;
    total_ = jobs;
    next_ = 0;
    done_ = 0;
    ++generation_;
    wake_.notify_all();
    finished_.wait(lock, [this] { return done_ == total_; });
    job_ = nullptr;
  }

 private:
  void loop(std::stop_token stop) {
    std::uint64_t seen = 0;
    std::unique_lock lock(mutex_);
    for (;;) {
      wake_.wait(lock, [&] { return stop.stop_requested() || (generation_ != seen && next_ < total_); });
      if (stop.stop_requested()) return;
      while (next_ < total_) {
        const std::size_t index = next_++;
        const auto* job = job_;
        lock.unlock();
        (*job)(index);
        lock.lock();
        if (++done_ == total_) finished_.notify_all();
      }
      seen = generation_;
    }
  }

  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable finished_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t total_ = 0;
  std::size_t next_ = 0;
  std::size_t done_ = 0;
  std::uint64_t generation_ = 0;
  std::vector<std::jthread> workers_;
};

}  // namespace tickcep::detail
