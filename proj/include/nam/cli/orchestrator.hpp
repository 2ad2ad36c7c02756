#ifndef NAM_CLI_ORCHESTRATOR_HPP
#define NAM_CLI_ORCHESTRATOR_HPP

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nam/cavi.hpp"

namespace nam::cli {

// Unbounded multi-producer, single-consumer queue.
template <typename T>
class Channel {
 public:
  void send(T value) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      queue_.push_back(std::move(value));
    }
    ready_.notify_one();
  }

  T receive() {
    std::unique_lock<std::mutex> lock(mutex_);
    ready_.wait(lock, [this] { return !queue_.empty(); });
    T value = std::move(queue_.front());
    queue_.pop_front();
    return value;
  }

 private:
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<T> queue_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed of restart r: splitmix64(master + r).
std::uint64_t restart_seed(std::uint64_t master, int r);

// Terminal message of one restart: a fit or the error that stopped it.
struct RestartOutcome {
  int index = 0;
  std::uint64_t seed = 0;
  std::optional<FitResult> fit;
  std::string error;          // set when `fit` is empty
  bool numerical_fault = false;
  double seconds = 0.0;
};

struct RestartPlan {
  int restarts = 50;
  int parallelism = 1;
  std::uint64_t master_seed = 0;
};

// Worker count: the request (0 = hardware concurrency) capped by the
// NAM_THREADS environment variable and by the number of restarts.
int resolve_parallelism(int requested, int restarts);

// Runs every restart, at most plan.parallelism at a time, and returns the
// outcomes ordered by restart index. Each restart's seed replaces
// config.seed. The returned fits carry an empty final_state.
std::vector<RestartOutcome> run_restarts(const NestedDataset& data, const Hyperparameters& hyper,
                                         const CaviConfig& config, const RestartPlan& plan);

// Index of the highest final ELBO among successful outcomes, lowest index
// on ties; nullopt when every restart failed.
std::optional<int> select_restart(const std::vector<RestartOutcome>& outcomes);

// Same rule over bare values (NaN entries mark failed restarts).
std::optional<int> select_restart(const std::vector<double>& final_elbos);

}  // namespace nam::cli

#endif  // NAM_CLI_ORCHESTRATOR_HPP
