#include "nam/cli/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "nam/errors.hpp"

namespace nam::cli {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t master, int r) {
  return splitmix64(master + static_cast<std::uint64_t>(r));
}

int resolve_parallelism(int requested, int restarts) {
  int p = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NAM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw DomainError("NAM_THREADS must be a positive integer");
    }
    p = std::min<long>(p, cap);
  }
  return std::clamp(p, 1, std::max(restarts, 1));
}

std::vector<RestartOutcome> run_restarts(const NestedDataset& data, const Hyperparameters& hyper,
                                         const CaviConfig& config, const RestartPlan& plan) {
  if (plan.restarts < 1) throw DomainError("restart count must be at least 1");
  if (plan.parallelism < 1) throw DomainError("parallelism must be at least 1");
  config.validate();
  hyper.validate();
  data.validate();

  Channel<RestartOutcome> channel;
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < plan.restarts; r = next++) {
      RestartOutcome out;
      out.index = r;
      out.seed = restart_seed(plan.master_seed, r);
      const auto start = std::chrono::steady_clock::now();
      try {
        CaviConfig cfg = config;
        cfg.seed = out.seed;
        out.fit = fit(data, hyper, cfg);
        // The hard assignments are all the caller needs; the variational
        // state of every restart would dominate memory on large data.
        out.fit->final_state = VariationalState{};
      } catch (const NumericalFault& e) {
        out.error = e.what();
        out.numerical_fault = true;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      out.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      channel.send(std::move(out));
    }
  };

  const int workers = std::min(plan.parallelism, plan.restarts);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);

  std::vector<RestartOutcome> outcomes(plan.restarts);
  for (int received = 0; received < plan.restarts; ++received) {
    RestartOutcome out = channel.receive();
    const int index = out.index;
    outcomes[index] = std::move(out);
  }
  for (auto& t : threads) t.join();
  return outcomes;
}

std::optional<int> select_restart(const std::vector<double>& final_elbos) {
  std::optional<int> best;
  for (std::size_t r = 0; r < final_elbos.size(); ++r) {
    if (std::isnan(final_elbos[r])) continue;
    if (!best || final_elbos[r] > final_elbos[*best]) best = static_cast<int>(r);
  }
  return best;
}

std::optional<int> select_restart(const std::vector<RestartOutcome>& outcomes) {
  std::vector<double> elbos;
  elbos.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    elbos.push_back(o.fit ? o.fit->elbo_trace.back() : std::nan(""));
  }
  return select_restart(elbos);
}

}  // namespace nam::cli
