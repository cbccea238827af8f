#pragma once

// Drivers for the three experiment families: a drive-frequency sweep at fixed
// times, a closed time series at fixed frequency, and a time series with
// T1/T2 relaxation.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nmrdiscord/config.hpp"
#include "nmrdiscord/correlations.hpp"

namespace nmrd {

struct ResultRow {
  double omega = 0.0;  // rad/s
  double t = 0.0;      // s
  double pseudo_concurrence = 0.0;
  double concurrence = 0.0;
  double geometric_discord = 0.0;
  std::optional<double> entropic_discord;
  double min_eigenvalue = 0.0;
};

struct ResultTable {
  std::string command;
  nlohmann::json config;  // resolved configuration echo
  std::vector<ResultRow> rows;
};

ResultRow make_row(double omega, double t, const CorrelationReport& report);

// Rows ordered by time index, then frequency index.
ResultTable run_sweep(const ExperimentConfig& config);
ResultTable run_evolve(const ExperimentConfig& config);
// Closed-form solver when the relaxation drive is constant (diagonal
// initial/equilibrium state), RK4 otherwise.
ResultTable run_relax(const ExperimentConfig& config);

ResultTable run_command(const std::string& command, const ExperimentConfig& config);

// Evaluates fn(i) for i in [0, n) on worker threads. Each index is handled by
// exactly one worker, so results depend only on i. The first exception is
// rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace nmrd
