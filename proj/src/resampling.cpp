#include "hair/resampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "hair/errors.hpp"
#include "hair/quadtree.hpp"
#include "hair/rng.hpp"

namespace hair {

namespace {

// Absorbs representation error when comparing RMSE differences to decimal
// thresholds (0.09 - 0.089 is 0.0010000000000000009 in binary).
constexpr double kDeltaSlack = 1e-12;

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double rmse(std::span<const double> errors) {
  if (errors.empty()) throw ValidationError("rmse of an empty list");
  double sum = 0.0;
  for (double e : errors) sum += e * e;
  return std::sqrt(sum / double(errors.size()));
}

void SweepConfig::validate(std::size_t pool_size) const {
  rap.validate();
  if (n_values.empty() || d0_values.empty())
    throw ValidationError("sweep needs at least one N and one d0 value");
  if (iterations < 1) throw ValidationError("sweep iterations must be >= 1");
  if (holdout_size < 1) throw ValidationError("holdout size must be >= 1");
  for (int n : n_values)
    if (n < 1) throw ValidationError("N values must be >= 1");
  for (int d : d0_values)
    if (d < 0) throw ValidationError("d0 values must be >= 0");
  const int max_n = *std::max_element(n_values.begin(), n_values.end());
  if (std::size_t(max_n) + std::size_t(holdout_size) > pool_size)
    throw ValidationError("pool of " + std::to_string(pool_size) + " images is too small for N = " +
                          std::to_string(max_n) + " plus " + std::to_string(holdout_size) +
                          " holdout images");
}

double SweepGrid::at(int n, int d0) const {
  auto it = rmse.find({n, d0});
  if (it == rmse.end())
    throw ValidationError("sweep grid has no cell N=" + std::to_string(n) +
                          " d0=" + std::to_string(d0));
  return it->second;
}

void SweepGrid::check_complete() const {
  for (int n : config.n_values)
    for (int d : config.d0_values) (void)at(n, d);
}

SweepGrid run_sweep(const CameraDataset& dataset, const SweepConfig& cfg, int workers,
                    bool keep_errors) {
  cfg.validate(dataset.images.size());
  const auto ns = sorted_unique(cfg.n_values);
  const auto ds = sorted_unique(cfg.d0_values);

  struct Cell {
    int n;
    int d0;
  };
  std::vector<Cell> cells;
  for (int n : ns)
    for (int d : ds) cells.push_back({n, d});

  const std::size_t iters = std::size_t(cfg.iterations);
  const std::size_t total = cells.size() * iters;
  std::vector<double> errors(total, 0.0);

  std::vector<std::string> pool;
  for (const auto& img : dataset.images) pool.push_back(img.image_id);

  auto work = [&](std::size_t item) {
    const Cell& cell = cells[item / iters];
    const std::size_t iteration = item % iters;
    Rng rng(derive_seed(cfg.seed, {std::uint64_t(cell.n), std::uint64_t(cell.d0), iteration}));
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    rng.partial_shuffle(order, 0, std::size_t(cell.n));
    rng.partial_shuffle(order, std::size_t(cell.n), std::size_t(cfg.holdout_size));

    std::vector<std::string> ident;
    for (std::size_t i = 0; i < std::size_t(cell.n); ++i) ident.push_back(pool[order[i]]);
    std::vector<ImageRecord> holdout;
    for (std::size_t i = 0; i < std::size_t(cfg.holdout_size); ++i)
      holdout.push_back(dataset.images[order[std::size_t(cell.n) + i]]);

    const Hair h = identify_hair(dataset, ident, cfg.rap, cell.d0);
    errors[item] = hair_error(h, holdout, cfg.rap).e;
  };

  if (workers <= 0) workers = int(std::max(1u, std::thread::hardware_concurrency()));
  workers = int(std::min<std::size_t>(std::size_t(workers), std::max<std::size_t>(total, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    for (int t = 0; t < workers; ++t)
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) {
          try {
            work(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = total;
          }
        }
      });
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  SweepGrid grid;
  grid.config = cfg;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::span<const double> cell_errors(errors.data() + c * iters, iters);
    grid.rmse[{cells[c].n, cells[c].d0}] = rmse(cell_errors);
    if (keep_errors)
      grid.errors[{cells[c].n, cells[c].d0}].assign(cell_errors.begin(), cell_errors.end());
  }
  return grid;
}

ParameterChoice select_parameters(const SweepGrid& grid, const SelectOptions& options) {
  grid.check_complete();
  const auto ns = sorted_unique(grid.config.n_values);
  const auto ds = sorted_unique(grid.config.d0_values);
  auto delta = [&](int i, int j, int k) { return grid.at(k, i) - grid.at(k, j); };

  ParameterChoice choice;
  choice.delta_depth = options.delta_depth;
  choice.delta_n = options.delta_n;

  bool found_depth = false;
  for (std::size_t a = 0; a + 1 < ds.size() && !found_depth; ++a) {
    bool ok = true;
    for (std::size_t b = a + 1; b < ds.size() && ok; ++b)
      for (int k : ns)
        if (delta(ds[a], ds[b], k) > options.delta_depth + kDeltaSlack) {
          ok = false;
          break;
        }
    if (ok) {
      choice.d0_star = ds[a];
      found_depth = true;
    }
  }
  if (!found_depth) throw ComputationError("no convergence: d0");

  auto n_ok = [&](int k) {
    for (int j : ds)
      if (j > choice.d0_star && delta(choice.d0_star, j, k) > options.delta_n + kDeltaSlack)
        return false;
    return true;
  };
  for (std::size_t a = 0; a < ns.size(); ++a) {
    bool ok = n_ok(ns[a]);
    if (ok && options.n_rule == NRule::all_larger_k)
      for (std::size_t b = a + 1; b < ns.size() && ok; ++b) ok = n_ok(ns[b]);
    if (ok) {
      choice.n_star = ns[a];
      return choice;
    }
  }
  throw ComputationError("no convergence: N");
}

}  // namespace hair
