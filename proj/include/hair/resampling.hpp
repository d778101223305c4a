#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hair/types.hpp"

namespace hair {

// Root mean square of the errors. Throws ValidationError on an empty list.
double rmse(std::span<const double> errors);

struct SweepConfig {
  std::vector<int> n_values{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<int> d0_values{1, 2, 3, 4, 5};
  int iterations = 1000;
  int holdout_size = 10;
  std::uint64_t seed = 0;
  RapConfig rap;  // rap.a0 is the acceptance threshold

  void validate(std::size_t pool_size) const;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct SweepGrid {
  SweepConfig config;
  std::map<std::pair<int, int>, double> rmse;  // (N, d0) -> RMSE
  // Per-iteration HAIR errors, kept only when requested.
  std::map<std::pair<int, int>, std::vector<double>> errors;

  double at(int n, int d0) const;
  // Throws ValidationError when a configured cell is missing.
  void check_complete() const;

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

// Every (N, d0, iteration) draws from its own stream derived from
// (seed, N, d0, iteration), so the grid does not depend on `workers`.
// workers <= 0 means hardware concurrency.
SweepGrid run_sweep(const CameraDataset& dataset, const SweepConfig& cfg, int workers = 1,
                    bool keep_errors = false);

enum class NRule {
  candidate_k,  // Δ(d0*, j, k) <= threshold for all j > d0*, at k only
  all_larger_k  // ... and also at every k' >= k
};

struct SelectOptions {
  double delta_depth = 0.01;
  double delta_n = 0.001;
  NRule n_rule = NRule::candidate_k;
};

struct ParameterChoice {
  int d0_star = 0;
  int n_star = 0;
  double delta_depth = 0.01;
  double delta_n = 0.001;
};

// d0* is the smallest depth i (below the largest configured depth) whose RMSE
// drop to every deeper j stays within delta_depth at every N; N* is the
// smallest N whose drop from d0* to every deeper j stays within delta_n.
// Throws ComputationError("no convergence: d0" / "no convergence: N").
ParameterChoice select_parameters(const SweepGrid& grid, const SelectOptions& options = {});

}  // namespace hair
