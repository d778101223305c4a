#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "hair/errors.hpp"
#include "hair/resampling.hpp"
#include "hair/rng.hpp"

using namespace hair;

namespace {

SweepGrid grid_of(const std::vector<int>& ns, const std::vector<int>& ds,
                  const std::vector<std::vector<double>>& by_depth) {
  SweepGrid g;
  g.config.n_values = ns;
  g.config.d0_values = ds;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t k = 0; k < ns.size(); ++k) g.rmse[{ns[k], ds[i]}] = by_depth[i][k];
  return g;
}

SweepGrid hand_grid() {
  return grid_of({10, 20}, {1, 2, 3}, {{0.30, 0.28}, {0.10, 0.09}, {0.095, 0.089}});
}

}  // namespace

TEST_CASE("rmse examples") {
  const std::vector<double> zeros(5, 0.0);
  CHECK(rmse(zeros) == 0.0);
  const std::vector<double> constant(1000, 0.1);
  CHECK(rmse(constant) == doctest::Approx(0.1).epsilon(1e-14));
  const std::vector<double> pair{0.3, 0.4};
  CHECK(rmse(pair) == doctest::Approx(std::sqrt(0.125)));
  CHECK_THROWS_AS(rmse(std::vector<double>{}), ValidationError);
}

TEST_CASE("select_parameters on the hand-built grid") {
  const auto c = select_parameters(hand_grid());
  CHECK(c.d0_star == 2);
  CHECK(c.n_star == 20);
}

TEST_CASE("select_parameters on a flat grid takes the minima") {
  const auto g = grid_of({10, 20, 30}, {1, 2, 3}, {{0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}});
  const auto c = select_parameters(g);
  CHECK(c.d0_star == 1);
  CHECK(c.n_star == 10);
}

TEST_CASE("select_parameters without convergence") {
  const auto g = grid_of({10, 20}, {1, 2, 3}, {{0.9, 0.9}, {0.5, 0.5}, {0.1, 0.1}});
  CHECK_THROWS_WITH_AS(select_parameters(g), "no convergence: d0", ComputationError);

  // Depth converges but no N meets the tighter rule.
  const auto h = grid_of({10, 20}, {1, 2}, {{0.105, 0.104}, {0.1, 0.1}});
  CHECK_THROWS_WITH_AS(select_parameters(h), "no convergence: N", ComputationError);
}

TEST_CASE("N* rule readings differ when a later N regresses") {
  // At N=10 the drop is 0; at N=20 it is 0.005; at N=30 it is 0 again.
  const auto g = grid_of({10, 20, 30}, {1, 2}, {{0.1, 0.105, 0.1}, {0.1, 0.1, 0.1}});
  CHECK(select_parameters(g).n_star == 10);
  SelectOptions all_k;
  all_k.n_rule = NRule::all_larger_k;
  CHECK(select_parameters(g, all_k).n_star == 30);
}

TEST_CASE("select_parameters is order-invariant and monotone under loosening") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<int> ns{10, 20, 30, 40};
    const std::vector<int> ds{1, 2, 3, 4};
    std::vector<std::vector<double>> v(4, std::vector<double>(4));
    for (auto& row : v)
      for (auto& x : row) x = rng.uniform(0.0, 0.05);
    // Insert cells in a shuffled order.
    SweepGrid g;
    g.config.n_values = {40, 10, 30, 20};
    g.config.d0_values = {3, 1, 4, 2};
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) cells.push_back({i, k});
    rng.partial_shuffle(cells, 0, cells.size());
    for (auto [i, k] : cells) g.rmse[{ns[std::size_t(k)], ds[std::size_t(i)]}] = v[std::size_t(i)][std::size_t(k)];

    const SweepGrid ordered = grid_of(ns, ds, v);
    SelectOptions tight{0.01, 0.001, NRule::candidate_k};
    SelectOptions loose_depth{0.02, 0.001, NRule::candidate_k};
    SelectOptions loose_n{0.01, 0.004, NRule::candidate_k};
    auto attempt = [](const SweepGrid& grid, const SelectOptions& o, std::string& why) {
      std::optional<ParameterChoice> out;
      try { out = select_parameters(grid, o); } catch (const ComputationError& e) { why = e.what(); }
      return out;
    };
    std::string why_a, why_b, why_depth, why_n;
    const auto a = attempt(g, tight, why_a);
    const auto b = attempt(ordered, tight, why_b);
    const auto depth = attempt(ordered, loose_depth, why_depth);
    const auto n = attempt(ordered, loose_n, why_n);
    REQUIRE(a.has_value() == b.has_value());
    CHECK(why_a == why_b);
    if (why_a != "no convergence: d0") CHECK(why_depth != "no convergence: d0");
    if (depth && a) CHECK(depth->d0_star <= a->d0_star);
    if (a) {
      CHECK(a->d0_star == b->d0_star);
      CHECK(a->n_star == b->n_star);
      // Same depth rule, looser N rule.
      REQUIRE(n.has_value());
      CHECK(n->d0_star == a->d0_star);
      CHECK(n->n_star <= a->n_star);
    }
  }
}

TEST_CASE("sweep on a detection-free camera is all zeros") {
  auto d = testing::random_camera(3, 30, false);
  for (auto& img : d.images) img.detections.clear();
  SweepConfig cfg;
  cfg.n_values = {5, 10};
  cfg.d0_values = {1, 2};
  cfg.iterations = 5;
  cfg.holdout_size = 10;
  cfg.seed = 9;
  const auto g = run_sweep(d, cfg);
  for (const auto& [cell, v] : g.rmse) CHECK(v == 0.0);
  g.check_complete();
}

TEST_CASE("sweep is reproducible and independent of worker count") {
  const auto d = generate_camera(default_degraded_spec(), 30);
  SweepConfig cfg;
  cfg.n_values = {5, 15};
  cfg.d0_values = {1, 3};
  cfg.iterations = 6;
  cfg.holdout_size = 10;
  cfg.seed = 1234;
  const auto a = run_sweep(d, cfg, 1, true);
  const auto b = run_sweep(d, cfg, 1, true);
  const auto c = run_sweep(d, cfg, 4, true);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.errors.at({5, 1}).size() == 6);

  // A cell does not depend on which other cells are configured.
  SweepConfig single = cfg;
  single.n_values = {15};
  single.d0_values = {3};
  CHECK(run_sweep(d, single).at(15, 3) == a.at(15, 3));

  cfg.seed = 1235;
  CHECK_FALSE(run_sweep(d, cfg).rmse == a.rmse);
}

TEST_CASE("sweep rejects a pool that is too small") {
  const auto d = testing::random_camera(5, 12, false);
  SweepConfig cfg;
  cfg.n_values = {5};
  cfg.d0_values = {1};
  cfg.iterations = 1;
  cfg.holdout_size = 10;
  CHECK_THROWS_AS(run_sweep(d, cfg), ValidationError);
}
