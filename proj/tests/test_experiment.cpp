#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "unshred/analytic.hpp"
#include "unshred/errors.hpp"
#include "unshred/experiment.hpp"

using namespace unshred;

namespace {

// Everything except wall-clock timing must be bit-for-bit reproducible.
void check_same_outcomes(const ExperimentReport& a, const ExperimentReport& b) {
  REQUIRE(a.cells.size() == b.cells.size());
  for (size_t i = 0; i < a.cells.size(); ++i) {
    const CellStats& x = a.cells[i];
    const CellStats& y = b.cells[i];
    CHECK(x.regime == y.regime);
    CHECK(x.n == y.n);
    CHECK(x.c == y.c);
    CHECK(x.p == y.p);
    CHECK(x.trials == y.trials);
    CHECK(x.frac_observed == y.frac_observed);
    CHECK(x.frac_predicted == y.frac_predicted);
    CHECK(x.unique_count == y.unique_count);
    CHECK(x.nonrecon_count == y.nonrecon_count);
    CHECK(x.ambiguous_count == y.ambiguous_count);
    CHECK(x.ge2_ones_count == y.ge2_ones_count);
    CHECK(x.iso_ge2_count == y.iso_ge2_count);
    CHECK(x.witness_verified_count == y.witness_verified_count);
    CHECK(x.witness_failure_count == y.witness_failure_count);
    CHECK(x.exact_roundtrip_count == y.exact_roundtrip_count);
  }
}

}  // namespace

TEST_CASE("regime names round-trip") {
  for (Regime r : {Regime::weak, Regime::strong, Regime::roundtrip})
    CHECK(regime_from_name(regime_name(r)) == r);
  CHECK_THROWS_AS(regime_from_name("fast"), std::invalid_argument);
}

TEST_CASE("trial seeds are deterministic and collision free") {
  CHECK(derive_trial_seed(1, 8, 0, 0) == derive_trial_seed(1, 8, 0, 0));
  std::set<uint64_t> seen;
  for (uint64_t master : {0ull, 1ull, 999ull})
    for (uint32_t n : {8u, 64u, 1024u})
      for (uint32_t ci = 0; ci < 4; ++ci)
        for (uint32_t t = 0; t < 50; ++t)
          seen.insert(derive_trial_seed(master, n, ci, t));
  CHECK(seen.size() == 3u * 3u * 4u * 50u);
}

TEST_CASE("experiment cells are laid out n-major and add up") {
  ExperimentConfig cfg;
  cfg.regime = Regime::weak;
  cfg.n_values = {4, 8};
  cfg.c_values = {-1.0, 0.0, 1.0};
  cfg.trials = 6;
  cfg.master_seed = 3;
  const auto report = run_experiment(cfg);
  REQUIRE(report.cells.size() == 6);
  for (size_t i = 0; i < 6; ++i) {
    const CellStats& cell = report.cells[i];
    CHECK(cell.n == cfg.n_values[i / 3]);
    CHECK(cell.c == cfg.c_values[i % 3]);
    CHECK(cell.trials == 6);
    CHECK(cell.unique_count + cell.nonrecon_count + cell.ambiguous_count == 6);
    CHECK(cell.p == p_weak(cell.n, cell.c).p);
    CHECK(cell.frac_predicted ==
          doctest::Approx(limit_weak_reconstructible(cell.c)));
    CHECK(cell.frac_observed ==
          doctest::Approx(static_cast<double>(cell.unique_count) / 6));
    CHECK(cell.mean_ms >= 0.0);
  }
}

TEST_CASE("experiments are reproducible and scheduling independent") {
  ExperimentConfig cfg;
  cfg.regime = Regime::weak;
  cfg.n_values = {16};
  cfg.c_values = {0.0, -2.0};
  cfg.trials = 24;
  cfg.master_seed = 17;
  cfg.jobs = 1;
  const auto serial = run_experiment(cfg);
  const auto again = run_experiment(cfg);
  cfg.jobs = 8;
  const auto parallel = run_experiment(cfg);
  check_same_outcomes(serial, again);
  check_same_outcomes(serial, parallel);
}

TEST_CASE("the strong regime counts duplicate-free instances") {
  ExperimentConfig cfg;
  cfg.regime = Regime::strong;
  cfg.n_values = {32};
  cfg.c_values = {0.0};
  cfg.trials = 40;
  cfg.master_seed = 5;
  const auto report = run_experiment(cfg);
  const CellStats& cell = report.cells.at(0);
  CHECK(cell.ambiguous_count == 0);
  CHECK(cell.unique_count + cell.nonrecon_count == 40);
  CHECK(cell.p == p_strong(32, 0.0).p);
  CHECK(cell.frac_predicted ==
        doctest::Approx(limit_strong_reconstructible(0.0)));
  CHECK(cell.frac_observed ==
        doctest::Approx(static_cast<double>(cell.unique_count) / 40));
}

TEST_CASE("the roundtrip regime compares matrices bit for bit") {
  ExperimentConfig cfg;
  cfg.regime = Regime::roundtrip;
  cfg.n_values = {64};
  cfg.c_values = {2.0};
  cfg.trials = 10;
  cfg.master_seed = 7;
  const auto report = run_experiment(cfg);
  const CellStats& cell = report.cells.at(0);
  CHECK(cell.frac_predicted == 1.0);
  CHECK(cell.p ==
        doctest::Approx(2.0 * std::log(64.0) / 64.0));
  CHECK(cell.frac_observed ==
        doctest::Approx(static_cast<double>(cell.exact_roundtrip_count) / 10));
  CHECK(cell.exact_roundtrip_count <= cell.unique_count);
}

TEST_CASE("non-reconstructible trials always carry verified witnesses") {
  // far below the weak threshold nearly every instance has >= 2 isolated 1s
  ExperimentConfig cfg;
  cfg.regime = Regime::weak;
  cfg.n_values = {64};
  cfg.c_values = {-4.0};
  cfg.trials = 30;
  cfg.master_seed = 11;
  cfg.jobs = 4;
  const auto report = run_experiment(cfg);
  const CellStats& cell = report.cells.at(0);
  CHECK(cell.nonrecon_count > 0);
  CHECK(cell.witness_verified_count == cell.nonrecon_count);
  CHECK(cell.witness_failure_count == 0);
  CHECK(cell.iso_ge2_count >= cell.nonrecon_count / 2);
}

TEST_CASE("experiment configuration is validated") {
  ExperimentConfig cfg;
  cfg.n_values = {};
  cfg.c_values = {0.0};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg.n_values = {2};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg.n_values = {8};
  cfg.c_values = {};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg.c_values = {0.0};
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg.trials = 1;
  cfg.jobs = 0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("reports serialize with the pinned header and round-trip") {
  ExperimentConfig cfg;
  cfg.regime = Regime::strong;
  cfg.n_values = {8, 16};
  cfg.c_values = {-0.5, 0.25};
  cfg.trials = 5;
  cfg.master_seed = 23;
  const auto report = run_experiment(cfg);
  const std::string csv = report.to_csv();
  CHECK(csv.rfind("regime,n,c,p,trials,frac_observed,frac_predicted,"
                  "unique,nonrecon,ambiguous,mean_ms\n",
                  0) == 0);
  const auto parsed = ExperimentReport::parse_csv(csv);
  CHECK(parsed.to_csv() == csv);
  REQUIRE(parsed.cells.size() == report.cells.size());
  for (size_t i = 0; i < parsed.cells.size(); ++i) {
    CHECK(parsed.cells[i].n == report.cells[i].n);
    CHECK(parsed.cells[i].c == report.cells[i].c);
    CHECK(parsed.cells[i].p == report.cells[i].p);
    CHECK(parsed.cells[i].mean_ms == report.cells[i].mean_ms);
    CHECK(parsed.cells[i].unique_count == report.cells[i].unique_count);
  }
}

TEST_CASE("malformed CSV is rejected") {
  CHECK_THROWS_AS(ExperimentReport::parse_csv("nope\n"), io_error);
  CHECK_THROWS_AS(ExperimentReport::parse_csv(
                      "regime,n,c,p,trials,frac_observed,frac_predicted,"
                      "unique,nonrecon,ambiguous,mean_ms\n"
                      "weak,8,0,0.1,5,1,1,5,0\n"),
                  io_error);
  CHECK_THROWS_AS(ExperimentReport::parse_csv(
                      "regime,n,c,p,trials,frac_observed,frac_predicted,"
                      "unique,nonrecon,ambiguous,mean_ms\n"
                      "weak,eight,0,0.1,5,1,1,5,0,0,0.5\n"),
                  io_error);
  CHECK_THROWS_AS(ExperimentReport::parse_csv(
                      "regime,n,c,p,trials,frac_observed,frac_predicted,"
                      "unique,nonrecon,ambiguous,mean_ms\n"
                      "brisk,8,0,0.1,5,1,1,5,0,0,0.5\n"),
                  io_error);
}

TEST_CASE("bench demands doubling sizes and positive trials") {
  CHECK_THROWS_AS(bench_scaling({64}, 1.0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(bench_scaling({64, 100}, 1.0, 1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(bench_scaling({64, 128}, 1.0, 0, 0),
                  std::invalid_argument);
  const auto rows = bench_scaling({64, 128}, 1.0, 2, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 64);
  CHECK(rows[1].n == 128);
  CHECK(rows[0].ratio == 0.0);
  CHECK_FALSE(rows[0].flagged);
  CHECK(rows[0].mean_ms >= 0.0);
  CHECK(rows[1].flagged == (rows[1].ratio > 5.0));
}
