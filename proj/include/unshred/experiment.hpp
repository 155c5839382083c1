#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unshred/matrix.hpp"
#include "unshred/reconstruct.hpp"

namespace unshred {

// What each Monte Carlo trial samples and measures:
//   weak:      sample at p_weak(n, c), run the reconstruction pipeline,
//              record the result tag (observed = fraction unique);
//   strong:    sample at p_strong(n, c), record duplicate-line presence
//              (observed = fraction duplicate-free; the unique/nonrecon
//              columns carry the duplicate-free/duplicate counts);
//   roundtrip: sample at p = c * ln(n) / n — here c is a multiplier of the
//              connectivity scale, not an additive offset — and record
//              whether reconstruction returns the sampled matrix exactly.
enum class Regime : uint8_t { weak, strong, roundtrip };

const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct ExperimentConfig {
  Regime regime = Regime::weak;
  std::vector<uint32_t> n_values;     // each >= 3
  std::vector<double> c_values;
  uint32_t trials = 1;                // per (n, c) cell
  uint64_t master_seed = 0;
  uint32_t jobs = 1;                  // worker threads
  ReconstructConfig reconstruct;      // pipeline knobs (weak/roundtrip)
};

// Per-cell aggregate.  The first block is what the CSV serializes; the
// diagnostics below it stay in memory (witness checks, conditional counts,
// median) and are recomputed, not parsed.
struct CellStats {
  Regime regime = Regime::weak;
  uint32_t n = 0;
  double c = 0.0;
  double p = 0.0;
  uint32_t trials = 0;
  double frac_observed = 0.0;
  double frac_predicted = 0.0;
  uint32_t unique_count = 0;
  uint32_t nonrecon_count = 0;
  uint32_t ambiguous_count = 0;
  double mean_ms = 0.0;

  // diagnostics (not serialized)
  double median_ms = 0.0;
  uint32_t ge2_ones_count = 0;        // instances with >= 2 ones total
  uint32_t iso_ge2_count = 0;         // instances with >= 2 isolated 1s
  uint32_t nonrecon_ge2_ones_count = 0;
  uint32_t witness_verified_count = 0;
  uint32_t witness_failure_count = 0;
  uint32_t exact_roundtrip_count = 0;
};

struct ExperimentReport {
  std::vector<CellStats> cells;  // |n_values| x |c_values|, n-major

  // Exact header `regime,n,c,p,trials,frac_observed,frac_predicted,
  // unique,nonrecon,ambiguous,mean_ms`; doubles printed shortest
  // round-trippable.
  std::string to_csv() const;
  static ExperimentReport parse_csv(const std::string& text);
};

// Fixed 64-bit mix of (master_seed, n, c index, trial index); the per-trial
// RNG seed, independent of scheduling.
uint64_t derive_trial_seed(uint64_t master_seed, uint32_t n, uint32_t c_index,
                           uint32_t trial_index);

// Runs every (n, c, trial) cell; trials execute on a bounded worker pool
// and are aggregated in trial order, so reports are identical for any job
// count.  Trial timing covers the measured operation only, never sampling
// or shredding.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct BenchRow {
  uint32_t n = 0;
  double mean_ms = 0.0;
  double ratio = 0.0;   // mean_ms relative to the previous row; 0 on row 0
  bool flagged = false; // ratio above the quadratic-growth alarm of 5
};

// Times the full reconstruction at p = ln_multiplier * ln(n) / n for each n.
// Requires at least two sizes, ascending, each exactly double the previous.
// Runs serially regardless of jobs so timings stay comparable.
std::vector<BenchRow> bench_scaling(const std::vector<uint32_t>& n_values,
                                    double ln_multiplier, uint32_t trials,
                                    uint64_t master_seed);

}  // namespace unshred
