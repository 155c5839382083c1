#include "unshred/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "unshred/analytic.hpp"
#include "unshred/errors.hpp"

namespace unshred {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::weak: return "weak";
    case Regime::strong: return "strong";
    case Regime::roundtrip: return "roundtrip";
  }
  throw internal_error("regime without a name");
}

Regime regime_from_name(const std::string& name) {
  if (name == "weak") return Regime::weak;
  if (name == "strong") return Regime::strong;
  if (name == "roundtrip") return Regime::roundtrip;
  throw std::invalid_argument("unknown regime: " + name);
}

namespace {

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t derive_trial_seed(uint64_t master_seed, uint32_t n, uint32_t c_index,
                           uint32_t trial_index) {
  uint64_t h = mix64(master_seed);
  h = mix64(h ^ n);
  h = mix64(h ^ c_index);
  h = mix64(h ^ trial_index);
  return h;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double cell_density(Regime regime, uint32_t n, double c) {
  switch (regime) {
    case Regime::weak: return p_weak(n, c).p;
    case Regime::strong: return p_strong(n, c).p;
    case Regime::roundtrip: {
      const double raw = c * std::log(static_cast<double>(n)) / n;
      return std::clamp(raw, 0.0, 1.0);
    }
  }
  throw internal_error("regime without a density rule");
}

double cell_prediction(Regime regime, double c) {
  switch (regime) {
    case Regime::weak: return limit_weak_reconstructible(c);
    case Regime::strong: return limit_strong_reconstructible(c);
    case Regime::roundtrip: return 1.0;  // the w.h.p. regime
  }
  throw internal_error("regime without a prediction");
}

struct TrialOutcome {
  uint8_t tag = 0;  // result tag; for strong: 0 duplicate-free, 1 duplicate
  bool ge2_ones = false;
  bool iso_ge2 = false;
  bool witness_checked = false;
  bool witness_ok = false;
  bool exact = false;
  double ms = 0.0;
};

TrialOutcome run_one_trial(Regime regime, uint32_t n, double p, uint64_t seed,
                           const ReconstructConfig& rcfg) {
  TrialOutcome out;
  const BitMatrix m = sample_matrix({n, p, seed});
  const ShreddedInstance inst = shred(m);
  out.ge2_ones = inst.total_ones() >= 2;

  if (regime == Regime::strong) {
    const auto t0 = Clock::now();
    const DuplicateLines dup = detect_duplicate_lines(inst);
    out.ms = elapsed_ms(t0);
    out.tag = (dup.rows || dup.cols) ? 1 : 0;
    return out;
  }

  out.iso_ge2 = detect_isolated_ones(inst).size() >= 2;
  const auto t0 = Clock::now();
  const ReconstructionResult res = reconstruct(inst, rcfg);
  out.ms = elapsed_ms(t0);
  out.tag = static_cast<uint8_t>(res.tag);
  if (res.tag == ReconstructionTag::non_reconstructible) {
    out.witness_checked = true;
    const WitnessPair& w = *res.witness;
    out.witness_ok = w.first != w.second && shred(w.first) == inst &&
                     shred(w.second) == inst;
  }
  if (regime == Regime::roundtrip)
    out.exact = res.tag == ReconstructionTag::unique && *res.matrix == m;
  return out;
}

CellStats aggregate_cell(Regime regime, uint32_t n, double c, double p,
                         std::vector<TrialOutcome>& outcomes) {
  CellStats cell;
  cell.regime = regime;
  cell.n = n;
  cell.c = c;
  cell.p = p;
  cell.trials = static_cast<uint32_t>(outcomes.size());
  cell.frac_predicted = cell_prediction(regime, c);

  double sum_ms = 0.0;
  std::vector<double> times;
  times.reserve(outcomes.size());
  for (const TrialOutcome& o : outcomes) {
    sum_ms += o.ms;
    times.push_back(o.ms);
    switch (o.tag) {
      case 0: ++cell.unique_count; break;
      case 1: ++cell.nonrecon_count; break;
      default: ++cell.ambiguous_count; break;
    }
    if (o.ge2_ones) ++cell.ge2_ones_count;
    if (o.iso_ge2) ++cell.iso_ge2_count;
    if (o.tag == 1 && o.ge2_ones) ++cell.nonrecon_ge2_ones_count;
    if (o.witness_checked) {
      if (o.witness_ok)
        ++cell.witness_verified_count;
      else
        ++cell.witness_failure_count;
    }
    if (o.exact) ++cell.exact_roundtrip_count;
  }
  cell.mean_ms = sum_ms / cell.trials;
  std::sort(times.begin(), times.end());
  const size_t mid = times.size() / 2;
  cell.median_ms = (times.size() % 2) ? times[mid]
                                      : 0.5 * (times[mid - 1] + times[mid]);

  const double tr = cell.trials;
  switch (regime) {
    case Regime::weak: cell.frac_observed = cell.unique_count / tr; break;
    case Regime::strong: cell.frac_observed = cell.unique_count / tr; break;
    case Regime::roundtrip:
      cell.frac_observed = cell.exact_roundtrip_count / tr;
      break;
  }
  return cell;
}

void validate_config(const ExperimentConfig& config) {
  if (config.n_values.empty())
    throw std::invalid_argument("experiment needs at least one n");
  for (uint32_t n : config.n_values)
    if (n < 3) throw std::invalid_argument("experiment sizes must be >= 3");
  if (config.c_values.empty())
    throw std::invalid_argument("experiment needs at least one c");
  if (config.trials == 0)
    throw std::invalid_argument("trials must be positive");
  if (config.jobs == 0) throw std::invalid_argument("jobs must be positive");
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentReport report;
  report.cells.reserve(config.n_values.size() * config.c_values.size());

  for (uint32_t n : config.n_values) {
    for (uint32_t ci = 0; ci < config.c_values.size(); ++ci) {
      const double c = config.c_values[ci];
      const double p = cell_density(config.regime, n, c);
      std::vector<TrialOutcome> outcomes(config.trials);

      const auto run_trial = [&](uint32_t t) {
        const uint64_t seed =
            derive_trial_seed(config.master_seed, n, ci, t);
        outcomes[t] =
            run_one_trial(config.regime, n, p, seed, config.reconstruct);
      };

      const uint32_t workers = std::min(config.jobs, config.trials);
      if (workers <= 1) {
        for (uint32_t t = 0; t < config.trials; ++t) run_trial(t);
      } else {
        std::atomic<uint32_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (uint32_t w = 0; w < workers; ++w) {
          pool.emplace_back([&] {
            for (;;) {
              const uint32_t t = next.fetch_add(1);
              if (t >= config.trials) return;
              try {
                run_trial(t);
              } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                return;
              }
            }
          });
        }
        for (std::thread& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
      }

      report.cells.push_back(
          aggregate_cell(config.regime, n, c, p, outcomes));
    }
  }
  return report;
}

// --- CSV ----------------------------------------------------------------------

namespace {

constexpr const char* kCsvHeader =
    "regime,n,c,p,trials,frac_observed,frac_predicted,unique,nonrecon,"
    "ambiguous,mean_ms";

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc())
    throw internal_error("double formatting failed");
  return std::string(buf.data(), res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t at = line.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, at - start));
    start = at + 1;
  }
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw io_error("csv: bad number: " + s);
  return v;
}

uint32_t parse_u32(const std::string& s) {
  uint32_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw io_error("csv: bad count: " + s);
  return v;
}

}  // namespace

std::string ExperimentReport::to_csv() const {
  std::string out = kCsvHeader;
  out += '\n';
  for (const CellStats& cell : cells) {
    out += regime_name(cell.regime);
    out += ',';
    out += std::to_string(cell.n);
    out += ',';
    out += format_double(cell.c);
    out += ',';
    out += format_double(cell.p);
    out += ',';
    out += std::to_string(cell.trials);
    out += ',';
    out += format_double(cell.frac_observed);
    out += ',';
    out += format_double(cell.frac_predicted);
    out += ',';
    out += std::to_string(cell.unique_count);
    out += ',';
    out += std::to_string(cell.nonrecon_count);
    out += ',';
    out += std::to_string(cell.ambiguous_count);
    out += ',';
    out += format_double(cell.mean_ms);
    out += '\n';
  }
  return out;
}

ExperimentReport ExperimentReport::parse_csv(const std::string& text) {
  std::vector<std::string> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader)
    throw io_error("csv: missing or malformed header");
  ExperimentReport report;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split(lines[i], ',');
    if (f.size() != 11)
      throw io_error("csv: expected 11 fields, got " +
                     std::to_string(f.size()));
    CellStats cell;
    try {
      cell.regime = regime_from_name(f[0]);
    } catch (const std::invalid_argument& e) {
      throw io_error(std::string("csv: ") + e.what());
    }
    cell.n = parse_u32(f[1]);
    cell.c = parse_double(f[2]);
    cell.p = parse_double(f[3]);
    cell.trials = parse_u32(f[4]);
    cell.frac_observed = parse_double(f[5]);
    cell.frac_predicted = parse_double(f[6]);
    cell.unique_count = parse_u32(f[7]);
    cell.nonrecon_count = parse_u32(f[8]);
    cell.ambiguous_count = parse_u32(f[9]);
    cell.mean_ms = parse_double(f[10]);
    report.cells.push_back(cell);
  }
  return report;
}

// --- scaling bench --------------------------------------------------------------

std::vector<BenchRow> bench_scaling(const std::vector<uint32_t>& n_values,
                                    double ln_multiplier, uint32_t trials,
                                    uint64_t master_seed) {
  if (n_values.size() < 2)
    throw std::invalid_argument("bench needs at least two sizes");
  for (size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] != 2 * n_values[i - 1])
      throw std::invalid_argument("bench sizes must double at every step");
  if (trials == 0) throw std::invalid_argument("trials must be positive");

  std::vector<BenchRow> rows;
  rows.reserve(n_values.size());
  for (size_t idx = 0; idx < n_values.size(); ++idx) {
    const uint32_t n = n_values[idx];
    const double p = std::clamp(
        ln_multiplier * std::log(static_cast<double>(n)) / n, 0.0, 1.0);
    double sum_ms = 0.0;
    for (uint32_t t = 0; t < trials; ++t) {
      const uint64_t seed = derive_trial_seed(
          master_seed, n, static_cast<uint32_t>(idx), t);
      const BitMatrix m = sample_matrix({n, p, seed});
      const ShreddedInstance inst = shred(m);
      const auto t0 = Clock::now();
      const ReconstructionResult res = reconstruct(inst);
      sum_ms += elapsed_ms(t0);
      (void)res;
    }
    BenchRow row;
    row.n = n;
    row.mean_ms = sum_ms / trials;
    if (idx > 0 && rows[idx - 1].mean_ms > 0.0) {
      row.ratio = row.mean_ms / rows[idx - 1].mean_ms;
      row.flagged = row.ratio > 5.0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace unshred
