#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unshred/analytic.hpp"
#include "unshred/errors.hpp"
#include "unshred/experiment.hpp"
#include "unshred/io.hpp"
#include "unshred/oracle.hpp"
#include "unshred/reconstruct.hpp"

namespace {

namespace fs = std::filesystem;
using namespace unshred;

std::string fmt(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw io_error("write failed: " + path.string());
}

void cmd_shred(const std::string& in, const std::string& out) {
  const BitMatrix m = read_matrix(in);
  write_instance(out, shred(m));
}

void cmd_reconstruct(const std::string& in, const std::string& out_dir,
                     uint32_t max_depth, uint32_t residual_cap) {
  const ShreddedInstance inst = read_instance(in);
  ReconstructConfig config;
  config.max_depth = max_depth;
  config.residual_cap = residual_cap;
  const ReconstructionResult res = reconstruct(inst, config);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);

  switch (res.tag) {
    case ReconstructionTag::unique:
      write_matrix((dir / "matrix.txt").string(), *res.matrix);
      std::cout << "unique -> " << (dir / "matrix.txt").string() << "\n";
      break;
    case ReconstructionTag::non_reconstructible:
      write_matrix((dir / "witness_a.txt").string(), res.witness->first);
      write_matrix((dir / "witness_b.txt").string(), res.witness->second);
      std::cout << "non-reconstructible -> "
                << (dir / "witness_a.txt").string() << ", "
                << (dir / "witness_b.txt").string() << "\n";
      break;
    case ReconstructionTag::ambiguous:
      write_text(dir / "residual.txt", res.residual->to_text());
      std::cout << "ambiguous -> " << (dir / "residual.txt").string()
                << "\n";
      break;
  }
}

void cmd_oracle(const std::string& in) {
  const ShreddedInstance inst = read_instance(in);
  const OracleVerdict v = oracle_classify(inst);
  std::cout << "{\"completion_count\": " << v.completion_count
            << ", \"weakly_reconstructible\": "
            << (v.weakly_reconstructible ? "true" : "false")
            << ", \"strongly_reconstructible\": "
            << (v.strongly_reconstructible ? "true" : "false") << "}\n";
}

void cmd_thresholds(double c_min, double c_max, double step, uint32_t n) {
  if (step <= 0.0) throw std::invalid_argument("--step must be positive");
  if (c_max < c_min)
    throw std::invalid_argument("--c-max must be at least --c-min");
  std::cout << "c,p_weak,p_strong,limit_weak,limit_strong\n";
  const auto count =
      static_cast<uint64_t>((c_max - c_min) / step + 1e-9) + 1;
  for (uint64_t k = 0; k < count; ++k) {
    const double c = c_min + static_cast<double>(k) * step;
    const ThresholdPoint w = p_weak(n, c);
    const ThresholdPoint s = p_strong(n, c);
    std::cout << fmt(c) << ',' << fmt(w.p) << ',' << fmt(s.p) << ','
              << fmt(limit_weak_reconstructible(c)) << ','
              << fmt(limit_strong_reconstructible(c)) << "\n";
    if (w.clamped)
      std::cerr << "note: p_weak clamped at c=" << fmt(c) << "\n";
    if (s.clamped)
      std::cerr << "note: p_strong clamped at c=" << fmt(c) << "\n";
  }
}

void cmd_experiment(const std::string& regime,
                    const std::vector<uint32_t>& n_values,
                    const std::vector<double>& c_values, uint32_t trials,
                    uint64_t seed, uint32_t jobs, const std::string& out) {
  ExperimentConfig config;
  config.regime = regime_from_name(regime);
  config.n_values = n_values;
  config.c_values = c_values;
  config.trials = trials;
  config.master_seed = seed;
  config.jobs = jobs;
  const ExperimentReport report = run_experiment(config);
  write_text(out, report.to_csv());
  std::cout << report.cells.size() << " cells -> " << out << "\n";
}

void cmd_bench(const std::vector<uint32_t>& n_values, double ln_mult,
               uint32_t trials, uint64_t seed) {
  const std::vector<BenchRow> rows =
      bench_scaling(n_values, ln_mult, trials, seed);
  std::cout << "n,mean_ms,ratio,flagged\n";
  for (const BenchRow& row : rows)
    std::cout << row.n << ',' << fmt(row.mean_ms) << ',' << fmt(row.ratio)
              << ',' << (row.flagged ? "true" : "false") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shredded binary matrix reconstruction"};
  app.require_subcommand(1);

  std::string in_path, out_path, out_dir, regime = "weak";
  uint32_t max_depth = 2;
  uint32_t residual_cap = 16;
  std::vector<uint32_t> n_values;
  std::vector<double> c_values;
  uint32_t trials = 100;
  uint64_t seed = 0;
  uint32_t jobs = 1;
  double c_min = 0.0, c_max = 0.0, step = 0.5, ln_mult = 1.0;
  uint32_t thresholds_n = 1024;
  uint32_t bench_trials = 3;

  CLI::App* shred_cmd =
      app.add_subcommand("shred", "shred a matrix file into an instance");
  shred_cmd->add_option("--in", in_path, "matrix file")->required();
  shred_cmd->add_option("--out", out_path, "instance file")->required();
  shred_cmd->callback([&] { cmd_shred(in_path, out_path); });

  CLI::App* rec_cmd =
      app.add_subcommand("reconstruct", "reconstruct an instance");
  rec_cmd->add_option("--in", in_path, "instance file")->required();
  rec_cmd->add_option("--out", out_dir, "output directory")->required();
  rec_cmd->add_option("--max-depth", max_depth, "signature depth (1-3)")
      ->check(CLI::Range(1u, 3u));
  rec_cmd->add_option("--residual-cap", residual_cap,
                      "exhaustive residual size limit");
  rec_cmd->callback(
      [&] { cmd_reconstruct(in_path, out_dir, max_depth, residual_cap); });

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "exhaustively classify a small instance");
  oracle_cmd->add_option("--in", in_path, "instance file")->required();
  oracle_cmd->callback([&] { cmd_oracle(in_path); });

  CLI::App* thr_cmd =
      app.add_subcommand("thresholds", "print threshold curves as CSV");
  thr_cmd->add_option("--c-min", c_min, "first c")->required();
  thr_cmd->add_option("--c-max", c_max, "last c")->required();
  thr_cmd->add_option("--step", step, "c increment")->required();
  thr_cmd->add_option("--n", thresholds_n, "matrix size for the p columns");
  thr_cmd->callback([&] { cmd_thresholds(c_min, c_max, step, thresholds_n); });

  CLI::App* exp_cmd =
      app.add_subcommand("experiment", "run a Monte Carlo experiment");
  exp_cmd->add_option("--regime", regime, "weak, strong, or roundtrip")
      ->required();
  exp_cmd->add_option("--n", n_values, "matrix sizes")->required();
  exp_cmd->add_option("--c", c_values, "threshold offsets")->required();
  exp_cmd->add_option("--trials", trials, "trials per cell");
  exp_cmd->add_option("--seed", seed, "master seed");
  exp_cmd->add_option("--jobs", jobs, "worker threads");
  exp_cmd->add_option("--out", out_path, "output CSV")->required();
  exp_cmd->callback([&] {
    cmd_experiment(regime, n_values, c_values, trials, seed, jobs, out_path);
  });

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "time reconstruction across doubling sizes");
  bench_cmd->add_option("--n", n_values, "sizes, each double the last")
      ->required();
  bench_cmd->add_option("--ln-mult", ln_mult, "p = ln-mult * ln(n)/n");
  bench_cmd->add_option("--trials", bench_trials, "trials per size");
  bench_cmd->add_option("--seed", seed, "master seed");
  bench_cmd->callback(
      [&] { cmd_bench(n_values, ln_mult, bench_trials, seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
