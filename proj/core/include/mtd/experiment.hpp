#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtd/empirics.hpp"
#include "mtd/model.hpp"
#include "mtd/parallel.hpp"

namespace mtd {

/// Monte Carlo comparison of the FS, Naive and Oracle conditional estimators
/// at a fixed target context.
struct ExperimentConfig {
  /// Generator; absent blocks are sampled with `model_seed`.
  ModelSpec model;
  std::uint64_t model_seed = 0;
  std::uint64_t seed = 0;  // replication j uses RandomSource(seed).derive(j)
  int replications = 100;
  std::size_t n = 10'000;
  std::vector<std::size_t> m = {1000, 1500, 2000, 2500, 3000, 5000, 10000};
  int fs_d = 100;
  int fs_l = 2;
  /// max(lags) of the generator when absent.
  std::optional<int> naive_order;
  int oracle_size = 2;
  int oracle_max_d = 100;
  int oracle_max_size = 2;
  /// Every lag of the target context holds this symbol.
  Symbol target_context_symbol = 0;
  /// Symbol whose conditional probability is compared.
  Symbol target_symbol = 0;
  Parallelism parallelism;

  /// Throws on inconsistent settings.
  void validate() const;
};

/// Flat JSON: {"model": {...model document...}, "model_seed", "seed",
/// "replications", "n", "m": [...], "fs_d", "fs_l", "naive_order",
/// "oracle_size", "oracle_max_d", "oracle_max_size",
/// "target_context_symbol": "<label>", "target_symbol": "<label>", "workers"}.
/// "model_file" may replace "model"; it is resolved relative to `base_dir`.
ExperimentConfig experiment_config_from_json(std::string_view text, const std::string& base_dir = ".");

struct ReplicationRecord {
  std::size_t replication = 0;
  std::size_t m = 0;
  std::string estimator;
  std::vector<int> lags;
  double estimate = 0.0;  // P_hat(target symbol | target context over lags)
  double delta = 0.0;
  double delta_std = 0.0;
  bool fallback = false;  // context unseen, uniform row used
};

struct CellSummary {
  std::string estimator;
  std::size_t m = 0;
  double mean = 0.0;
  double mean_std = 0.0;
  double se = 0.0;
  double se_std = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  std::size_t fallbacks = 0;
};

struct MetricsReport {
  MtdModel model;
  double true_probability = 0.0;  // P(target symbol | target context over the generator lags)
  double std_divisor = 0.0;       // min_a P(a | target context)
  std::vector<CellSummary> cells;  // estimator-major (FS, Oracle, Naive), then m ascending
  std::vector<ReplicationRecord> records;
};

MetricsReport run_experiment(const ExperimentConfig& config);

/// Long format: estimator,m,metric,value.
std::string report_to_csv(const MetricsReport& report);
std::string report_to_json(const MetricsReport& report);

/// P_hat(. | every lag of S holds `symbol`) with d = max(S), and the number
/// of matching windows. Uniform when unseen.
struct ContextEstimate {
  Distribution conditional;
  std::uint64_t context_count = 0;
};
ContextEstimate estimate_at_constant_context(const Sample& sample, const LagSet& lags, Symbol symbol);

struct OracleChoice {
  LagSet lags;
  ContextEstimate estimate;
  double distance = 0.0;
};

/// Size-`size` subset of {1..d} whose estimate at the constant context is
/// closest in total variation to `truth`; ties go to the lexicographically
/// first subset.
OracleChoice oracle_select(const Sample& sample, int d, int size, Symbol symbol,
                           std::span<const double> truth);

/// Linear-interpolation quantile (R type 7) of unsorted values.
double quantile(std::vector<double> values, double p);

}  // namespace mtd
