#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtd/alphabet.hpp"
#include "mtd/empirics.hpp"
#include "mtd/parallel.hpp"

namespace mtd {

enum class SelectionMethod { kFs, kCut, kBic, kFsc };

std::string to_string(SelectionMethod method);
/// Parses "fs", "cut", "bic" or "fsc".
SelectionMethod parse_selection_method(const std::string& name);

/// Tuning constants of the CUT threshold.
struct CutParams {
  double alpha = 0.05;
  double mu = 1.0;
  double xi = 0.5;

  /// Throws unless alpha > 0, xi > 0, 0 < mu < 3 and mu > psi(mu).
  void validate() const;
};

/// psi(mu) = e^mu - mu - 1.
double psi(double mu);

/// One forward-stepwise inclusion.
struct FsStep {
  int lag = 0;
  double nu = 0.0;
};

/// Outcome of the CUT test for one lag.
struct CutDecision {
  int lag = 0;
  bool retained = false;
  /// Compatible pairs of observed contexts that were compared.
  std::uint64_t pairs = 0;
  /// Largest d_TV - (s(x) + s(y)) over the pairs, with its two components.
  /// Absent when no compatible pair was observed.
  std::optional<double> max_gap;
  std::optional<double> tv_at_max;
  std::optional<double> threshold_at_max;
};

struct BicCandidate {
  LagSet lags;
  double value = 0.0;
};

/// Chosen lags plus the diagnostics of whichever estimator produced them.
struct SelectionResult {
  SelectionMethod method = SelectionMethod::kFs;
  /// FS: inclusion order. Other methods: ascending.
  std::vector<int> selected;

  std::vector<FsStep> fs_steps;
  std::vector<CutDecision> cut_decisions;
  std::vector<BicCandidate> bic_by_size;   // filled when by_size is requested
  std::optional<BicCandidate> bic_best;
  std::vector<BicCandidate> bic_all;       // filled when keep_all is requested
};

/// Influence of lag j on the present given the lags in S, estimated from the
/// counts table. Requires j outside S and max(S u {j}) <= d.
double nu_hat(const CountsTable& counts, int j, const LagSet& lags);

/// Greedy forward inclusion of l lags from {1..d}, maximizing nu_hat at each
/// step. Ties go to the smallest lag.
SelectionResult fs_select(const Sample& sample, int d, int l, Parallelism parallelism = {});

/// s_n(x_S) for an observed context of the frequency table.
double cut_threshold(const FreqTable& table, ContextCode context, const CutParams& params);

/// Retains each lag j in S iff some observed (S \ {j})-compatible pair of
/// contexts has d_TV above s_n(x) + s_n(y).
SelectionResult cut_select(const Sample& sample, int d, const LagSet& lags, const CutParams& params,
                           Parallelism parallelism = {});

/// Number of free parameters of an MTD over `lag_count` lags.
double bic_parameter_count(std::size_t lag_count, std::size_t alphabet_size, bool single_matrix,
                           bool indep_part);

/// Negative log-likelihood of the empirical conditionals plus the penalty
/// theta(S) log(n) xi. Requires S non-empty and max(S) <= d.
double bic_value(const CountsTable& counts, const LagSet& lags, double xi, bool single_matrix,
                 bool indep_part);

struct BicOptions {
  /// Candidate universe; {1..d} when absent.
  std::optional<LagSet> candidates;
  int minl = 1;
  /// |candidates| when absent.
  std::optional<int> maxl;
  double xi = 0.5;
  bool single_matrix = false;
  bool indep_part = true;
  bool by_size = false;
  bool keep_all = false;
  std::uint64_t candidate_budget = 1'000'000;
};

/// Exhaustive BIC minimization over every subset of the candidates with size
/// in [minl, maxl], enumerated by size then lexicographically. Ties go to
/// the earlier-enumerated set.
SelectionResult bic_select(const Sample& sample, int d, const BicOptions& options,
                           Parallelism parallelism = {});

/// FS on the oldest floor(n/2) observations, then CUT of its output on the
/// remaining observations.
SelectionResult fsc_select(const Sample& sample, int d, int l, const CutParams& params,
                           Parallelism parallelism = {});

}  // namespace mtd
