#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mtd/empirics.hpp"
#include "mtd/model.hpp"

namespace mtd {

/// MTD parameters for a fixed lag set, in the layout used by EM:
/// lambdas[0] is the independent weight, lambdas[i+1] goes with lags[i].
struct EmParams {
  std::vector<double> lambdas;
  Distribution p0;
  std::vector<StochasticMatrix> pj;

  /// Checks shapes and simplex constraints within `tolerance`.
  void validate(std::size_t lag_count, std::size_t alphabet_size, double tolerance = 1e-9) const;
};

/// Sum over t = d+1..n of log P(X_t | past), d = max(S). Throws if any
/// observed transition has probability zero.
double mtd_log_likelihood(const Sample& sample, const LagSet& lags, const EmParams& params);

struct EmOptions {
  /// Stop once an update raises the log-likelihood by less than this.
  /// Absent: always run max_iterations updates.
  std::optional<double> min_increase = 0.01;
  int max_iterations = 100;
  bool want_oscillations = false;
  /// Probabilities below the floor are raised to it (then renormalized)
  /// before fitting. Off by default.
  std::optional<double> probability_floor;
};

struct EmResult {
  EmParams params;
  /// Number of parameter updates applied.
  int iterations = 0;
  /// Log-likelihood increase of each update.
  std::vector<double> distlogL;
  std::optional<std::map<int, double>> oscillations;
};

/// Latent-lag EM for the mixture weights, p0 and the lag matrices.
/// A zero independent weight in `init` stays zero.
EmResult em_fit(const Sample& sample, const LagSet& lags, const EmParams& init,
                const EmOptions& options = {});

/// The MTD model described by fitted parameters.
MtdModel to_model(const Alphabet& alphabet, const LagSet& lags, const EmParams& params);

}  // namespace mtd
