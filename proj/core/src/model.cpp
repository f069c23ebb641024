#include "mtd/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>

#include "mtd/error.hpp"

namespace mtd {
namespace {

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void require_nonnegative(std::span<const double> v, const std::string& what) {
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(what + " has a negative or non-finite entry");
  }
}

Distribution sample_simplex(std::size_t size, RandomSource& rng) {
  Distribution v(size);
  for (auto& x : v) x = rng.uniform();
  const double total = sum_of(v);
  for (auto& x : v) x /= total;
  return v;
}

std::string format_sum(double total) {
  std::ostringstream out;
  out << std::setprecision(12) << total;
  return out.str();
}

// Checks an input distribution and renormalizes it only when it misses the
// stored tolerance, so exact inputs are kept bit-for-bit.
Distribution checked_distribution(Distribution v, std::size_t size, const std::string& what,
                                  double tolerance = kInputSumTolerance) {
  if (v.size() != size) {
    throw Error(what + " has " + std::to_string(v.size()) + " entries, expected " +
                std::to_string(size));
  }
  require_nonnegative(v, what);
  const double total = sum_of(v);
  if (std::abs(total - 1.0) > tolerance) {
    throw Error(what + " sums to " + format_sum(total) + ", expected 1");
  }
  if (std::abs(total - 1.0) > kStoredSumTolerance) {
    for (auto& x : v) x /= total;
  }
  return v;
}

StochasticMatrix checked_matrix(const StochasticMatrix& m, std::size_t size, const std::string& what) {
  if (m.size() != size) {
    throw Error(what + " has " + std::to_string(m.size()) + " rows, expected " + std::to_string(size));
  }
  StochasticMatrix out;
  out.reserve(size);
  for (std::size_t b = 0; b < size; ++b) {
    out.push_back(checked_distribution(m[b], size, what + " row " + std::to_string(b), kInputRowTolerance));
  }
  return out;
}

}  // namespace

void MtdModel::validate() const {
  const std::size_t A = alphabet.size();
  if (A < 2) throw Error("model alphabet needs at least two symbols");
  if (lags.empty()) throw Error("model needs at least one lag");
  if (lambdas.size() != lags.size()) throw Error("one weight per lag required");
  if (pj.size() != lags.size()) throw Error("one matrix per lag required");
  if (!(lambda0 >= 0.0 && lambda0 <= 1.0)) throw Error("lambda0 outside [0, 1]");
  require_nonnegative(lambdas, "lambdas");
  const double total = lambda0 + sum_of(lambdas);
  if (std::abs(total - 1.0) > kStoredSumTolerance) throw Error("weights do not sum to 1");
  if (p0.size() != A) throw Error("p0 has the wrong length");
  if (lambda0 > 0.0) {
    require_nonnegative(p0, "p0");
    if (std::abs(sum_of(p0) - 1.0) > kStoredSumTolerance) throw Error("p0 does not sum to 1");
  }
  for (std::size_t i = 0; i < pj.size(); ++i) {
    if (pj[i].size() != A) throw Error("matrix for lag " + std::to_string(lags[i]) + " has wrong shape");
    for (const auto& row : pj[i]) {
      if (row.size() != A) throw Error("matrix for lag " + std::to_string(lags[i]) + " has wrong shape");
      require_nonnegative(row, "matrix row");
      if (std::abs(sum_of(row) - 1.0) > kStoredSumTolerance) {
        throw Error("matrix for lag " + std::to_string(lags[i]) + " is not row-stochastic");
      }
    }
  }
}

MtdModel build_model(const ModelSpec& spec, RandomSource& rng) {
  const std::size_t A = spec.alphabet.size();
  const std::size_t k = spec.lags.size();
  if (A < 2) throw Error("alphabet needs at least two symbols");
  if (k == 0) throw Error("model needs at least one lag");

  MtdModel model;
  model.alphabet = spec.alphabet;
  model.lags = spec.lags;

  // Weights.
  if (spec.lambdas && spec.lambdas->size() != k) {
    throw Error("lambdas has " + std::to_string(spec.lambdas->size()) + " entries, expected " +
                std::to_string(k));
  }
  if (spec.lambdas) require_nonnegative(*spec.lambdas, "lambdas");
  if (spec.lambda0 && (*spec.lambda0 < 0.0 || *spec.lambda0 > 1.0)) {
    throw Error("lambda0 outside [0, 1]");
  }
  const bool has_lambda0 = spec.indep_part && spec.lambda0.has_value();
  if (has_lambda0 && spec.lambdas) {
    const double total = *spec.lambda0 + sum_of(*spec.lambdas);
    if (std::abs(total - 1.0) > kInputSumTolerance) {
      throw Error("weights sum to " + format_sum(total) + ", expected 1");
    }
    model.lambda0 = *spec.lambda0;
    model.lambdas = *spec.lambdas;
    if (std::abs(total - 1.0) > kStoredSumTolerance) {
      model.lambda0 /= total;
      for (auto& l : model.lambdas) l /= total;
    }
  } else if (spec.lambdas) {
    const double total = sum_of(*spec.lambdas);
    if (!spec.indep_part) {
      // Without an independent part the lag weights carry all the mass.
      if (!(total > 0.0)) throw Error("lag weights sum to 0");
      model.lambdas = *spec.lambdas;
      if (std::abs(total - 1.0) > kStoredSumTolerance) {
        for (auto& l : model.lambdas) l /= total;
      }
    } else {
      if (total > 1.0 + kInputSumTolerance) {
        throw Error("lag weights sum to " + format_sum(total) + ", exceeding 1");
      }
      model.lambdas = *spec.lambdas;
      model.lambda0 = std::max(0.0, 1.0 - total);
    }
  } else if (has_lambda0) {
    model.lambda0 = *spec.lambda0;
    model.lambdas = sample_simplex(k, rng);
    for (auto& l : model.lambdas) l *= (1.0 - model.lambda0);
  } else {
    if (spec.indep_part) {
      auto w = sample_simplex(k + 1, rng);
      model.lambda0 = w[0];
      model.lambdas.assign(w.begin() + 1, w.end());
    } else {
      model.lambdas = sample_simplex(k, rng);
    }
  }
  if (!spec.indep_part) model.lambda0 = 0.0;

  // Independent distribution.
  if (spec.indep_part && spec.p0) {
    model.p0 = checked_distribution(*spec.p0, A, "p0");
  } else if (spec.indep_part) {
    model.p0 = sample_simplex(A, rng);
  } else {
    model.p0.assign(A, 0.0);
  }

  // Lag matrices.
  if (spec.pj) {
    const auto& given = *spec.pj;
    if (spec.single_matrix) {
      if (given.size() != 1 && given.size() != k) {
        throw Error("single_matrix expects one matrix");
      }
      auto m = checked_matrix(given[0], A, "pj[0]");
      for (std::size_t i = 1; i < given.size(); ++i) {
        if (checked_matrix(given[i], A, "pj") != m) {
          throw Error("single_matrix set but the provided matrices differ");
        }
      }
      model.pj.assign(k, m);
    } else {
      if (given.size() != k) {
        throw Error("pj has " + std::to_string(given.size()) + " matrices, expected " +
                    std::to_string(k));
      }
      for (std::size_t i = 0; i < k; ++i) {
        model.pj.push_back(checked_matrix(given[i], A, "pj[" + std::to_string(i) + "]"));
      }
    }
  } else {
    auto sample_matrix = [&] {
      StochasticMatrix m;
      for (std::size_t b = 0; b < A; ++b) m.push_back(sample_simplex(A, rng));
      return m;
    };
    if (spec.single_matrix) {
      model.pj.assign(k, sample_matrix());
    } else {
      for (std::size_t i = 0; i < k; ++i) model.pj.push_back(sample_matrix());
    }
  }

  model.validate();
  return model;
}

TransitionTable::TransitionTable(LagSet lags, std::size_t alphabet_size, std::vector<double> flat_rows)
    : lags_(std::move(lags)), codec_(alphabet_size, lags_.size()), rows_(std::move(flat_rows)) {
  if (rows_.size() != codec_.count() * alphabet_size) throw Error("transition table has wrong size");
}

std::span<const double> TransitionTable::row(ContextCode code) const {
  const std::size_t A = codec_.alphabet_size();
  return std::span<const double>(rows_).subspan(code * A, A);
}

TransitionTable transition_table(const MtdModel& model, std::uint64_t row_budget) {
  model.validate();
  const std::size_t A = model.alphabet.size();
  const std::size_t k = model.lags.size();
  ContextCodec codec(A, k);
  if (codec.count() > row_budget) {
    throw BudgetExceeded("transition table needs " + std::to_string(codec.count()) +
                         " rows, above the budget of " + std::to_string(row_budget));
  }
  std::vector<double> rows(codec.count() * A);
  std::vector<Symbol> digits(k, 0);
  for (ContextCode code = 0; code < codec.count(); ++code) {
    double* row = rows.data() + code * A;
    for (std::size_t a = 0; a < A; ++a) row[a] = model.lambda0 * model.p0[a];
    // Digit position 0 is the oldest lag, i.e. lags[k-1].
    for (std::size_t pos = 0; pos < k; ++pos) {
      const std::size_t i = k - 1 - pos;
      const auto& dist = model.pj[i][digits[pos]];
      for (std::size_t a = 0; a < A; ++a) row[a] += model.lambdas[i] * dist[a];
    }
    for (std::size_t pos = k; pos-- > 0;) {
      if (++digits[pos] < A) break;
      digits[pos] = 0;
    }
  }
  return TransitionTable(model.lags, A, std::move(rows));
}

std::map<int, double> oscillation_exact(const MtdModel& model) {
  model.validate();
  std::map<int, double> out;
  const std::size_t A = model.alphabet.size();
  for (std::size_t i = 0; i < model.lags.size(); ++i) {
    double widest = 0.0;
    for (std::size_t b = 0; b < A; ++b) {
      for (std::size_t c = b + 1; c < A; ++c) {
        widest = std::max(widest, tv_distance(model.pj[i][b], model.pj[i][c]));
      }
    }
    out[model.lags[i]] = model.lambdas[i] * widest;
  }
  return out;
}

}  // namespace mtd
