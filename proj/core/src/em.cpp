#include "mtd/em.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mtd/error.hpp"

namespace mtd {
namespace {

void check_simplex(std::span<const double> v, double tolerance, const std::string& what) {
  double total = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(what + " has a negative or non-finite entry");
    total += x;
  }
  if (std::abs(total - 1.0) > tolerance) throw Error(what + " does not sum to 1");
}

void normalize(std::span<double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= total;
}

void apply_floor(EmParams& params, double floor) {
  auto lift = [&](std::span<double> v) {
    for (auto& x : v) x = std::max(x, floor);
    normalize(v);
  };
  const bool frozen_independent = params.lambdas[0] == 0.0;
  if (frozen_independent) {
    lift(std::span<double>(params.lambdas).subspan(1));
  } else {
    lift(params.lambdas);
    lift(params.p0);
  }
  for (auto& m : params.pj) {
    for (auto& row : m) lift(row);
  }
}

void check_inputs(const Sample& sample, const LagSet& lags) {
  if (lags.empty()) throw Error("EM needs a non-empty lag set");
  if (static_cast<std::size_t>(lags.max()) >= sample.size()) {
    throw Error("max(S) must be smaller than the sample size");
  }
}

}  // namespace

void EmParams::validate(std::size_t lag_count, std::size_t alphabet_size, double tolerance) const {
  if (lambdas.size() != lag_count + 1) {
    throw Error("lambdas needs " + std::to_string(lag_count + 1) + " entries (independent weight first)");
  }
  check_simplex(lambdas, tolerance, "lambdas");
  const bool no_independent_part = lambdas[0] == 0.0 && p0.empty();
  if (p0.size() != alphabet_size && !no_independent_part) throw Error("p0 has the wrong length");
  if (lambdas[0] > 0.0) check_simplex(p0, tolerance, "p0");
  if (pj.size() != lag_count) throw Error("pj needs one matrix per lag");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    if (pj[i].size() != alphabet_size) throw Error("pj matrix has the wrong shape");
    for (const auto& row : pj[i]) {
      if (row.size() != alphabet_size) throw Error("pj matrix has the wrong shape");
      check_simplex(row, tolerance, "pj[" + std::to_string(i) + "] row");
    }
  }
}

double mtd_log_likelihood(const Sample& sample, const LagSet& lags, const EmParams& params) {
  check_inputs(sample, lags);
  params.validate(lags.size(), sample.alphabet.size());
  const std::size_t d = static_cast<std::size_t>(lags.max());
  const auto& x = sample.values;
  double ll = 0.0;
  for (std::size_t t = d; t < x.size(); ++t) {
    double p = params.lambdas[0] > 0.0 ? params.lambdas[0] * params.p0[x[t]] : 0.0;
    for (std::size_t i = 0; i < lags.size(); ++i) {
      p += params.lambdas[i + 1] * params.pj[i][x[t - static_cast<std::size_t>(lags[i])]][x[t]];
    }
    if (!(p > 0.0)) {
      throw Error("model assigns probability zero to the observed transition at position " +
                  std::to_string(t + 1));
    }
    ll += std::log(p);
  }
  return ll;
}

EmResult em_fit(const Sample& sample, const LagSet& lags, const EmParams& init, const EmOptions& options) {
  check_inputs(sample, lags);
  const std::size_t A = sample.alphabet.size();
  const std::size_t k = lags.size();
  init.validate(k, A);
  if (options.max_iterations < 1) throw Error("nIter must be at least 1");

  EmParams current = init;
  if (current.p0.empty()) current.p0.assign(A, 0.0);
  if (options.probability_floor) apply_floor(current, *options.probability_floor);
  const bool independent = current.lambdas[0] > 0.0;
  const std::size_t d = static_cast<std::size_t>(lags.max());
  const auto& x = sample.values;
  const double windows = static_cast<double>(x.size() - d);

  EmResult result;
  double ll = mtd_log_likelihood(sample, lags, current);
  std::vector<double> posterior(k + 1);
  while (result.iterations < options.max_iterations) {
    // E-step: accumulate posterior responsibilities per component.
    std::vector<double> weight_mass(k + 1, 0.0);
    Distribution p0_mass(A, 0.0);
    std::vector<StochasticMatrix> pj_mass(k, StochasticMatrix(A, Distribution(A, 0.0)));
    for (std::size_t t = d; t < x.size(); ++t) {
      const Symbol a = x[t];
      posterior[0] = independent ? current.lambdas[0] * current.p0[a] : 0.0;
      double total = posterior[0];
      for (std::size_t i = 0; i < k; ++i) {
        posterior[i + 1] =
            current.lambdas[i + 1] * current.pj[i][x[t - static_cast<std::size_t>(lags[i])]][a];
        total += posterior[i + 1];
      }
      for (std::size_t r = 0; r <= k; ++r) {
        const double w = posterior[r] / total;
        weight_mass[r] += w;
        if (r == 0) {
          p0_mass[a] += w;
        } else {
          pj_mass[r - 1][x[t - static_cast<std::size_t>(lags[r - 1])]][a] += w;
        }
      }
    }

    // M-step. Rows without posterior mass keep their previous values.
    EmParams next = current;
    for (std::size_t r = 0; r <= k; ++r) next.lambdas[r] = weight_mass[r] / windows;
    if (independent) {
      const double mass = std::accumulate(p0_mass.begin(), p0_mass.end(), 0.0);
      if (mass > 0.0) {
        for (std::size_t a = 0; a < A; ++a) next.p0[a] = p0_mass[a] / mass;
      }
    } else {
      next.lambdas[0] = 0.0;
    }
    normalize(next.lambdas);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t b = 0; b < A; ++b) {
        const auto& row = pj_mass[i][b];
        const double mass = std::accumulate(row.begin(), row.end(), 0.0);
        if (mass > 0.0) {
          for (std::size_t a = 0; a < A; ++a) next.pj[i][b][a] = row[a] / mass;
        }
      }
    }

    const double next_ll = mtd_log_likelihood(sample, lags, next);
    const double increase = next_ll - ll;
    current = std::move(next);
    ll = next_ll;
    ++result.iterations;
    result.distlogL.push_back(increase);
    if (options.min_increase && increase < *options.min_increase) break;
  }

  result.params = std::move(current);
  if (options.want_oscillations) {
    result.oscillations = oscillation_exact(to_model(sample.alphabet, lags, result.params));
  }
  return result;
}

MtdModel to_model(const Alphabet& alphabet, const LagSet& lags, const EmParams& params) {
  params.validate(lags.size(), alphabet.size());
  MtdModel model;
  model.alphabet = alphabet;
  model.lags = lags;
  model.lambda0 = params.lambdas[0];
  model.lambdas.assign(params.lambdas.begin() + 1, params.lambdas.end());
  model.p0 = params.p0.empty() ? Distribution(alphabet.size(), 0.0) : params.p0;
  model.pj = params.pj;
  // Undo round-off so the model passes its tighter stored tolerance.
  const double total = model.lambda0 + std::accumulate(model.lambdas.begin(), model.lambdas.end(), 0.0);
  model.lambda0 /= total;
  for (auto& l : model.lambdas) l /= total;
  if (model.lambda0 > 0.0) normalize(model.p0);
  for (auto& m : model.pj) {
    for (auto& row : m) normalize(row);
  }
  model.validate();
  return model;
}

}  // namespace mtd
