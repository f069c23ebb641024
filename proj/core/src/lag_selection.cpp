#include "mtd/lag_selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mtd/error.hpp"

namespace mtd {
namespace {

void check_order(const Sample& sample, int d) {
  if (d < 1) throw Error("order d must be at least 1");
  if (static_cast<std::size_t>(d) >= sample.size()) {
    throw Error("order d = " + std::to_string(d) + " must be smaller than the sample size " +
                std::to_string(sample.size()));
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
  return static_cast<std::uint64_t>(std::llround(r));
}

}  // namespace

std::string to_string(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kFs: return "FS";
    case SelectionMethod::kCut: return "CUT";
    case SelectionMethod::kBic: return "BIC";
    case SelectionMethod::kFsc: return "FSC";
  }
  return "?";
}

SelectionMethod parse_selection_method(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "fs") return SelectionMethod::kFs;
  if (lower == "cut") return SelectionMethod::kCut;
  if (lower == "bic") return SelectionMethod::kBic;
  if (lower == "fsc") return SelectionMethod::kFsc;
  throw Error("unknown selection method '" + name + "'");
}

double psi(double mu) { return std::exp(mu) - mu - 1.0; }

void CutParams::validate() const {
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  if (!(xi > 0.0)) throw Error("xi must be positive");
  if (!(mu > 0.0 && mu < 3.0)) throw Error("mu must lie in (0, 3)");
  if (!(mu > psi(mu))) throw Error("mu must exceed psi(mu) = e^mu - mu - 1");
}

double nu_hat(const CountsTable& counts, int j, const LagSet& lags) {
  const PairwiseFreq table(counts, lags, j);
  const std::size_t A = table.alphabet_size();
  const double total = static_cast<double>(table.total());
  double sum = 0.0;
  std::vector<std::uint64_t> n_b(A);
  std::vector<Distribution> rows(A);
  for (ContextCode x : table.contexts()) {
    const double n_x = static_cast<double>(table.context_count(x));
    for (Symbol b = 0; b < A; ++b) {
      n_b[b] = table.count(x, b);
      if (n_b[b] > 0) rows[b] = table.conditional(x, b);
    }
    // pi(x,b) pi(x,c) / pi(x) = N(x,b) N(x,c) / (N(x) (n-d)); b == c adds 0
    // and each unordered pair appears twice.
    for (Symbol b = 0; b < A; ++b) {
      if (n_b[b] == 0) continue;
      for (Symbol c = b + 1; c < A; ++c) {
        if (n_b[c] == 0) continue;
        const double weight = static_cast<double>(n_b[b]) * static_cast<double>(n_b[c]) / (n_x * total);
        sum += 2.0 * weight * tv_distance(rows[b], rows[c]);
      }
    }
  }
  return sum;
}

SelectionResult fs_select(const Sample& sample, int d, int l, Parallelism parallelism) {
  check_order(sample, d);
  if (l < 1 || l > d) throw Error("l must satisfy 1 <= l <= d");
  const auto counts = counts_table(sample, d);

  SelectionResult result;
  result.method = SelectionMethod::kFs;
  LagSet chosen;
  for (int step = 0; step < l; ++step) {
    std::vector<int> candidates;
    for (int j = 1; j <= d; ++j) {
      if (!chosen.contains(j)) candidates.push_back(j);
    }
    std::vector<double> nu(candidates.size());
    parallel_for(candidates.size(), parallelism,
                 [&](std::size_t i) { nu[i] = nu_hat(counts, candidates[i], chosen); });
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (nu[i] > nu[best]) best = i;
    }
    result.fs_steps.push_back({candidates[best], nu[best]});
    result.selected.push_back(candidates[best]);
    chosen = chosen.with(candidates[best]);
  }
  return result;
}

double cut_threshold(const FreqTable& table, ContextCode context, const CutParams& params) {
  const std::uint64_t n_x = table.context_count(context);
  if (n_x == 0) throw Error("threshold undefined for an unobserved context");
  const double N = static_cast<double>(n_x);
  const double ratio = params.mu / (params.mu - psi(params.mu));
  const auto p = table.conditional(context);
  double root_sum = 0.0;
  for (double pa : p) root_sum += std::sqrt(ratio * (pa + params.alpha / N));
  const double A = static_cast<double>(table.alphabet_size());
  return std::sqrt(params.alpha * (1.0 + params.xi) / (2.0 * N)) * root_sum +
         params.alpha * A / (6.0 * N);
}

SelectionResult cut_select(const Sample& sample, int d, const LagSet& lags, const CutParams& params,
                           Parallelism parallelism) {
  params.validate();
  check_order(sample, d);
  if (lags.max() > d) throw Error("S must be a subset of 1..d");

  SelectionResult result;
  result.method = SelectionMethod::kCut;
  if (lags.empty()) return result;

  const auto counts = counts_table(sample, d);
  const auto table = freq_table(counts, lags);
  const auto& codec = table.codec();
  const auto contexts = table.contexts();
  std::vector<Distribution> rows;
  std::vector<double> thresholds;
  rows.reserve(contexts.size());
  thresholds.reserve(contexts.size());
  for (ContextCode code : contexts) {
    rows.push_back(table.conditional(code));
    thresholds.push_back(cut_threshold(table, code, params));
  }

  const std::size_t k = lags.size();
  result.cut_decisions.resize(k);
  parallel_for(k, parallelism, [&](std::size_t i) {
    const std::size_t pos = k - 1 - i;  // digit position of lags[i]
    std::map<ContextCode, std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < contexts.size(); ++c) {
      groups[codec.drop_digit(contexts[c], pos)].push_back(c);
    }
    CutDecision decision;
    decision.lag = lags[i];
    for (const auto& [key, members] : groups) {
      for (std::size_t u = 0; u < members.size(); ++u) {
        for (std::size_t v = u + 1; v < members.size(); ++v) {
          const std::size_t x = members[u];
          const std::size_t y = members[v];
          const double tv = tv_distance(rows[x], rows[y]);
          const double threshold = thresholds[x] + thresholds[y];
          const double gap = tv - threshold;
          ++decision.pairs;
          if (!decision.max_gap || gap > *decision.max_gap) {
            decision.max_gap = gap;
            decision.tv_at_max = tv;
            decision.threshold_at_max = threshold;
          }
        }
      }
    }
    decision.retained = decision.max_gap && *decision.max_gap > 0.0;
    result.cut_decisions[i] = decision;
  });
  for (const auto& decision : result.cut_decisions) {
    if (decision.retained) result.selected.push_back(decision.lag);
  }
  return result;
}

double bic_parameter_count(std::size_t lag_count, std::size_t alphabet_size, bool single_matrix,
                           bool indep_part) {
  const double s = static_cast<double>(lag_count);
  const double A = static_cast<double>(alphabet_size);
  const double zeta = single_matrix ? 1.0 : s;
  if (indep_part) return s + (A - 1.0) * (1.0 + A * zeta);
  return (s - 1.0) + (A - 1.0) * A * zeta;
}

double bic_value(const CountsTable& counts, const LagSet& lags, double xi, bool single_matrix,
                 bool indep_part) {
  if (lags.empty()) throw Error("BIC needs a non-empty lag set");
  const auto table = freq_table(counts, lags);
  const std::size_t A = table.alphabet_size();
  double neg_log_lik = 0.0;
  for (ContextCode code : table.contexts()) {
    const double n_x = static_cast<double>(table.context_count(code));
    for (Symbol a = 0; a < A; ++a) {
      const std::uint64_t n = table.count(code, a);
      if (n == 0) continue;
      neg_log_lik -= static_cast<double>(n) * std::log(static_cast<double>(n) / n_x);
    }
  }
  const double theta = bic_parameter_count(lags.size(), A, single_matrix, indep_part);
  return neg_log_lik + theta * std::log(static_cast<double>(counts.sample_size())) * xi;
}

SelectionResult bic_select(const Sample& sample, int d, const BicOptions& options,
                           Parallelism parallelism) {
  check_order(sample, d);
  const LagSet universe = options.candidates.value_or(LagSet::range(d));
  if (universe.empty()) throw Error("BIC candidate set is empty");
  if (universe.max() > d) throw Error("BIC candidates must lie in 1..d");
  const int size = static_cast<int>(universe.size());
  const int minl = options.minl;
  const int maxl = options.maxl.value_or(size);
  if (minl < 1) throw Error("minl must be at least 1");
  if (minl > maxl) throw Error("minl must not exceed maxl");
  if (maxl > size) throw Error("maxl exceeds the number of candidate lags");
  if (!(options.xi > 0.0)) throw Error("xi must be positive");

  std::uint64_t total_sets = 0;
  for (int l = minl; l <= maxl; ++l) {
    total_sets += binomial(static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(l));
    if (total_sets > options.candidate_budget) {
      throw BudgetExceeded("BIC search needs more than " + std::to_string(options.candidate_budget) +
                           " candidate sets");
    }
  }

  const auto counts = counts_table(sample, d);
  SelectionResult result;
  result.method = SelectionMethod::kBic;

  for (int l = minl; l <= maxl; ++l) {
    // All size-l combinations of candidate positions in lexicographic order.
    std::vector<int> flat;
    std::vector<int> idx(static_cast<std::size_t>(l));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      for (int p : idx) flat.push_back(universe[static_cast<std::size_t>(p)]);
      int pos = l - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == size - l + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int q = pos + 1; q < l; ++q) {
        idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
      }
    }
    const std::size_t sets = flat.size() / static_cast<std::size_t>(l);
    std::vector<double> values(sets);
    parallel_for(sets, parallelism, [&](std::size_t s) {
      auto first = flat.begin() + static_cast<std::ptrdiff_t>(s * l);
      LagSet lags(std::vector<int>(first, first + l));
      values[s] = bic_value(counts, lags, options.xi, options.single_matrix, options.indep_part);
    });
    std::size_t best = 0;
    for (std::size_t s = 0; s < sets; ++s) {
      if (options.keep_all) {
        auto first = flat.begin() + static_cast<std::ptrdiff_t>(s * l);
        result.bic_all.push_back({LagSet(std::vector<int>(first, first + l)), values[s]});
      }
      if (values[s] < values[best]) best = s;
    }
    auto first = flat.begin() + static_cast<std::ptrdiff_t>(best * l);
    BicCandidate winner{LagSet(std::vector<int>(first, first + l)), values[best]};
    if (options.by_size) result.bic_by_size.push_back(winner);
    if (!result.bic_best || winner.value < result.bic_best->value) result.bic_best = winner;
  }
  result.selected = result.bic_best->lags.values();
  return result;
}

SelectionResult fsc_select(const Sample& sample, int d, int l, const CutParams& params,
                           Parallelism parallelism) {
  params.validate();
  if (d < 1) throw Error("order d must be at least 1");
  if (sample.size() < 2 * (static_cast<std::size_t>(d) + 1)) {
    throw Error("FSC needs at least 2(d+1) = " + std::to_string(2 * (d + 1)) +
                " observations, got " + std::to_string(sample.size()));
  }
  const std::size_t half = sample.size() / 2;
  const auto fs = fs_select(sample.slice(0, half), d, l, parallelism);
  auto cut = cut_select(sample.slice(half, sample.size()), d, LagSet(fs.selected), params, parallelism);
  SelectionResult result;
  result.method = SelectionMethod::kFsc;
  result.selected = std::move(cut.selected);
  result.fs_steps = fs.fs_steps;
  result.cut_decisions = std::move(cut.cut_decisions);
  return result;
}

}  // namespace mtd
