#include "mtd/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "mtd/error.hpp"
#include "mtd/io.hpp"
#include "mtd/lag_selection.hpp"
#include "mtd/sampler.hpp"

namespace mtd {
namespace {

using nlohmann::json;

using Bits = std::vector<std::uint64_t>;

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

std::uint64_t and_count(const Bits& x, const Bits& y) {
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < x.size(); ++w) total += static_cast<std::uint64_t>(std::popcount(x[w] & y[w]));
  return total;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

Symbol symbol_field(const json& doc, const char* name, const Alphabet& alphabet) {
  if (!doc.contains(name)) return 0;
  const auto& item = doc.at(name);
  return alphabet.index(item.is_string() ? item.get<std::string>() : item.dump());
}

const char* const kEstimators[] = {"FS", "Oracle", "Naive"};

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw Error("replications must be at least 1");
  if (m.empty()) throw Error("the m grid is empty");
  for (std::size_t len : m) {
    if (len > n) throw Error("every m must be at most n");
    if (len <= static_cast<std::size_t>(fs_d)) throw Error("every m must exceed fs_d");
  }
  if (fs_l < 1 || fs_l > fs_d) throw Error("fs_l must satisfy 1 <= fs_l <= fs_d");
  if (oracle_size < 1 || oracle_size > fs_d) throw Error("oracle_size must satisfy 1 <= size <= fs_d");
  if (oracle_size > oracle_max_size || fs_d > oracle_max_d) {
    throw BudgetExceeded("oracle search over C(" + std::to_string(fs_d) + ", " + std::to_string(oracle_size) +
                         ") subsets exceeds the budget (d <= " + std::to_string(oracle_max_d) +
                         ", size <= " + std::to_string(oracle_max_size) + ")");
  }
  if (naive_order && *naive_order < 1) throw Error("naive_order must be positive");
  if (target_context_symbol >= model.alphabet.size() || target_symbol >= model.alphabet.size()) {
    throw Error("target symbols must belong to the alphabet");
  }
}

ExperimentConfig experiment_config_from_json(std::string_view text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed experiment config: ") + e.what());
  }
  ExperimentConfig config;
  try {
    if (doc.contains("model")) {
      config.model = model_spec_from_json(doc.at("model").dump());
    } else if (doc.contains("model_file")) {
      const auto path = std::filesystem::path(base_dir) / doc.at("model_file").get<std::string>();
      config.model = model_spec_from_json(read_text_file(path.string()));
    } else {
      throw Error("experiment config needs 'model' or 'model_file'");
    }
    config.model_seed = doc.value("model_seed", config.model_seed);
    config.seed = doc.value("seed", config.seed);
    config.replications = doc.value("replications", config.replications);
    config.n = doc.value("n", config.n);
    if (doc.contains("m")) config.m = doc.at("m").get<std::vector<std::size_t>>();
    config.fs_d = doc.value("fs_d", config.fs_d);
    config.fs_l = doc.value("fs_l", config.fs_l);
    if (doc.contains("naive_order") && !doc.at("naive_order").is_null()) {
      config.naive_order = doc.at("naive_order").get<int>();
    }
    config.oracle_size = doc.value("oracle_size", config.oracle_size);
    config.oracle_max_d = doc.value("oracle_max_d", config.oracle_max_d);
    config.oracle_max_size = doc.value("oracle_max_size", config.oracle_max_size);
    config.target_context_symbol = symbol_field(doc, "target_context_symbol", config.model.alphabet);
    config.target_symbol = symbol_field(doc, "target_symbol", config.model.alphabet);
    config.parallelism.workers = doc.value("workers", 1u);
  } catch (const json::exception& e) {
    throw Error(std::string("experiment config: ") + e.what());
  }
  config.validate();
  return config;
}

ContextEstimate estimate_at_constant_context(const Sample& sample, const LagSet& lags, Symbol symbol) {
  const std::size_t A = sample.alphabet.size();
  const auto d = static_cast<std::size_t>(lags.max());
  if (d >= sample.size()) throw Error("max(S) must be smaller than the sample size");
  std::vector<std::uint64_t> counts(A, 0);
  for (std::size_t t = d; t < sample.size(); ++t) {
    bool match = true;
    for (int lag : lags) {
      if (sample[t - static_cast<std::size_t>(lag)] != symbol) {
        match = false;
        break;
      }
    }
    if (match) ++counts[sample[t]];
  }
  ContextEstimate out;
  out.context_count = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  out.conditional.assign(A, 1.0 / static_cast<double>(A));
  if (out.context_count > 0) {
    for (std::size_t a = 0; a < A; ++a) {
      out.conditional[a] = static_cast<double>(counts[a]) / static_cast<double>(out.context_count);
    }
  }
  return out;
}

OracleChoice oracle_select(const Sample& sample, int d, int size, Symbol symbol, std::span<const double> truth) {
  const std::size_t n = sample.size();
  const std::size_t A = sample.alphabet.size();
  if (size < 1 || size > d) throw Error("oracle size must satisfy 1 <= size <= d");
  if (static_cast<std::size_t>(d) >= n) throw Error("oracle order must be smaller than the sample size");

  // match[j-1] has bit t set when t >= j and X_{t-j} equals the context symbol;
  // the AND over a subset therefore also enforces t >= max(S).
  std::vector<Bits> match(static_cast<std::size_t>(d), make_bits(n));
  for (int j = 1; j <= d; ++j) {
    for (std::size_t t = static_cast<std::size_t>(j); t < n; ++t) {
      if (sample[t - static_cast<std::size_t>(j)] == symbol) set_bit(match[static_cast<std::size_t>(j - 1)], t);
    }
  }
  std::vector<Bits> current(A, make_bits(n));
  for (std::size_t t = 0; t < n; ++t) set_bit(current[sample[t]], t);

  OracleChoice best;
  best.distance = std::numeric_limits<double>::infinity();
  std::vector<int> chosen;
  std::vector<Bits> partial(static_cast<std::size_t>(size), make_bits(n));
  Distribution row(A);

  auto visit = [&](auto&& self, int start, int depth) -> void {
    for (int j = start; j <= d - (size - depth - 1); ++j) {
      const Bits& lag_bits = match[static_cast<std::size_t>(j - 1)];
      Bits& acc = partial[static_cast<std::size_t>(depth)];
      if (depth == 0) {
        acc = lag_bits;
      } else {
        const Bits& prev = partial[static_cast<std::size_t>(depth - 1)];
        for (std::size_t w = 0; w < acc.size(); ++w) acc[w] = prev[w] & lag_bits[w];
      }
      chosen.push_back(j);
      if (depth + 1 == size) {
        std::uint64_t total = 0;
        std::vector<std::uint64_t> counts(A);
        for (std::size_t a = 0; a < A; ++a) {
          counts[a] = and_count(acc, current[a]);
          total += counts[a];
        }
        for (std::size_t a = 0; a < A; ++a) {
          row[a] = total > 0 ? static_cast<double>(counts[a]) / static_cast<double>(total)
                             : 1.0 / static_cast<double>(A);
        }
        const double distance = tv_distance(row, truth);
        if (distance < best.distance) {
          best.distance = distance;
          best.lags = LagSet(chosen);
          best.estimate.conditional = row;
          best.estimate.context_count = total;
        }
      } else {
        self(self, j + 1, depth + 1);
      }
      chosen.pop_back();
    }
  };
  visit(visit, 1, 0);
  return best;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

MetricsReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  MetricsReport report;
  {
    RandomSource model_rng = RandomSource(config.model_seed).derive("model");
    report.model = build_model(config.model, model_rng);
  }
  const auto& model = report.model;
  const auto table = transition_table(model);
  const std::vector<Symbol> target_context(model.lags.size(), config.target_context_symbol);
  const auto truth_span = table.row(target_context);
  const Distribution truth(truth_span.begin(), truth_span.end());
  report.true_probability = truth[config.target_symbol];
  report.std_divisor = *std::min_element(truth.begin(), truth.end());
  const int naive_order = config.naive_order.value_or(model.order());
  const LagSet naive_lags = LagSet::range(naive_order);

  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const std::size_t cells_per_rep = config.m.size() * 3;
  std::vector<ReplicationRecord> slots(reps * cells_per_rep);
  const RandomSource base(config.seed);

  auto record = [&](std::size_t rep, std::size_t m, const char* name, const LagSet& lags,
                    const ContextEstimate& estimate) {
    ReplicationRecord r;
    r.replication = rep;
    r.m = m;
    r.estimator = name;
    r.lags = lags.values();
    r.estimate = estimate.conditional[config.target_symbol];
    r.delta = std::abs(r.estimate - report.true_probability);
    r.delta_std = r.delta / report.std_divisor;
    r.fallback = estimate.context_count == 0;
    return r;
  };

  parallel_for(reps, config.parallelism, [&](std::size_t rep) {
    RandomSource rng = base.derive(static_cast<std::uint64_t>(rep));
    const Sample full = perfect_sample(model, config.n, rng);
    for (std::size_t mi = 0; mi < config.m.size(); ++mi) {
      const std::size_t m = config.m[mi];
      const Sample prefix = full.slice(0, m);
      const auto fs = fs_select(prefix, config.fs_d, config.fs_l);
      const LagSet fs_lags(fs.selected);
      const auto oracle =
          oracle_select(prefix, config.fs_d, config.oracle_size, config.target_context_symbol, truth);
      const std::size_t base_slot = rep * cells_per_rep;
      slots[base_slot + 0 * config.m.size() + mi] =
          record(rep, m, kEstimators[0], fs_lags,
                 estimate_at_constant_context(prefix, fs_lags, config.target_context_symbol));
      slots[base_slot + 1 * config.m.size() + mi] = record(rep, m, kEstimators[1], oracle.lags, oracle.estimate);
      slots[base_slot + 2 * config.m.size() + mi] =
          record(rep, m, kEstimators[2], naive_lags,
                 estimate_at_constant_context(prefix, naive_lags, config.target_context_symbol));
    }
  });
  report.records = std::move(slots);

  for (std::size_t e = 0; e < 3; ++e) {
    for (std::size_t mi = 0; mi < config.m.size(); ++mi) {
      std::vector<double> deltas;
      std::vector<double> deltas_std;
      CellSummary cell;
      cell.estimator = kEstimators[e];
      cell.m = config.m[mi];
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& r = report.records[rep * cells_per_rep + e * config.m.size() + mi];
        deltas.push_back(r.delta);
        deltas_std.push_back(r.delta_std);
        cell.fallbacks += r.fallback ? 1 : 0;
      }
      cell.mean = mean_of(deltas);
      cell.mean_std = mean_of(deltas_std);
      cell.se = standard_error(deltas);
      cell.se_std = standard_error(deltas_std);
      cell.q1 = quantile(deltas, 0.25);
      cell.median = quantile(deltas, 0.5);
      cell.q3 = quantile(deltas, 0.75);
      report.cells.push_back(cell);
    }
  }
  return report;
}

std::string report_to_csv(const MetricsReport& report) {
  std::string out = "estimator,m,metric,value\n";
  for (const auto& c : report.cells) {
    const std::pair<const char*, double> metrics[] = {
        {"mean", c.mean}, {"mean_std", c.mean_std}, {"se", c.se},         {"se_std", c.se_std},
        {"q1", c.q1},     {"median", c.median},     {"q3", c.q3},         {"fallbacks", static_cast<double>(c.fallbacks)}};
    for (const auto& [name, value] : metrics) {
      out += c.estimator + ',' + std::to_string(c.m) + ',' + name + ',' + format_double(value) + '\n';
    }
  }
  return out;
}

std::string report_to_json(const MetricsReport& report) {
  json doc;
  doc["model"] = json::parse(model_to_json(report.model));
  doc["true_probability"] = report.true_probability;
  doc["std_divisor"] = report.std_divisor;
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"estimator", c.estimator},
                     {"m", c.m},
                     {"mean", c.mean},
                     {"mean_std", c.mean_std},
                     {"se", c.se},
                     {"se_std", c.se_std},
                     {"q1", c.q1},
                     {"median", c.median},
                     {"q3", c.q3},
                     {"fallbacks", c.fallbacks}});
  }
  doc["cells"] = cells;
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"replication", r.replication},
                       {"m", r.m},
                       {"estimator", r.estimator},
                       {"lags", r.lags},
                       {"estimate", r.estimate},
                       {"delta", r.delta},
                       {"delta_std", r.delta_std},
                       {"fallback", r.fallback}});
  }
  doc["records"] = records;
  return doc.dump(2);
}

}  // namespace mtd
