#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mtd/data.hpp"
#include "mtd/em.hpp"
#include "mtd/error.hpp"
#include "mtd/experiment.hpp"
#include "mtd/io.hpp"
#include "mtd/lag_selection.hpp"
#include "mtd/metrics.hpp"
#include "mtd/model.hpp"
#include "mtd/sampler.hpp"

namespace mtd::cli {
namespace {

/// Flag combinations that parse but make no sense together.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputFlags {
  std::string path;
  std::string column;
  bool reverse = false;
  std::string header = "auto";
  std::string na = "error";

  void add_to(CLI::App& app, bool required = true) {
    auto* opt = app.add_option("--input,-i", path, "CSV file, one observation per row");
    if (required) opt->required();
    app.add_option("--column", column, "column name or zero-based index");
    app.add_flag("--reverse", reverse, "input lists the newest observation first");
    app.add_option("--header", header, "header row: auto, yes or no")
        ->check(CLI::IsMember({"auto", "yes", "no"}));
    app.add_option("--na", na, "missing values: error or drop-edges")
        ->check(CLI::IsMember({"error", "drop-edges"}));
  }

  IngestOptions options() const {
    IngestOptions o;
    if (!column.empty()) o.column = column;
    o.reverse = reverse;
    o.header = header == "yes" ? HeaderMode::kYes : header == "no" ? HeaderMode::kNo : HeaderMode::kAuto;
    o.na_policy = na == "drop-edges" ? NaPolicy::kDropEdges : NaPolicy::kError;
    return o;
  }

  Sample load() const { return ingest_series(path, options()); }
};

LagSet parse_lags(const std::string& text) {
  std::vector<int> lags;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      lags.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("invalid lag '" + item + "' in '" + text + "'");
    }
  }
  try {
    return LagSet(std::move(lags));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::string negated_header(const LagSet& lags) {
  std::string out;
  for (std::size_t i = lags.size(); i-- > 0;) {
    out += "-" + std::to_string(lags[i]);
    if (i) out += ',';
  }
  return out;
}

void print_lags_line(std::ostream& out, const std::vector<int>& lags) {
  for (std::size_t i = 0; i < lags.size(); ++i) out << (i ? " " : "") << lags[i];
  out << '\n';
}

// Oscillations keyed by lag, printed "-1 -15 -30" over their values.
void print_oscillations(std::ostream& out, const std::map<int, double>& osc) {
  std::ostringstream head;
  std::ostringstream values;
  values << std::setprecision(7);
  for (const auto& [lag, value] : osc) {
    std::ostringstream v;
    v << std::setprecision(7) << value;
    const std::string name = "-" + std::to_string(lag);
    const std::size_t width = std::max(name.size(), v.str().size()) + 1;
    head << std::setw(static_cast<int>(width)) << name;
    values << std::setw(static_cast<int>(width)) << v.str();
  }
  out << head.str() << '\n' << values.str() << '\n';
}

void print_matrix(std::ostream& out, const StochasticMatrix& m, const Alphabet& alphabet) {
  out << std::setprecision(7);
  out << std::setw(4) << "";
  for (const auto& label : alphabet.labels()) out << std::setw(12) << label;
  out << '\n';
  for (std::size_t b = 0; b < m.size(); ++b) {
    out << std::setw(4) << alphabet.label(static_cast<Symbol>(b));
    for (double v : m[b]) out << std::setw(12) << v;
    out << '\n';
  }
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw Error("cannot write '" + path + "'");
  return file;
}

// ---------------------------------------------------------------- simulate

struct SimulateCommand {
  std::string model_path;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string out_path;
  bool single_matrix = false;
  bool no_indep = false;

  void add_to(CLI::App& app) {
    app.add_option("--model,-m", model_path, "model JSON")->required();
    app.add_option("--n", n, "sample length")->required()->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "random seed");
    app.add_option("--stream", stream, "random stream id");
    app.add_option("--out,-o", out_path, "output CSV (stdout when absent)");
    app.add_flag("--single-matrix", single_matrix, "replicate one lag matrix across all lags");
    app.add_flag("--no-indep", no_indep, "model without an independent part");
  }

  int run(std::ostream& out) const {
    ModelSpec spec = model_spec_from_json(read_text_file(model_path));
    if (no_indep) {
      if (spec.p0 || (spec.lambda0 && *spec.lambda0 > 0.0)) {
        throw UsageError("--no-indep conflicts with the model's explicit p0 / lambda0");
      }
      spec.indep_part = false;
    }
    if (single_matrix) spec.single_matrix = true;
    RandomSource rng(seed, stream);
    RandomSource model_rng = rng.derive("model");
    const MtdModel model = build_model(spec, model_rng);
    RandomSource sample_rng = rng.derive("sample");
    const Sample sample = perfect_sample(model, n, sample_rng);
    auto file = open_output(out_path);
    write_sample_csv(file ? *file : out, sample);
    return 0;
  }
};

// ------------------------------------------------------------------ select

struct SelectCommand {
  InputFlags input;
  std::string method;
  int d = 0;
  int l = 0;
  std::string lags;
  CutParams cut;
  std::optional<double> xi;
  int minl = 1;
  std::optional<int> maxl;
  bool single_matrix = false;
  bool no_indep = false;
  bool byl = false;
  std::string json_path;
  unsigned workers = 1;

  void add_to(CLI::App& app) {
    input.add_to(app);
    app.add_option("--method", method, "fs, cut, bic or fsc")
        ->required()
        ->check(CLI::IsMember({"fs", "cut", "bic", "fsc"}, CLI::ignore_case));
    app.add_option("--d", d, "order: largest lag considered")->required()->check(CLI::PositiveNumber);
    app.add_option("--l", l, "number of FS steps");
    app.add_option("--S", lags, "candidate lags, comma separated");
    app.add_option("--alpha", cut.alpha, "CUT threshold alpha");
    app.add_option("--mu", cut.mu, "CUT threshold mu");
    app.add_option("--xi", xi, "CUT threshold xi / BIC penalty constant");
    app.add_option("--minl", minl, "smallest BIC set size");
    app.add_option("--maxl", maxl, "largest BIC set size");
    app.add_flag("--single-matrix", single_matrix, "BIC penalty for a single-matrix MTD");
    app.add_flag("--no-indep", no_indep, "BIC penalty without an independent part");
    app.add_flag("--byl", byl, "report the best BIC set of every size");
    app.add_option("--json", json_path, "write the full result as JSON");
    app.add_option("--workers", workers, "worker threads (0 = all cores)");
  }

  int run(std::ostream& out) {
    const auto m = parse_selection_method(method);
    const bool bic = m == SelectionMethod::kBic;
    if (!bic && (single_matrix || no_indep || byl || maxl || minl != 1)) {
      throw UsageError("--single-matrix, --no-indep, --byl, --minl and --maxl apply to --method bic only");
    }
    if ((m == SelectionMethod::kFs || m == SelectionMethod::kFsc) && l < 1) {
      throw UsageError("--l is required for --method " + method);
    }
    if (m == SelectionMethod::kFs && !lags.empty()) throw UsageError("--S does not apply to --method fs");
    const Sample sample = input.load();
    const Parallelism par{workers};
    if (xi) cut.xi = *xi;
    SelectionResult result;
    switch (m) {
      case SelectionMethod::kFs:
        result = fs_select(sample, d, l, par);
        break;
      case SelectionMethod::kCut:
        result = cut_select(sample, d, lags.empty() ? LagSet::range(d) : parse_lags(lags), cut, par);
        break;
      case SelectionMethod::kFsc:
        result = fsc_select(sample, d, l, cut, par);
        break;
      case SelectionMethod::kBic: {
        BicOptions options;
        if (!lags.empty()) options.candidates = parse_lags(lags);
        options.minl = minl;
        options.maxl = maxl;
        options.xi = xi.value_or(0.5);
        options.single_matrix = single_matrix;
        options.indep_part = !no_indep;
        options.by_size = byl;
        result = bic_select(sample, d, options, par);
        break;
      }
    }
    print(out, result);
    if (!json_path.empty()) write_text_file(json_path, selection_to_json(result) + "\n");
    return 0;
  }

  static void print(std::ostream& out, const SelectionResult& r) {
    out << std::setprecision(7);
    if (!r.fs_steps.empty()) {
      out << "  Step Selected_Lag         nu\n";
      for (std::size_t i = 0; i < r.fs_steps.size(); ++i) {
        out << std::setw(6) << i + 1 << std::setw(13) << r.fs_steps[i].lag << std::setw(11)
            << r.fs_steps[i].nu << '\n';
      }
    }
    if (!r.cut_decisions.empty()) {
      out << "   Lag Decision      max_gap\n";
      for (const auto& c : r.cut_decisions) {
        out << std::setw(6) << c.lag << std::setw(9) << (c.retained ? "keep" : "cut") << ' ' << std::setw(12);
        if (c.max_gap) {
          out << *c.max_gap;
        } else {
          out << "NA";
        }
        out << '\n';
      }
    }
    if (!r.bic_by_size.empty()) {
      std::ostringstream head;
      std::ostringstream values;
      values << std::setprecision(7);
      auto column = [&](const std::string& name, double value) {
        std::ostringstream v;
        v << std::setprecision(7) << value;
        const int width = static_cast<int>(std::max(name.size(), v.str().size()) + 2);
        head << std::setw(width) << name;
        values << std::setw(width) << v.str();
      };
      for (const auto& c : r.bic_by_size) column(to_string(c.lags), c.value);
      column("smallest: " + to_string(r.bic_best->lags), r.bic_best->value);
      out << head.str() << '\n' << values.str() << '\n';
    } else if (r.bic_best) {
      out << "BIC " << r.bic_best->value << '\n';
    }
    print_lags_line(out, r.selected);
  }
};

// ------------------------------------------------------------------- probs

struct ProbsCommand {
  InputFlags input;
  std::string lags;
  std::optional<int> d;
  bool matrix_form = false;
  std::string csv_path;

  void add_to(CLI::App& app) {
    input.add_to(app);
    app.add_option("--S", lags, "lags, comma separated")->required();
    app.add_option("--d", d, "order used for counting (max(S) when absent)");
    app.add_flag("--matrix-form", matrix_form, "print one row per context");
    app.add_option("--csv", csv_path, "write the frequency table as CSV");
  }

  int run(std::ostream& out) const {
    const LagSet S = parse_lags(lags);
    if (S.empty()) throw UsageError("--S needs at least one lag");
    const Sample sample = input.load();
    const auto counts = counts_table(sample, d.value_or(S.max()));
    const auto table = freq_table(counts, S);
    const auto& alphabet = sample.alphabet;
    const auto& codec = table.codec();
    if (codec.count() > kDefaultRowBudget) throw BudgetExceeded("too many contexts to print");
    out << std::setprecision(7) << std::fixed;
    const std::string past = "past_{ " + negated_header(S) + " }";
    if (matrix_form) {
      out << std::setw(static_cast<int>(std::max<std::size_t>(S.size(), 3))) << "";
      for (const auto& label : alphabet.labels()) out << std::setw(12) << label;
      out << '\n';
      for (ContextCode code = 0; code < codec.count(); ++code) {
        const auto digits = codec.decode(code);
        out << std::setw(static_cast<int>(std::max<std::size_t>(S.size(), 3)))
            << context_label(alphabet, digits);
        for (double p : table.conditional(code)) out << std::setw(12) << p;
        out << '\n';
      }
    } else {
      out << std::setw(6) << "" << std::setw(static_cast<int>(past.size()) + 1) << past << "   a p(a|past)\n";
      std::size_t row = 1;
      for (ContextCode code = 0; code < codec.count(); ++code) {
        const auto digits = codec.decode(code);
        const auto p = table.conditional(code);
        for (Symbol a = 0; a < alphabet.size(); ++a) {
          out << std::setw(6) << row++ << std::setw(static_cast<int>(past.size()) + 1)
              << context_label(alphabet, digits) << std::setw(4) << alphabet.label(a) << std::setw(10) << p[a]
              << '\n';
        }
      }
    }
    out.unsetf(std::ios::floatfield);
    if (!csv_path.empty()) {
      std::ofstream file(csv_path);
      if (!file) throw Error("cannot write '" + csv_path + "'");
      write_freq_table_csv(file, table, alphabet);
    }
    return 0;
  }
};

// ------------------------------------------------------------- oscillation

struct OscillationCommand {
  std::string model_path;
  InputFlags input;
  std::string lags;

  void add_to(CLI::App& app) {
    app.add_option("--model,-m", model_path, "model JSON: exact oscillations");
    input.add_to(app, false);
    app.add_option("--S", lags, "lags for the sample estimate");
  }

  int run(std::ostream& out) const {
    const bool from_model = !model_path.empty();
    const bool from_sample = !input.path.empty();
    if (from_model == from_sample) throw UsageError("give either --model or --input with --S");
    if (from_model) {
      if (!lags.empty()) throw UsageError("--S applies to sample estimates only");
      print_oscillations(out, oscillation_exact(model_from_json(read_text_file(model_path))));
    } else {
      if (lags.empty()) throw UsageError("--S is required with --input");
      print_oscillations(out, oscillation_empirical(input.load(), parse_lags(lags)));
    }
    return 0;
  }
};

// ------------------------------------------------------------------ fit-em

struct FitEmCommand {
  InputFlags input;
  std::string lags;
  std::string init_path;
  std::string min_increase = "0.01";
  int iterations = 100;
  bool oscillations = false;
  std::optional<double> floor;
  std::string json_path;

  void add_to(CLI::App& app) {
    input.add_to(app);
    app.add_option("--S", lags, "lags, comma separated")->required();
    app.add_option("--init", init_path, "initial parameters JSON")->required();
    app.add_option("--M", min_increase, "stop when the log-likelihood gain is below M; 'none' disables");
    app.add_option("--niter", iterations, "maximum number of updates")->check(CLI::PositiveNumber);
    app.add_flag("--oscillations", oscillations, "report oscillations of the fitted model");
    app.add_option("--floor", floor, "probability floor applied to the initial parameters");
    app.add_option("--json", json_path, "write the result as JSON");
  }

  int run(std::ostream& out) const {
    EmOptions options;
    if (min_increase == "none" || min_increase == "null" || min_increase == "NULL") {
      options.min_increase.reset();
    } else {
      try {
        options.min_increase = std::stod(min_increase);
      } catch (const std::logic_error&) {
        throw UsageError("--M expects a number or 'none'");
      }
    }
    options.max_iterations = iterations;
    options.want_oscillations = oscillations;
    options.probability_floor = floor;
    const LagSet S = parse_lags(lags);
    const Sample sample = input.load();
    const auto init = em_params_from_json(read_text_file(init_path));
    const auto result = em_fit(sample, S, init, options);
    const auto& alphabet = sample.alphabet;

    out << std::setprecision(7);
    out << "$lambdas\n";
    out << std::setw(12) << "lam-0";
    for (int lag : S) out << std::setw(12) << ("lam-" + std::to_string(lag));
    out << '\n';
    for (double v : result.params.lambdas) out << std::setw(12) << v;
    out << "\n\n$pj\n";
    for (std::size_t i = 0; i < S.size(); ++i) {
      out << "$pj$`p_-" << S[i] << "`\n";
      print_matrix(out, result.params.pj[i], alphabet);
      out << '\n';
    }
    if (result.params.lambdas[0] > 0.0) {
      out << "$p0\n";
      for (const auto& label : alphabet.labels()) out << std::setw(12) << ("p_0(" + label + ")");
      out << '\n';
      for (double v : result.params.p0) out << std::setw(12) << v;
      out << "\n\n";
    }
    out << "$iterations\n" << result.iterations << "\n\n$distlogL\n";
    for (double v : result.distlogL) out << ' ' << v;
    out << '\n';
    if (result.oscillations) {
      out << "\n$oscillations\n";
      print_oscillations(out, *result.oscillations);
    }
    if (!json_path.empty()) write_text_file(json_path, em_result_to_json(result, S) + "\n");
    return 0;
  }
};

// -------------------------------------------------------------- discretize

struct DiscretizeCommand {
  InputFlags input;
  int k = 2;
  std::string out_path;

  void add_to(CLI::App& app) {
    input.add_to(app);
    app.add_option("--k", k, "number of equal-range bins")->check(CLI::Range(2, 1 << 20));
    app.add_option("--out,-o", out_path, "output CSV (stdout when absent)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    const auto series = read_numeric_series(input.path, input.options());
    const auto result = discretize(series, k);
    err << std::setprecision(10);
    for (int b = 0; b < k; ++b) {
      const bool last = b + 1 == k;
      err << "bin " << b + 1 << ": [" << result.edges[static_cast<std::size_t>(b)] << ", "
          << result.edges[static_cast<std::size_t>(b) + 1] << (last ? "]" : ")") << '\n';
    }
    auto file = open_output(out_path);
    write_sample_csv(file ? *file : out, result.sample);
    return 0;
  }
};

// ------------------------------------------------------------------- bench

struct BenchCommand {
  std::string config_path;
  std::string out_prefix = "bench";
  std::optional<unsigned> workers;

  void add_to(CLI::App& app) {
    app.add_option("--config,-c", config_path, "experiment config JSON")->required();
    app.add_option("--out-prefix", out_prefix, "writes <prefix>.csv and <prefix>.json");
    app.add_option("--workers", workers, "worker threads (0 = all cores)");
  }

  int run(std::ostream& out) const {
    const auto base = std::filesystem::path(config_path).parent_path().string();
    auto config = experiment_config_from_json(read_text_file(config_path), base.empty() ? "." : base);
    if (workers) config.parallelism.workers = *workers;
    const auto report = run_experiment(config);
    write_text_file(out_prefix + ".csv", report_to_csv(report));
    write_text_file(out_prefix + ".json", report_to_json(report) + "\n");
    out << std::setprecision(5) << std::fixed;
    out << std::setw(8) << "m";
    for (const char* e : {"FS", "Oracle", "Naive"}) out << std::setw(12) << e;
    out << '\n';
    const std::size_t grid = config.m.size();
    for (std::size_t mi = 0; mi < grid; ++mi) {
      out << std::setw(8) << config.m[mi];
      for (std::size_t e = 0; e < 3; ++e) out << std::setw(12) << report.cells[e * grid + mi].mean;
      out << '\n';
    }
    out.unsetf(std::ios::floatfield);
    return 0;
  }
};

// ----------------------------------------------------------------- predict

struct PredictCommand {
  InputFlags input;
  std::string lags;
  int d = 0;
  int l = 0;
  std::size_t test_size = 0;
  std::string positive;
  std::string rule = "argmax";
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    input.add_to(app);
    app.add_option("--S", lags, "lags used for prediction");
    app.add_option("--d", d, "FS order when selecting lags on the training part");
    app.add_option("--l", l, "FS steps when selecting lags on the training part");
    app.add_option("--test-size", test_size, "number of final observations held out")
        ->required()
        ->check(CLI::PositiveNumber);
    app.add_option("--positive", positive, "positive class label")->required();
    app.add_option("--rule", rule, "argmax or sample")->check(CLI::IsMember({"argmax", "sample"}));
    app.add_option("--seed", seed, "seed for --rule sample");
  }

  int run(std::ostream& out) const {
    const bool fixed = !lags.empty();
    const bool select = d > 0 || l > 0;
    if (fixed == select) throw UsageError("give either --S or both --d and --l");
    if (select && (d < 1 || l < 1)) throw UsageError("--d and --l must both be positive");
    const Sample sample = input.load();
    if (test_size >= sample.size()) throw Error("--test-size must leave training observations");
    const std::size_t split = sample.size() - test_size;
    const Sample train = sample.slice(0, split);
    const LagSet S = fixed ? parse_lags(lags) : LagSet(fs_select(train, d, l).selected);
    if (static_cast<std::size_t>(S.max()) > split) throw Error("max(S) exceeds the training history");
    const auto table = freq_table(counts_table(train, S.max()), S);
    RandomSource rng(seed);
    const auto predicted = predict_next(table, sample, split,
                                        rule == "sample" ? PredictionRule::kSample : PredictionRule::kArgmax, &rng);
    const std::span<const Symbol> actual(sample.values.begin() + static_cast<std::ptrdiff_t>(split),
                                         sample.values.end());
    const auto m = classification_metrics(predicted, actual, sample.alphabet.index(positive));
    out << "lags: " << to_string(S) << '\n';
    out << "TP " << m.tp << "  TN " << m.tn << "  FP " << m.fp << "  FN " << m.fn << '\n';
    out << std::setprecision(4) << std::fixed;
    out << "Accuracy     " << 100 * m.accuracy << "%\n";
    out << "Precision    " << 100 * m.precision << "%\n";
    out << "Sensitivity  " << 100 * m.sensitivity << "%\n";
    out << "Specificity  " << 100 * m.specificity << "%\n";
    out << "F1-score     " << 100 * m.f1 << "%\n";
    out.unsetf(std::ios::floatfield);
    return 0;
  }
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixture transition distribution toolkit", "mtd"};
  app.require_subcommand(1);

  SimulateCommand simulate;
  SelectCommand select;
  ProbsCommand probs;
  OscillationCommand oscillation;
  FitEmCommand fit_em;
  DiscretizeCommand discretize_cmd;
  BenchCommand bench;
  PredictCommand predict;

  auto* simulate_app = app.add_subcommand("simulate", "perfect sample from a model JSON");
  simulate.add_to(*simulate_app);
  auto* select_app = app.add_subcommand("select", "estimate the relevant lags");
  select.add_to(*select_app);
  auto* probs_app = app.add_subcommand("probs", "empirical transition probabilities");
  probs.add_to(*probs_app);
  auto* oscillation_app = app.add_subcommand("oscillation", "lag oscillations of a model or a sample");
  oscillation.add_to(*oscillation_app);
  auto* fit_em_app = app.add_subcommand("fit-em", "EM estimate of the MTD parameters");
  fit_em.add_to(*fit_em_app);
  auto* discretize_app = app.add_subcommand("discretize", "equal-range binning of a numeric column");
  discretize_cmd.add_to(*discretize_app);
  auto* bench_app = app.add_subcommand("bench", "Monte Carlo comparison of FS, Oracle and Naive");
  bench.add_to(*bench_app);
  auto* predict_app = app.add_subcommand("predict", "one-step prediction and classification metrics");
  predict.add_to(*predict_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (simulate_app->parsed()) return simulate.run(out);
    if (select_app->parsed()) return select.run(out);
    if (probs_app->parsed()) return probs.run(out);
    if (oscillation_app->parsed()) return oscillation.run(out);
    if (fit_em_app->parsed()) return fit_em.run(out);
    if (discretize_app->parsed()) return discretize_cmd.run(out, err);
    if (bench_app->parsed()) return bench.run(out);
    if (predict_app->parsed()) return predict.run(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace mtd::cli
