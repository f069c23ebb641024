#include "mtd/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "mtd/error.hpp"

namespace mtd {
namespace {

using nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw Error(std::string("missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("field '") + name + "' has the wrong type: " + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const json& doc, const char* name) {
  if (!doc.contains(name) || doc.at(name).is_null()) return std::nullopt;
  return field<T>(doc, name);
}

Alphabet alphabet_from(const json& doc) {
  if (!doc.contains("alphabet")) throw Error("missing field 'alphabet'");
  std::vector<std::string> labels;
  for (const auto& item : doc.at("alphabet")) {
    labels.push_back(item.is_string() ? item.get<std::string>() : item.dump());
  }
  return Alphabet(std::move(labels));
}

json optional_double(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string model_to_json(const MtdModel& model) {
  json doc;
  doc["alphabet"] = model.alphabet.labels();
  doc["lags"] = model.lags.values();
  doc["lambda0"] = model.lambda0;
  doc["lambdas"] = model.lambdas;
  doc["p0"] = model.p0;
  doc["pj"] = model.pj;
  return doc.dump(2);
}

ModelSpec model_spec_from_json(std::string_view text) {
  const json doc = parse(text);
  ModelSpec spec;
  spec.alphabet = alphabet_from(doc);
  spec.lags = LagSet(field<std::vector<int>>(doc, "lags"));
  spec.lambda0 = optional_field<double>(doc, "lambda0");
  spec.lambdas = optional_field<std::vector<double>>(doc, "lambdas");
  spec.p0 = optional_field<Distribution>(doc, "p0");
  spec.pj = optional_field<std::vector<StochasticMatrix>>(doc, "pj");
  spec.single_matrix = optional_field<bool>(doc, "single_matrix").value_or(false);
  spec.indep_part = optional_field<bool>(doc, "indep_part").value_or(true);
  return spec;
}

MtdModel model_from_json(std::string_view text) {
  const json doc = parse(text);
  ModelSpec spec;
  spec.alphabet = alphabet_from(doc);
  spec.lags = LagSet(field<std::vector<int>>(doc, "lags"));
  spec.lambda0 = field<double>(doc, "lambda0");
  spec.lambdas = field<std::vector<double>>(doc, "lambdas");
  spec.p0 = field<Distribution>(doc, "p0");
  spec.pj = field<std::vector<StochasticMatrix>>(doc, "pj");
  // p0 is ignored (and may be all zeros) when lambda0 = 0.
  spec.indep_part = *spec.lambda0 > 0.0;
  // Every block is present, so nothing is sampled.
  RandomSource unused(0);
  return build_model(spec, unused);
}

EmParams em_params_from_json(std::string_view text) {
  const json doc = parse(text);
  EmParams params;
  params.lambdas = field<std::vector<double>>(doc, "lambdas");
  params.p0 = optional_field<Distribution>(doc, "p0").value_or(Distribution{});
  params.pj = field<std::vector<StochasticMatrix>>(doc, "pj");
  return params;
}

std::string em_result_to_json(const EmResult& result, const LagSet& lags) {
  json doc;
  doc["lags"] = lags.values();
  doc["lambdas"] = result.params.lambdas;
  doc["p0"] = result.params.p0;
  doc["pj"] = result.params.pj;
  doc["iterations"] = result.iterations;
  doc["distlogL"] = result.distlogL;
  if (result.oscillations) {
    json osc = json::object();
    for (const auto& [lag, value] : *result.oscillations) osc[std::to_string(lag)] = value;
    doc["oscillations"] = osc;
  }
  return doc.dump(2);
}

std::string selection_to_json(const SelectionResult& result) {
  json doc;
  doc["method"] = to_string(result.method);
  doc["selected"] = result.selected;
  json diagnostics = json::object();
  if (!result.fs_steps.empty()) {
    json steps = json::array();
    for (const auto& s : result.fs_steps) steps.push_back({{"lag", s.lag}, {"nu", s.nu}});
    diagnostics["fs_steps"] = steps;
  }
  if (!result.cut_decisions.empty()) {
    json cuts = json::array();
    for (const auto& c : result.cut_decisions) {
      cuts.push_back({{"lag", c.lag},
                      {"retained", c.retained},
                      {"pairs", c.pairs},
                      {"max_gap", optional_double(c.max_gap)},
                      {"tv_at_max", optional_double(c.tv_at_max)},
                      {"threshold_at_max", optional_double(c.threshold_at_max)}});
    }
    diagnostics["cut_decisions"] = cuts;
  }
  auto candidate = [](const BicCandidate& c) { return json{{"lags", c.lags.values()}, {"bic", c.value}}; };
  if (!result.bic_by_size.empty()) {
    json by_size = json::array();
    for (const auto& c : result.bic_by_size) by_size.push_back(candidate(c));
    diagnostics["bic_by_size"] = by_size;
  }
  if (result.bic_best) diagnostics["bic_best"] = candidate(*result.bic_best);
  if (!result.bic_all.empty()) {
    json all = json::array();
    for (const auto& c : result.bic_all) all.push_back(candidate(c));
    diagnostics["bic_all"] = all;
  }
  doc["diagnostics"] = diagnostics;
  return doc.dump(2);
}

void write_sample_csv(std::ostream& out, const Sample& sample) {
  out << "x\n";
  for (Symbol s : sample.values) out << sample.alphabet.label(s) << '\n';
}

void write_freq_table_csv(std::ostream& out, const FreqTable& table, const Alphabet& alphabet) {
  const auto& lags = table.lag_set();
  const auto& codec = table.codec();
  const std::size_t k = lags.size();
  for (std::size_t pos = 0; pos < k; ++pos) out << 'x' << lags[k - 1 - pos] << ',';
  out << "a,Nxa,Nx,p\n";
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  // Very large context spaces list observed contexts only.
  std::vector<ContextCode> codes;
  if (codec.count() <= kDefaultRowBudget) {
    codes.resize(codec.count());
    for (ContextCode c = 0; c < codec.count(); ++c) codes[c] = c;
  } else {
    codes.assign(table.contexts().begin(), table.contexts().end());
  }
  for (ContextCode code : codes) {
    const auto digits = codec.decode(code);
    const auto row = table.conditional(code);
    for (Symbol a = 0; a < alphabet.size(); ++a) {
      for (Symbol s : digits) out << alphabet.label(s) << ',';
      out << alphabet.label(a) << ',' << table.count(code, a) << ',' << table.context_count(code)
          << ',' << row[a] << '\n';
    }
  }
  out.precision(old_precision);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace mtd
