#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "mtd/em.hpp"
#include "mtd/empirics.hpp"
#include "mtd/lag_selection.hpp"
#include "mtd/model.hpp"

namespace mtd {

// Model documents:
//   {"alphabet": ["0","1"], "lags": [1,15,30], "lambda0": 0.01,
//    "lambdas": [0.39,0.3,0.3], "p0": [0.5,0.5],
//    "pj": [[[p(0|0), p(1|0)], [p(0|1), p(1|1)]], ...],
//    "single_matrix": false, "indep_part": true}
// Alphabet labels may be strings or numbers. Doubles are written with
// round-trip precision.

std::string model_to_json(const MtdModel& model);
/// Fully specified model; every block must be present.
MtdModel model_from_json(std::string_view text);
/// Partial model; absent blocks are sampled by build_model.
ModelSpec model_spec_from_json(std::string_view text);

/// EM parameter documents: {"lambdas": [...], "p0": [...], "pj": [...]}.
EmParams em_params_from_json(std::string_view text);
std::string em_result_to_json(const EmResult& result, const LagSet& lags);

std::string selection_to_json(const SelectionResult& result);

/// Single-column CSV with header "x", oldest observation first.
void write_sample_csv(std::ostream& out, const Sample& sample);

/// Columns: one per lag (oldest first, named x<lag>), a, Nxa, Nx, p.
/// Every context over the lag set is listed, unseen ones with the uniform row,
/// unless the context space exceeds the default row budget; then only
/// observed contexts are written.
void write_freq_table_csv(std::ostream& out, const FreqTable& table, const Alphabet& alphabet);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mtd
