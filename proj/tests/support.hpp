#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mtd/empirics.hpp"
#include "mtd/io.hpp"
#include "mtd/model.hpp"
#include "mtd/random.hpp"

namespace mtd::testing {

inline std::string data_path(const std::string& name) { return std::string(MTD_TEST_DATA_DIR) + "/" + name; }

// Lags {1,15,30}, entered verbatim from the published printout.
inline MtdModel published_model() { return model_from_json(read_text_file(data_path("mtd_lags_1_15_30.json"))); }

inline Sample binary_sample(const std::vector<int>& values, std::size_t alphabet_size = 2) {
  std::vector<Symbol> v(values.begin(), values.end());
  return Sample(Alphabet::numbered(alphabet_size), std::move(v));
}

inline Sample iid_sample(std::size_t n, std::size_t alphabet_size, RandomSource& rng) {
  std::vector<Symbol> v(n);
  for (auto& s : v) s = static_cast<Symbol>(rng.next_u64() % alphabet_size);
  return Sample(Alphabet::numbered(alphabet_size), std::move(v));
}

// Random model over `lags` with every block sampled.
inline MtdModel random_model(const LagSet& lags, std::size_t alphabet_size, RandomSource& rng,
                             double lambda0 = -1.0) {
  ModelSpec spec;
  spec.alphabet = Alphabet::numbered(alphabet_size);
  spec.lags = lags;
  if (lambda0 >= 0.0) spec.lambda0 = lambda0;
  return build_model(spec, rng);
}

class TempDir {
 public:
  TempDir() {
    RandomSource rng(reinterpret_cast<std::uintptr_t>(this));
    path_ = std::filesystem::temp_directory_path() / ("mtd-test-" + std::to_string(rng.next_u64()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace mtd::testing
