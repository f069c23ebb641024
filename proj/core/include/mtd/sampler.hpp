#pragma once

#include <cstdint>
#include <span>

#include "mtd/empirics.hpp"
#include "mtd/model.hpp"
#include "mtd/random.hpp"

namespace mtd {

struct PerfectSampleOptions {
  /// Upper bound on lag-resolution steps across the whole call.
  std::uint64_t step_cap = 10'000'000;
};

struct PerfectSampleStats {
  std::uint64_t steps = 0;            // lag draws resolved
  std::uint64_t reach_before = 0;     // steps before the output window the recursion reached
};

/// Draws N consecutive symbols from the stationary law of `model` by
/// resolving each time's lag choice backward until an independent draw
/// anchors it. Requires lambda0 > 0.
Sample perfect_sample(const MtdModel& model, std::size_t n, RandomSource& rng,
                      const PerfectSampleOptions& options = {},
                      PerfectSampleStats* stats = nullptr);

/// Simulates N symbols forward from a fixed past (oldest first, at least
/// max(lags) symbols). Not stationary at the start.
Sample forward_sample(const MtdModel& model, std::size_t n, std::span<const Symbol> initial_past,
                      RandomSource& rng);

}  // namespace mtd
