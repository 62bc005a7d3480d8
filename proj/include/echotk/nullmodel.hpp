// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "echotk/graph.hpp"

#include "json.hpp"

namespace echotk {

struct RewireConfig {
  // Attempted swaps; aborted attempts count toward this budget.
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  // Resamples within a step after a collision. 1 means a collision simply
  // consumes the step.
  std::uint32_t max_retries_per_step = 1;
};

inline constexpr std::uint64_t kDefaultRewireStepsPerEdge = 10;

struct RewireResult {
  BipartiteGraph graph;  // structural only: weights do not travel
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  std::uint64_t aborted = 0;
};

// Degree-preserving randomization: each attempted step samples two edges
// (u1,c1),(u2,c2) uniformly with replacement, proposes (u1,c2),(u2,c1), and
// aborts if either proposed edge already exists. Deterministic given seed.
// Requires steps >= 1 and at least 2 edges.
RewireResult ms_rewire(const BipartiteGraph& graph, const RewireConfig& config);

struct RewireReport {
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  std::uint64_t aborted = 0;
  std::uint64_t edges = 0;
  double edge_jaccard = 0.0;  // overlap between before and after edge sets
  bool degrees_preserved = false;
  bool simple = false;

  nlohmann::ordered_json to_json() const;
};

// Compares the original and rewired graphs; throws when they are not over
// the same node sets.
RewireReport rewire_report(const BipartiteGraph& before,
                           const RewireResult& result);

}  // namespace echotk
