// SPDX-License-Identifier: Apache-2.0
#include "echotk/nullmodel.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>
#include <vector>

#include "echotk/error.hpp"
#include "echotk/rng.hpp"

namespace echotk {

namespace {

inline std::uint64_t edge_key(std::uint32_t user, std::uint32_t item) {
  return (static_cast<std::uint64_t>(user) << 32) | item;
}

}  // namespace

RewireResult ms_rewire(const BipartiteGraph& graph,
                       const RewireConfig& config) {
  if (config.steps == 0) throw Error("ms_rewire: steps must be >= 1");
  if (config.max_retries_per_step == 0) {
    throw Error("ms_rewire: max_retries_per_step must be >= 1");
  }
  const std::uint64_t n_edges = graph.edge_count();
  if (n_edges < 2) throw Error("ms_rewire: graph must have at least 2 edges");

  // Edge list for uniform sampling plus a membership set for O(1) collision
  // checks; both updated in O(1) per accepted swap.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(n_edges);
  std::unordered_set<std::uint64_t> present;
  present.reserve(n_edges * 2);
  for (std::uint32_t u = 0; u < graph.user_count(); ++u) {
    for (std::uint32_t item : graph.user_items[u]) {
      edges.emplace_back(u, item);
      present.insert(edge_key(u, item));
    }
  }

  RewireResult result;
  Rng rng(config.seed);
  for (std::uint64_t step = 0; step < config.steps; ++step) {
    ++result.attempted;
    bool applied = false;
    for (std::uint32_t attempt = 0;
         attempt < config.max_retries_per_step && !applied; ++attempt) {
      const std::uint64_t a = rng.below(n_edges);
      const std::uint64_t b = rng.below(n_edges);
      const auto [u1, c1] = edges[a];
      const auto [u2, c2] = edges[b];
      // Covers a == b, shared endpoints, and genuine duplicates alike: the
      // step is aborted whenever a proposed edge already exists.
      if (present.count(edge_key(u1, c2)) || present.count(edge_key(u2, c1))) {
        continue;
      }
      present.erase(edge_key(u1, c1));
      present.erase(edge_key(u2, c2));
      present.insert(edge_key(u1, c2));
      present.insert(edge_key(u2, c1));
      edges[a] = {u1, c2};
      edges[b] = {u2, c1};
      applied = true;
    }
    if (applied) {
      ++result.accepted;
    } else {
      ++result.aborted;
    }
  }

  BipartiteGraph& out = result.graph;
  out.user_ids = graph.user_ids;
  out.item_ids = graph.item_ids;
  out.user_items.assign(out.user_ids.size(), {});
  for (const auto& [u, item] : edges) {
    out.user_items[u].push_back(item);
  }
  for (auto& items : out.user_items) {
    std::sort(items.begin(), items.end());
  }
  out.rebuild_item_side();  // also re-checks simplicity
  return result;
}

RewireReport rewire_report(const BipartiteGraph& before,
                           const RewireResult& result) {
  const BipartiteGraph& after = result.graph;
  if (before.user_ids != after.user_ids ||
      before.item_ids != after.item_ids) {
    throw Error("rewire_report: graphs are not over the same node sets");
  }

  RewireReport report;
  report.attempted = result.attempted;
  report.accepted = result.accepted;
  report.aborted = result.aborted;
  report.edges = before.edge_count();

  report.degrees_preserved = true;
  for (std::uint32_t u = 0; u < before.user_count(); ++u) {
    if (before.user_degree(u) != after.user_degree(u)) {
      report.degrees_preserved = false;
      break;
    }
  }
  if (report.degrees_preserved) {
    for (std::uint32_t i = 0; i < before.item_count(); ++i) {
      if (before.item_degree(i) != after.item_degree(i)) {
        report.degrees_preserved = false;
        break;
      }
    }
  }

  std::unordered_set<std::uint64_t> before_edges;
  before_edges.reserve(report.edges * 2);
  for (std::uint32_t u = 0; u < before.user_count(); ++u) {
    for (std::uint32_t item : before.user_items[u]) {
      before_edges.insert(edge_key(u, item));
    }
  }
  std::uint64_t shared = 0;
  std::uint64_t after_count = 0;
  std::unordered_set<std::uint64_t> after_edges;
  after_edges.reserve(report.edges * 2);
  bool simple = true;
  for (std::uint32_t u = 0; u < after.user_count(); ++u) {
    for (std::uint32_t item : after.user_items[u]) {
      ++after_count;
      if (!after_edges.insert(edge_key(u, item)).second) simple = false;
      if (before_edges.count(edge_key(u, item))) ++shared;
    }
  }
  report.simple = simple;
  const std::uint64_t united = report.edges + after_count - shared;
  report.edge_jaccard =
      united == 0 ? 1.0
                  : static_cast<double>(shared) / static_cast<double>(united);
  return report;
}

nlohmann::ordered_json RewireReport::to_json() const {
  nlohmann::ordered_json j;
  j["attempted_steps"] = attempted;
  j["accepted_swaps"] = accepted;
  j["aborted_steps"] = aborted;
  j["edges"] = edges;
  j["edge_jaccard"] = edge_jaccard;
  j["degrees_preserved"] = degrees_preserved;
  j["simple"] = simple;
  return j;
}

}  // namespace echotk
