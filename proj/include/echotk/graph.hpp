// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "echotk/indices.hpp"
#include "echotk/types.hpp"

namespace echotk {

// Unweighted simple bipartite graph between users and items (channels by
// default, videos under the alternative projection basis). Adjacency is
// navigable from both sides; per-edge comment counts ride along in a side
// array and are dropped by structural operations such as rewiring.
struct BipartiteGraph {
  std::vector<std::string> user_ids;  // index -> id, sorted
  std::vector<std::string> item_ids;  // index -> id, sorted
  std::vector<std::vector<std::uint32_t>> user_items;  // sorted per user
  std::vector<std::vector<std::uint32_t>> item_users;  // sorted per item
  // Parallel to user_items; empty when the graph is purely structural.
  std::vector<std::vector<std::uint64_t>> edge_weights;

  std::size_t user_count() const { return user_ids.size(); }
  std::size_t item_count() const { return item_ids.size(); }
  std::uint64_t edge_count() const;
  bool has_weights() const { return !edge_weights.empty(); }
  std::uint64_t user_degree(std::uint32_t u) const {
    return user_items[u].size();
  }
  std::uint64_t item_degree(std::uint32_t i) const {
    return item_users[i].size();
  }

  // Builds item_users from user_items and validates simplicity and index
  // bounds. Throws Error on duplicate edges or out-of-range endpoints.
  void rebuild_item_side();
};

// User-channel graph: one edge per (user, channel) with t >= 1 comments.
BipartiteGraph build_bipartite(const std::vector<UserEngagement>& engagements);

// User-video graph over the given user set (the filtered population).
// Events for other users are ignored.
BipartiteGraph build_video_bipartite(const std::vector<CommentEvent>& events,
                                     const std::vector<std::string>& users);

inline constexpr std::size_t kDefaultProjectionCap = 10000;

// Materialized one-mode projection used as the test oracle: symmetric 0/1
// adjacency with zero diagonal, i.e. the binarized off-diagonal of B^t B.
// Returned as sorted neighbor lists. Throws when the user count exceeds
// max_users, directing the caller to the streaming path.
std::vector<std::vector<std::uint32_t>> project_users_small(
    const BipartiteGraph& graph, std::size_t max_users = kDefaultProjectionCap);

struct NeighborhoodStats {
  std::uint32_t user = 0;
  std::uint64_t k = 0;  // distinct co-commenting neighbors
  std::optional<double> p_avg;
  std::optional<double> c_avg;
};

struct NeighborhoodOptions {
  // Items with more commenters than this get precomputed exact score totals;
  // single-item users of such items are then O(1).
  std::size_t popular_item_cutoff = 1024;
  unsigned threads = 0;  // 0 -> hardware concurrency
};

// Unweighted mean of p (and c) over each user's distinct co-commenting
// neighbors, computed by streaming per-item commenter lists; the dense
// projection is never materialized. Users with no neighbors get k = 0 and
// no averages. Profiles must cover every graph user (matched by user_id).
std::vector<NeighborhoodStats> neighborhood_averages(
    const BipartiteGraph& graph, const std::vector<UserProfile>& profiles,
    const NeighborhoodOptions& options = {});

// Copies k / p_avg / c_avg into the matching profiles.
void attach_neighborhood_stats(const BipartiteGraph& graph,
                               const std::vector<NeighborhoodStats>& stats,
                               std::vector<UserProfile>& profiles);

}  // namespace echotk
