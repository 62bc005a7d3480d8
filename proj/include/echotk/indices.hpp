// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "echotk/types.hpp"

namespace echotk {

// Per-user engagement tally: comment counts per channel, kept in sorted
// channel order so downstream accumulation order is deterministic.
struct UserEngagement {
  std::string user_id;
  std::map<std::string, std::uint64_t> per_channel_comments;
  std::uint64_t n_total = 0;

  std::uint64_t h_channels() const { return per_channel_comments.size(); }
};

// Per-user indices. p is the comment-weighted mean of channel bias scores,
// c the comment-weighted mean of factual scores. Neighborhood fields are
// filled by the graph stage and present iff k_projection_degree >= 1.
struct UserProfile {
  std::string user_id;
  double p = 0.0;  // in [-1, 1]
  double c = 0.0;  // in [0, 1]
  std::uint64_t n_total = 0;
  std::uint64_t h_channels = 0;
  std::uint64_t k_projection_degree = 0;
  std::optional<double> p_neighborhood;
  std::optional<double> c_neighborhood;
};

// One tally per distinct user, sorted by user_id. Empty input -> empty.
std::vector<UserEngagement> build_engagements(
    const std::vector<CommentEvent>& events);

// Keeps users with n_total >= threshold. threshold must be >= 1.
std::vector<UserEngagement> filter_min_comments(
    std::vector<UserEngagement> engagements, std::uint64_t threshold);

inline constexpr std::uint64_t kDefaultMinComments = 10;

// (1/n) * sum over channels of t_j * score_j, accumulated exactly before the
// single division. Throws when a tallied channel is missing from the table.
double political_bias(const UserEngagement& engagement,
                      const ChannelTable& channels);
double persistence(const UserEngagement& engagement,
                   const ChannelTable& channels);

std::vector<UserProfile> build_profiles(
    const std::vector<UserEngagement>& engagements,
    const ChannelTable& channels);

}  // namespace echotk
