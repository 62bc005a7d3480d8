// SPDX-License-Identifier: Apache-2.0
#include "echotk/indices.hpp"

#include <algorithm>
#include <unordered_map>

#include "echotk/error.hpp"
#include "echotk/exact_sum.hpp"

namespace echotk {

std::vector<UserEngagement> build_engagements(
    const std::vector<CommentEvent>& events) {
  std::unordered_map<std::string, std::map<std::string, std::uint64_t>>
      tallies;
  for (const auto& event : events) {
    ++tallies[event.user_id][event.channel_id];
  }

  std::vector<UserEngagement> engagements;
  engagements.reserve(tallies.size());
  for (auto& [user_id, per_channel] : tallies) {
    UserEngagement engagement;
    engagement.user_id = user_id;
    engagement.n_total = 0;
    for (const auto& [channel, count] : per_channel) {
      engagement.n_total += count;
    }
    engagement.per_channel_comments = std::move(per_channel);
    engagements.push_back(std::move(engagement));
  }
  std::sort(engagements.begin(), engagements.end(),
            [](const UserEngagement& a, const UserEngagement& b) {
              return a.user_id < b.user_id;
            });
  return engagements;
}

std::vector<UserEngagement> filter_min_comments(
    std::vector<UserEngagement> engagements, std::uint64_t threshold) {
  if (threshold < 1) {
    throw Error("filter_min_comments: threshold must be >= 1");
  }
  std::erase_if(engagements, [threshold](const UserEngagement& e) {
    return e.n_total < threshold;
  });
  return engagements;
}

namespace {

double weighted_channel_mean(const UserEngagement& engagement,
                             const ChannelTable& channels,
                             double (*score)(const ChannelRecord&)) {
  if (engagement.n_total == 0 || engagement.per_channel_comments.empty()) {
    throw Error("user \"" + engagement.user_id + "\" has no comments");
  }
  ExactSum sum;
  for (const auto& [channel_id, count] : engagement.per_channel_comments) {
    const ChannelRecord* record = channels.find(channel_id);
    if (!record) {
      throw Error("user \"" + engagement.user_id +
                  "\" references channel \"" + channel_id +
                  "\" with no score");
    }
    sum.add(static_cast<double>(count) * score(*record));
  }
  return sum.value() / static_cast<double>(engagement.n_total);
}

}  // namespace

double political_bias(const UserEngagement& engagement,
                      const ChannelTable& channels) {
  return weighted_channel_mean(
      engagement, channels,
      [](const ChannelRecord& r) { return r.bias_score; });
}

double persistence(const UserEngagement& engagement,
                   const ChannelTable& channels) {
  return weighted_channel_mean(
      engagement, channels,
      [](const ChannelRecord& r) { return r.factual_score; });
}

std::vector<UserProfile> build_profiles(
    const std::vector<UserEngagement>& engagements,
    const ChannelTable& channels) {
  std::vector<UserProfile> profiles;
  profiles.reserve(engagements.size());
  for (const auto& engagement : engagements) {
    UserProfile profile;
    profile.user_id = engagement.user_id;
    profile.p = political_bias(engagement, channels);
    profile.c = persistence(engagement, channels);
    profile.n_total = engagement.n_total;
    profile.h_channels = engagement.h_channels();
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

}  // namespace echotk
