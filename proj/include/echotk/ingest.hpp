// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "echotk/types.hpp"

#include "json.hpp"

namespace echotk {

enum class CommentsFormat { kAuto, kCsv, kJsonl };

struct IngestOptions {
  // strict: any malformed row or unknown channel reference aborts with an
  // error instead of being skipped and counted.
  bool strict = false;
  CommentsFormat comments_format = CommentsFormat::kAuto;
  std::size_t max_rejected_records = 100;
};

struct RejectedRow {
  std::string file;
  std::uint64_t line = 0;
  std::string reason;
};

struct IngestReport {
  std::uint64_t channels_loaded = 0;
  std::uint64_t channel_rows_rejected = 0;
  std::uint64_t comments_accepted = 0;
  std::uint64_t comments_rejected = 0;
  std::uint64_t unknown_channel_skips = 0;
  std::uint64_t distinct_users = 0;
  std::uint64_t distinct_videos = 0;
  std::uint64_t distinct_channels_commented = 0;
  std::vector<RejectedRow> rejected;  // first max_rejected_records only

  nlohmann::ordered_json to_json() const;
};

struct Dataset {
  ChannelTable channels;
  std::vector<CommentEvent> events;
  IngestReport report;
};

// Parses the channels file and streams the comments file in one pass.
// Channels file: CSV with header channel_id,bias_label,factual_label and
// optional bias_score,factual_score override columns.
// Comments file: CSV with header user_id,video_id,channel_id,timestamp, or
// JSON-lines with the same field names (picked by extension unless forced).
Dataset load_dataset(const std::filesystem::path& channels_path,
                     const std::filesystem::path& comments_path,
                     const IngestOptions& options = {});

// Proportion of channels / distinct videos / comments carrying one label.
struct LabelShare {
  std::uint64_t channel_count = 0;
  std::uint64_t video_count = 0;
  std::uint64_t comment_count = 0;
  double channel_share = 0.0;
  double video_share = 0.0;
  double comment_share = 0.0;
};

struct DatasetSummary {
  std::map<BiasLabel, LabelShare> bias_shares;
  std::map<FactualLabel, LabelShare> factual_shares;
  // value -> number of users / channels at that value
  std::map<std::uint64_t, std::uint64_t> comments_per_user;
  std::map<std::uint64_t, std::uint64_t> videos_per_channel;
  std::uint64_t total_channels = 0;
  std::uint64_t total_videos = 0;
  std::uint64_t total_comments = 0;
  std::uint64_t total_users = 0;

  nlohmann::ordered_json to_json() const;
};

// Throws Error when either collection is empty.
DatasetSummary summarize_dataset(const ChannelTable& channels,
                                 const std::vector<CommentEvent>& events);

}  // namespace echotk
