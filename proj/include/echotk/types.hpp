// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "echotk/labels.hpp"

namespace echotk {

// One channel with its categorical labels and their numeric scores.
// bias_score/factual_score normally come from the label mappings; explicit
// in-range overrides from the channels file are allowed.
struct ChannelRecord {
  std::string channel_id;
  BiasLabel bias_label = BiasLabel::kCenter;
  FactualLabel factual_label = FactualLabel::kMixed;
  double bias_score = 0.0;     // in [-1, 1]
  double factual_score = 0.0;  // in [0, 1]
};

// One comment by one user on one video of one channel.
struct CommentEvent {
  std::string user_id;
  std::string video_id;
  std::string channel_id;
  std::optional<std::int64_t> timestamp_utc;  // epoch seconds, if present
};

// Channel records keyed by id; ids are unique within one dataset.
class ChannelTable {
 public:
  void add(ChannelRecord record);  // throws Error on duplicate id
  const ChannelRecord* find(const std::string& channel_id) const;
  const ChannelRecord& at(const std::string& channel_id) const;  // throws

  const std::vector<ChannelRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<ChannelRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace echotk
