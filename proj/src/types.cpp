// SPDX-License-Identifier: Apache-2.0
#include "echotk/types.hpp"

#include "echotk/error.hpp"

namespace echotk {

void ChannelTable::add(ChannelRecord record) {
  auto [it, inserted] = index_.emplace(record.channel_id, records_.size());
  if (!inserted) {
    throw Error("duplicate channel_id \"" + record.channel_id + "\"");
  }
  records_.push_back(std::move(record));
}

const ChannelRecord* ChannelTable::find(const std::string& channel_id) const {
  const auto it = index_.find(channel_id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const ChannelRecord& ChannelTable::at(const std::string& channel_id) const {
  const ChannelRecord* record = find(channel_id);
  if (!record) throw Error("unknown channel_id \"" + channel_id + "\"");
  return *record;
}

}  // namespace echotk
