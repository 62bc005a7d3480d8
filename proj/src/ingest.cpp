// SPDX-License-Identifier: Apache-2.0
#include "echotk/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "echotk/csv.hpp"
#include "echotk/error.hpp"

namespace echotk {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

// ISO-8601: date-only, or date + "T"/" " + time, optional "Z" or +/-HH:MM
// offset. Returns epoch seconds (UTC).
std::optional<std::int64_t> parse_iso8601(const std::string& text,
                                          std::string* error) {
  if (text.empty()) return std::nullopt;
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  int offset_sign = 0, offset_hour = 0, offset_minute = 0;
  std::size_t pos = 0;

  auto fail = [&](const char* why) -> std::optional<std::int64_t> {
    if (error) *error = std::string("bad timestamp \"") + text + "\": " + why;
    return std::nullopt;
  };
  auto read_int = [&](int digits, int& out) {
    if (pos + digits > text.size()) return false;
    out = 0;
    for (int i = 0; i < digits; ++i) {
      const char ch = text[pos + i];
      if (ch < '0' || ch > '9') return false;
      out = out * 10 + (ch - '0');
    }
    pos += digits;
    return true;
  };
  auto expect = [&](char ch) {
    if (pos < text.size() && text[pos] == ch) {
      ++pos;
      return true;
    }
    return false;
  };

  if (!read_int(4, year) || !expect('-') || !read_int(2, month) ||
      !expect('-') || !read_int(2, day)) {
    return fail("expected YYYY-MM-DD");
  }
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') return fail("expected 'T'");
    ++pos;
    if (!read_int(2, hour) || !expect(':') || !read_int(2, minute) ||
        !expect(':') || !read_int(2, second)) {
      return fail("expected HH:MM:SS");
    }
    if (pos < text.size()) {
      const char ch = text[pos];
      if (ch == 'Z') {
        ++pos;
      } else if (ch == '+' || ch == '-') {
        offset_sign = (ch == '+') ? 1 : -1;
        ++pos;
        if (!read_int(2, offset_hour) || !expect(':') ||
            !read_int(2, offset_minute)) {
          return fail("bad UTC offset");
        }
      }
    }
  }
  if (pos != text.size()) return fail("trailing characters");
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60) {
    return fail("field out of range");
  }

  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  std::int64_t epoch = static_cast<std::int64_t>(timegm(&tm));
  epoch -= offset_sign * (offset_hour * 3600 + offset_minute * 60);
  return epoch;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

struct ColumnMap {
  std::unordered_map<std::string, std::size_t> by_name;
  std::size_t width = 0;

  std::optional<std::size_t> find(const std::string& name) const {
    const auto it = by_name.find(name);
    if (it == by_name.end()) return std::nullopt;
    return it->second;
  }
};

ColumnMap read_header(CsvReader& reader, const std::string& file,
                      const std::vector<std::string>& required) {
  std::vector<std::string> fields;
  if (!reader.next(fields)) {
    throw FormatError(file + ": empty file, expected a header row");
  }
  ColumnMap map;
  map.width = fields.size();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    map.by_name.emplace(lower(fields[i]), i);
  }
  for (const auto& name : required) {
    if (!map.find(name)) {
      throw FormatError(file + ": malformed header, missing column \"" + name +
                        "\"");
    }
  }
  return map;
}

class RowSink {
 public:
  RowSink(IngestReport& report, const IngestOptions& options)
      : report_(report), options_(options) {}

  // Returns false (row dropped) in lenient mode; throws in strict mode.
  bool reject(std::uint64_t& counter, const std::string& file,
              std::uint64_t line, const std::string& reason) {
    if (options_.strict) {
      throw Error(file + " line " + std::to_string(line) + ": " + reason);
    }
    ++counter;
    if (report_.rejected.size() < options_.max_rejected_records) {
      report_.rejected.push_back({file, line, reason});
    }
    return false;
  }

 private:
  IngestReport& report_;
  const IngestOptions& options_;
};

CommentsFormat detect_format(const std::filesystem::path& path,
                             CommentsFormat requested) {
  if (requested != CommentsFormat::kAuto) return requested;
  const std::string ext = lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") {
    return CommentsFormat::kJsonl;
  }
  return CommentsFormat::kCsv;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& channels_path,
                     const std::filesystem::path& comments_path,
                     const IngestOptions& options) {
  Dataset dataset;
  RowSink sink(dataset.report, options);
  const std::string channels_name = channels_path.filename().string();
  const std::string comments_name = comments_path.filename().string();

  std::ifstream channels_in(channels_path);
  if (!channels_in) {
    throw Error("cannot open channels file: " + channels_path.string());
  }
  {
    CsvReader reader(channels_in);
    const ColumnMap cols = read_header(
        reader, channels_name, {"channel_id", "bias_label", "factual_label"});
    const auto id_col = *cols.find("channel_id");
    const auto bias_col = *cols.find("bias_label");
    const auto factual_col = *cols.find("factual_label");
    const auto bias_score_col = cols.find("bias_score");
    const auto factual_score_col = cols.find("factual_score");

    std::vector<std::string> fields;
    while (reader.next(fields)) {
      const std::uint64_t line = reader.record_line();
      if (fields.size() == 1 && fields[0].empty()) continue;
      if (fields.size() != cols.width) {
        sink.reject(dataset.report.channel_rows_rejected, channels_name, line,
                    "expected " + std::to_string(cols.width) + " fields, got " +
                        std::to_string(fields.size()));
        continue;
      }
      ChannelRecord record;
      record.channel_id = fields[id_col];
      if (record.channel_id.empty()) {
        sink.reject(dataset.report.channel_rows_rejected, channels_name, line,
                    "empty channel_id");
        continue;
      }
      try {
        record.bias_label = parse_bias_label(fields[bias_col]);
        record.factual_label = parse_factual_label(fields[factual_col]);
      } catch (const LabelError& err) {
        sink.reject(dataset.report.channel_rows_rejected, channels_name, line,
                    err.what());
        continue;
      }
      record.bias_score = bias_score(record.bias_label);
      record.factual_score = factual_score(record.factual_label);

      // Optional numeric overrides, honored only when present and in range.
      bool bad_override = false;
      if (bias_score_col && !fields[*bias_score_col].empty()) {
        double value = 0.0;
        if (!parse_double(fields[*bias_score_col], value) || value < -1.0 ||
            value > 1.0) {
          sink.reject(dataset.report.channel_rows_rejected, channels_name,
                      line,
                      "bias_score override \"" + fields[*bias_score_col] +
                          "\" is not a real in [-1, 1]");
          bad_override = true;
        } else {
          record.bias_score = value;
        }
      }
      if (!bad_override && factual_score_col &&
          !fields[*factual_score_col].empty()) {
        double value = 0.0;
        if (!parse_double(fields[*factual_score_col], value) || value < 0.0 ||
            value > 1.0) {
          sink.reject(dataset.report.channel_rows_rejected, channels_name,
                      line,
                      "factual_score override \"" + fields[*factual_score_col] +
                          "\" is not a real in [0, 1]");
          bad_override = true;
        } else {
          record.factual_score = value;
        }
      }
      if (bad_override) continue;

      if (dataset.channels.find(record.channel_id)) {
        sink.reject(dataset.report.channel_rows_rejected, channels_name, line,
                    "duplicate channel_id \"" + record.channel_id + "\"");
        continue;
      }
      dataset.channels.add(std::move(record));
    }
  }
  dataset.report.channels_loaded = dataset.channels.size();

  std::ifstream comments_in(comments_path);
  if (!comments_in) {
    throw Error("cannot open comments file: " + comments_path.string());
  }

  std::unordered_set<std::string> users;
  std::unordered_set<std::string> videos;
  std::unordered_set<std::string> channels_seen;

  auto accept_event = [&](CommentEvent event) {
    users.insert(event.user_id);
    videos.insert(event.channel_id + '\x1f' + event.video_id);
    channels_seen.insert(event.channel_id);
    ++dataset.report.comments_accepted;
    dataset.events.push_back(std::move(event));
  };

  // Streamed row-by-row: a single pass, never holding the file in memory.
  auto handle_row = [&](std::uint64_t line, CommentEvent event,
                        const std::string& timestamp_text) {
    if (event.user_id.empty() || event.video_id.empty() ||
        event.channel_id.empty()) {
      sink.reject(dataset.report.comments_rejected, comments_name, line,
                  "user_id, video_id and channel_id must be non-empty");
      return;
    }
    if (!dataset.channels.find(event.channel_id)) {
      if (options.strict) {
        throw Error(comments_name + " line " + std::to_string(line) +
                    ": unknown channel_id \"" + event.channel_id + "\"");
      }
      ++dataset.report.unknown_channel_skips;
      if (dataset.report.rejected.size() < options.max_rejected_records) {
        dataset.report.rejected.push_back(
            {comments_name, line,
             "unknown channel_id \"" + event.channel_id + "\" (skipped)"});
      }
      return;
    }
    std::string error;
    event.timestamp_utc = parse_iso8601(timestamp_text, &error);
    if (!event.timestamp_utc && !error.empty()) {
      sink.reject(dataset.report.comments_rejected, comments_name, line,
                  error);
      return;
    }
    accept_event(std::move(event));
  };

  const CommentsFormat format =
      detect_format(comments_path, options.comments_format);
  if (format == CommentsFormat::kCsv) {
    CsvReader reader(comments_in);
    const ColumnMap cols =
        read_header(reader, comments_name,
                    {"user_id", "video_id", "channel_id", "timestamp"});
    const auto user_col = *cols.find("user_id");
    const auto video_col = *cols.find("video_id");
    const auto channel_col = *cols.find("channel_id");
    const auto ts_col = *cols.find("timestamp");

    std::vector<std::string> fields;
    while (reader.next(fields)) {
      const std::uint64_t line = reader.record_line();
      if (fields.size() == 1 && fields[0].empty()) continue;
      if (fields.size() != cols.width) {
        sink.reject(dataset.report.comments_rejected, comments_name, line,
                    "expected " + std::to_string(cols.width) + " fields, got " +
                        std::to_string(fields.size()));
        continue;
      }
      CommentEvent event;
      event.user_id = fields[user_col];
      event.video_id = fields[video_col];
      event.channel_id = fields[channel_col];
      handle_row(line, std::move(event), fields[ts_col]);
    }
  } else {
    std::string line_text;
    std::uint64_t line = 0;
    while (std::getline(comments_in, line_text)) {
      ++line;
      if (line_text.empty() ||
          line_text.find_first_not_of(" \t\r") == std::string::npos) {
        continue;
      }
      nlohmann::json row = nlohmann::json::parse(line_text, nullptr, false);
      if (row.is_discarded() || !row.is_object()) {
        sink.reject(dataset.report.comments_rejected, comments_name, line,
                    "invalid JSON object");
        continue;
      }
      auto field = [&](const char* key) -> std::string {
        const auto it = row.find(key);
        if (it == row.end() || it->is_null()) return {};
        if (it->is_string()) return it->get<std::string>();
        return it->dump();
      };
      CommentEvent event;
      event.user_id = field("user_id");
      event.video_id = field("video_id");
      event.channel_id = field("channel_id");
      handle_row(line, std::move(event), field("timestamp"));
    }
  }

  dataset.report.distinct_users = users.size();
  dataset.report.distinct_videos = videos.size();
  dataset.report.distinct_channels_commented = channels_seen.size();
  return dataset;
}

nlohmann::ordered_json IngestReport::to_json() const {
  nlohmann::ordered_json j;
  j["channels_loaded"] = channels_loaded;
  j["channel_rows_rejected"] = channel_rows_rejected;
  j["comments_accepted"] = comments_accepted;
  j["comments_rejected"] = comments_rejected;
  j["unknown_channel_skips"] = unknown_channel_skips;
  j["distinct_users"] = distinct_users;
  j["distinct_videos"] = distinct_videos;
  j["distinct_channels_commented"] = distinct_channels_commented;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rejected) {
    rows.push_back({{"file", row.file},
                    {"line", row.line},
                    {"reason", row.reason}});
  }
  j["rejected_rows"] = std::move(rows);
  return j;
}

DatasetSummary summarize_dataset(const ChannelTable& channels,
                                 const std::vector<CommentEvent>& events) {
  if (channels.empty()) throw Error("summarize_dataset: no channels loaded");
  if (events.empty()) throw Error("summarize_dataset: no comment events");

  DatasetSummary summary;
  summary.total_channels = channels.size();
  summary.total_comments = events.size();

  for (int i = 0; i < kNumBiasLabels; ++i) {
    summary.bias_shares[static_cast<BiasLabel>(i)] = {};
  }
  for (int i = 0; i < kNumFactualLabels; ++i) {
    summary.factual_shares[static_cast<FactualLabel>(i)] = {};
  }
  for (const auto& record : channels.records()) {
    ++summary.bias_shares[record.bias_label].channel_count;
    ++summary.factual_shares[record.factual_label].channel_count;
  }

  std::unordered_map<std::string, std::uint64_t> user_comments;
  std::unordered_map<std::string, std::unordered_set<std::string>>
      channel_videos;
  for (const auto& event : events) {
    const ChannelRecord& record = channels.at(event.channel_id);
    ++summary.bias_shares[record.bias_label].comment_count;
    ++summary.factual_shares[record.factual_label].comment_count;
    ++user_comments[event.user_id];
    channel_videos[event.channel_id].insert(event.video_id);
  }

  for (const auto& [channel_id, video_set] : channel_videos) {
    const ChannelRecord& record = channels.at(channel_id);
    summary.bias_shares[record.bias_label].video_count += video_set.size();
    summary.factual_shares[record.factual_label].video_count +=
        video_set.size();
    summary.total_videos += video_set.size();
  }

  summary.total_users = user_comments.size();
  for (const auto& [user, count] : user_comments) {
    ++summary.comments_per_user[count];
  }
  for (const auto& record : channels.records()) {
    const auto it = channel_videos.find(record.channel_id);
    const std::uint64_t count = it == channel_videos.end() ? 0
                                                           : it->second.size();
    ++summary.videos_per_channel[count];
  }

  auto fill_shares = [&](auto& shares) {
    for (auto& [label, share] : shares) {
      share.channel_share = static_cast<double>(share.channel_count) /
                            static_cast<double>(summary.total_channels);
      share.video_share = summary.total_videos == 0
                              ? 0.0
                              : static_cast<double>(share.video_count) /
                                    static_cast<double>(summary.total_videos);
      share.comment_share = static_cast<double>(share.comment_count) /
                            static_cast<double>(summary.total_comments);
    }
  };
  fill_shares(summary.bias_shares);
  fill_shares(summary.factual_shares);
  return summary;
}

nlohmann::ordered_json DatasetSummary::to_json() const {
  nlohmann::ordered_json j;
  j["total_channels"] = total_channels;
  j["total_videos"] = total_videos;
  j["total_comments"] = total_comments;
  j["total_users"] = total_users;

  auto shares_json = [](const auto& shares) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& [label, share] : shares) {
      out.push_back({{"label", std::string(to_string(label))},
                     {"channels", share.channel_count},
                     {"videos", share.video_count},
                     {"comments", share.comment_count},
                     {"channel_share", share.channel_share},
                     {"video_share", share.video_share},
                     {"comment_share", share.comment_share}});
    }
    return out;
  };
  j["bias_shares"] = shares_json(bias_shares);
  j["factual_shares"] = shares_json(factual_shares);

  auto hist_json = [](const std::map<std::uint64_t, std::uint64_t>& hist) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& [value, count] : hist) {
      out.push_back({{"value", value}, {"count", count}});
    }
    return out;
  };
  j["comments_per_user"] = hist_json(comments_per_user);
  j["videos_per_channel"] = hist_json(videos_per_channel);
  return j;
}

}  // namespace echotk
