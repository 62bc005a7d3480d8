// SPDX-License-Identifier: Apache-2.0
#include "echotk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>

#include "echotk/csv.hpp"
#include "echotk/error.hpp"
#include "echotk/rng.hpp"

namespace echotk {

namespace {

constexpr std::uint64_t kChannelStream = 0x6368616e6e656cULL;  // "channel"
constexpr std::uint64_t kUserStreamBase = 0x75736572ULL;       // "user"

// Largest-remainder apportionment of n slots over the weights; ties go to
// the lower index. Deterministic so tests can pin exact label layouts.
template <std::size_t N>
std::array<std::uint64_t, N> apportion(std::uint64_t n,
                                       const std::array<double, N>& weights) {
  double weight_sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("label weights must be nonnegative");
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) {
    throw ConfigError("label weights must have a positive sum");
  }

  std::array<std::uint64_t, N> counts{};
  std::array<double, N> remainders{};
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double quota = static_cast<double>(n) * weights[i] / weight_sum;
    counts[i] = static_cast<std::uint64_t>(std::floor(quota));
    remainders[i] = quota - std::floor(quota);
    assigned += counts[i];
  }
  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t i = 0; assigned < n; ++i) {
    ++counts[order[i % N]];
    ++assigned;
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (weights[i] > 0.0 && counts[i] == 0) {
      throw ConfigError(
          "zero channels for required label \"" +
          std::string(to_string(static_cast<BiasLabel>(i))) +
          "\": n_channels is too small for the requested weights");
    }
  }
  return counts;
}

std::string channel_name(std::uint64_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "ch%04llu",
                static_cast<unsigned long long>(index));
  return buf;
}

double draw_latent(const SynthConfig& config, Rng& rng) {
  if (config.modes.empty()) {
    return rng.unit() * 2.0 - 1.0;
  }
  double weight_sum = 0.0;
  for (const auto& mode : config.modes) weight_sum += mode.weight;
  double pick = rng.unit() * weight_sum;
  const LatentMode* chosen = &config.modes.back();
  for (const auto& mode : config.modes) {
    if (pick < mode.weight) {
      chosen = &mode;
      break;
    }
    pick -= mode.weight;
  }
  double latent = chosen->center;
  if (chosen->sigma > 0.0) latent += chosen->sigma * rng.normal();
  return std::clamp(latent, -1.0, 1.0);
}

std::uint64_t draw_comment_count(const CommentCountSpec& spec, Rng& rng) {
  if (spec.kind == CommentCountSpec::Kind::kConstant) {
    return std::max<std::uint64_t>(spec.constant, 1);
  }
  const double value = std::exp(std::log(spec.median) + spec.sigma * rng.normal());
  const auto rounded = static_cast<std::int64_t>(std::llround(value));
  return rounded < 1 ? 1 : static_cast<std::uint64_t>(rounded);
}

// Factual labels are drawn from the weight vector tilted by how extreme the
// channel's bias is: negative coupling pushes extreme channels toward low
// factual scores, positive toward high ones.
FactualLabel draw_factual_label(const SynthConfig& config, double bias,
                                Rng& rng) {
  constexpr double kTiltSharpness = 4.0;
  const double extremity = std::abs(bias);  // in [0, 1]
  std::array<double, kNumFactualLabels> weights = config.factual_label_weights;
  double weight_sum = 0.0;
  for (int level = 0; level < kNumFactualLabels; ++level) {
    const double level_position =
        static_cast<double>(level) / (kNumFactualLabels - 1) - 0.5;
    weights[level] *= std::exp(kTiltSharpness * config.bias_factual_coupling *
                               (extremity - 0.5) * level_position);
    weight_sum += weights[level];
  }
  if (!(weight_sum > 0.0)) {
    throw ConfigError("factual label weights must have a positive sum");
  }
  double pick = rng.unit() * weight_sum;
  for (int level = 0; level < kNumFactualLabels; ++level) {
    if (pick < weights[level]) return static_cast<FactualLabel>(level);
    pick -= weights[level];
  }
  return FactualLabel::kVeryHigh;
}

}  // namespace

SynthDataset generate(const SynthConfig& config) {
  if (config.n_users == 0) throw ConfigError("n_users must be >= 1");
  if (config.n_channels == 0) throw ConfigError("n_channels must be >= 1");
  if (config.videos_per_channel == 0) {
    throw ConfigError("videos_per_channel must be >= 1");
  }
  if (config.homophily < 0.0 || config.homophily > 1.0) {
    throw ConfigError("homophily must lie in [0, 1]");
  }
  if (config.bias_factual_coupling < -1.0 ||
      config.bias_factual_coupling > 1.0) {
    throw ConfigError("bias_factual_coupling must lie in [-1, 1]");
  }
  if (config.comments_per_user.kind == CommentCountSpec::Kind::kLognormal &&
      !(config.comments_per_user.median > 0.0)) {
    throw ConfigError("comments_per_user median must be positive");
  }
  for (const auto& mode : config.modes) {
    if (mode.center < -1.0 || mode.center > 1.0 || mode.sigma < 0.0 ||
        mode.weight <= 0.0) {
      throw ConfigError("invalid latent mode");
    }
  }

  SynthDataset dataset;

  const auto label_counts =
      apportion<kNumBiasLabels>(config.n_channels, config.bias_label_weights);
  Rng channel_rng = Rng::derive(config.seed, kChannelStream);
  std::uint64_t channel_index = 0;
  for (int label = 0; label < kNumBiasLabels; ++label) {
    for (std::uint64_t i = 0; i < label_counts[label]; ++i) {
      ChannelRecord record;
      record.channel_id = channel_name(channel_index++);
      record.bias_label = static_cast<BiasLabel>(label);
      record.bias_score = bias_score(record.bias_label);
      record.factual_label =
          draw_factual_label(config, record.bias_score, channel_rng);
      record.factual_score = factual_score(record.factual_label);
      dataset.channels.push_back(std::move(record));
    }
  }

  const std::size_t n_channels = dataset.channels.size();
  std::vector<double> channel_bias(n_channels);
  for (std::size_t j = 0; j < n_channels; ++j) {
    channel_bias[j] = dataset.channels[j].bias_score;
  }

  std::vector<double> cdf(n_channels);
  for (std::uint64_t u = 0; u < config.n_users; ++u) {
    Rng rng = Rng::derive(config.seed, kUserStreamBase + u);
    const double latent = draw_latent(config, rng);
    const std::uint64_t n_comments =
        draw_comment_count(config.comments_per_user, rng);

    std::size_t nearest = 0;
    if (config.homophily >= 1.0) {
      // Perfect segregation limit: every comment goes to the closest
      // channel in bias score (ties to the lower index).
      double best = std::abs(latent - channel_bias[0]);
      for (std::size_t j = 1; j < n_channels; ++j) {
        const double d = std::abs(latent - channel_bias[j]);
        if (d < best) {
          best = d;
          nearest = j;
        }
      }
    } else {
      // Mixture of a closeness kernel and a uniform component.
      double kernel_sum = 0.0;
      for (std::size_t j = 0; j < n_channels; ++j) {
        cdf[j] = std::exp(-std::abs(latent - channel_bias[j]) /
                          config.kernel_tau);
        kernel_sum += cdf[j];
      }
      const double uniform_part =
          (1.0 - config.homophily) / static_cast<double>(n_channels);
      double acc = 0.0;
      for (std::size_t j = 0; j < n_channels; ++j) {
        acc += config.homophily * cdf[j] / kernel_sum + uniform_part;
        cdf[j] = acc;
      }
      cdf[n_channels - 1] = 1.0;
    }

    const std::string user_id = "u" + std::to_string(u);
    for (std::uint64_t k = 0; k < n_comments; ++k) {
      std::size_t channel;
      if (config.homophily >= 1.0) {
        channel = nearest;
      } else {
        const double pick = rng.unit();
        channel = std::lower_bound(cdf.begin(), cdf.end(), pick) - cdf.begin();
        if (channel >= n_channels) channel = n_channels - 1;
      }
      CommentEvent event;
      event.user_id = user_id;
      event.channel_id = dataset.channels[channel].channel_id;
      event.video_id = event.channel_id + "v" +
                       std::to_string(rng.below(config.videos_per_channel));
      dataset.events.push_back(std::move(event));
    }
  }
  return dataset;
}

void write_channels_csv(const std::filesystem::path& path,
                        const std::vector<ChannelRecord>& channels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "channel_id,bias_label,factual_label\n";
  for (const auto& record : channels) {
    write_csv_row(out, {record.channel_id,
                        std::string(to_string(record.bias_label)),
                        std::string(to_string(record.factual_label))});
  }
}

void write_comments_csv(const std::filesystem::path& path,
                        const std::vector<CommentEvent>& events) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "user_id,video_id,channel_id,timestamp\n";
  for (const auto& event : events) {
    std::string timestamp;
    if (event.timestamp_utc) {
      std::tm tm{};
      const auto t = static_cast<std::time_t>(*event.timestamp_utc);
      gmtime_r(&t, &tm);
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                    tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                    tm.tm_min, tm.tm_sec);
      timestamp = buf;
    }
    write_csv_row(out,
                  {event.user_id, event.video_id, event.channel_id, timestamp});
  }
}

}  // namespace echotk
