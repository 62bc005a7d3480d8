// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "echotk/types.hpp"

namespace echotk {

struct CommentCountSpec {
  enum class Kind { kConstant, kLognormal };
  Kind kind = Kind::kConstant;
  std::uint64_t constant = 10;
  // Lognormal-like: round(exp(log(median) + sigma * z)), clamped to >= 1.
  double median = 10.0;
  double sigma = 1.0;

  static CommentCountSpec constant_count(std::uint64_t n) {
    return {Kind::kConstant, n, 0.0, 0.0};
  }
  static CommentCountSpec lognormal(double median, double sigma) {
    return {Kind::kLognormal, 0, median, sigma};
  }
};

// Optional latent-leaning mixture component (replaces the uniform draw).
struct LatentMode {
  double center = 0.0;  // in [-1, 1]
  double sigma = 0.0;   // 0 -> point mass
  double weight = 1.0;
};

struct SynthConfig {
  std::uint64_t n_users = 1000;
  std::uint64_t n_channels = 20;
  CommentCountSpec comments_per_user = CommentCountSpec::constant_count(10);
  // Channel counts per label are apportioned deterministically from these
  // weights (largest remainder), so tests can pin exact label layouts.
  std::array<double, kNumBiasLabels> bias_label_weights = {1, 1, 1, 1, 1, 1, 1};
  std::array<double, kNumFactualLabels> factual_label_weights = {1, 1, 1,
                                                                 1, 1, 1};
  // 0: channel choice ignores the latent leaning. 1: each comment goes to
  // the closest channel in bias score (perfect segregation limit).
  double homophily = 0.5;
  // Negative couples extremity with low factual scores, positive with high.
  double bias_factual_coupling = 0.0;
  double kernel_tau = 0.25;
  std::vector<LatentMode> modes;  // empty -> uniform latent in [-1, 1]
  std::uint64_t videos_per_channel = 8;
  std::uint64_t seed = 0;
};

struct SynthDataset {
  std::vector<ChannelRecord> channels;
  std::vector<CommentEvent> events;
};

// Fully deterministic given the seed; per-user substreams make the result
// independent of scheduling. Throws ConfigError when the config is invalid
// or when a positive-weight label cannot receive any channel.
SynthDataset generate(const SynthConfig& config);

void write_channels_csv(const std::filesystem::path& path,
                        const std::vector<ChannelRecord>& channels);
void write_comments_csv(const std::filesystem::path& path,
                        const std::vector<CommentEvent>& events);

}  // namespace echotk
