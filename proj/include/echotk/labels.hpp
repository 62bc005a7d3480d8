// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <string_view>

namespace echotk {

// Seven-point political-bias scale, ordered left to right.
enum class BiasLabel : int {
  kExtremeLeft = 0,
  kLeft,
  kLeftCenter,
  kCenter,
  kRightCenter,
  kRight,
  kExtremeRight,
};

// Six-point factual-reporting scale, ordered worst to best.
enum class FactualLabel : int {
  kVeryLow = 0,
  kLow,
  kMixed,
  kMostlyFactual,
  kHigh,
  kVeryHigh,
};

inline constexpr int kNumBiasLabels = 7;
inline constexpr int kNumFactualLabels = 6;

// Fixed numeric mappings. The two-decimal values are intentional; they are
// the published mapping, not rounded thirds.
inline constexpr std::array<double, kNumBiasLabels> kBiasScores = {
    -1.0, -0.66, -0.33, 0.0, 0.33, 0.66, 1.0};
inline constexpr std::array<double, kNumFactualLabels> kFactualScores = {
    0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

std::string_view to_string(BiasLabel label);
std::string_view to_string(FactualLabel label);

constexpr double bias_score(BiasLabel label) {
  return kBiasScores[static_cast<int>(label)];
}
constexpr double factual_score(FactualLabel label) {
  return kFactualScores[static_cast<int>(label)];
}

// Case-insensitive match after trimming surrounding whitespace.
// Throws LabelError naming the offending string and the vocabulary.
BiasLabel parse_bias_label(std::string_view text);
FactualLabel parse_factual_label(std::string_view text);

double map_bias_label(std::string_view text);
double map_factual_label(std::string_view text);

}  // namespace echotk
