// SPDX-License-Identifier: Apache-2.0
#include "echotk/labels.hpp"

#include <algorithm>
#include <cctype>

#include "echotk/error.hpp"

namespace echotk {

namespace {

constexpr std::array<std::string_view, kNumBiasLabels> kBiasNames = {
    "Extreme left", "Left",  "Left-center",  "Center",
    "Right-center", "Right", "Extreme right"};

constexpr std::array<std::string_view, kNumFactualLabels> kFactualNames = {
    "Very Low", "Low", "Mixed", "Mostly Factual", "High", "Very High"};

std::string normalize(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  std::string out(text.substr(begin, end - begin + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

template <typename Names>
std::string vocabulary(const Names& names) {
  std::string out;
  for (std::string_view name : names) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

std::string_view to_string(BiasLabel label) {
  return kBiasNames[static_cast<int>(label)];
}

std::string_view to_string(FactualLabel label) {
  return kFactualNames[static_cast<int>(label)];
}

BiasLabel parse_bias_label(std::string_view text) {
  const std::string needle = normalize(text);
  for (int i = 0; i < kNumBiasLabels; ++i) {
    if (needle == normalize(kBiasNames[i])) return static_cast<BiasLabel>(i);
  }
  throw LabelError("unrecognized political bias label \"" + std::string(text) +
                   "\"; expected one of: " + vocabulary(kBiasNames));
}

FactualLabel parse_factual_label(std::string_view text) {
  const std::string needle = normalize(text);
  for (int i = 0; i < kNumFactualLabels; ++i) {
    if (needle == normalize(kFactualNames[i]))
      return static_cast<FactualLabel>(i);
  }
  throw LabelError("unrecognized factual reporting label \"" +
                   std::string(text) +
                   "\"; expected one of: " + vocabulary(kFactualNames));
}

double map_bias_label(std::string_view text) {
  return bias_score(parse_bias_label(text));
}

double map_factual_label(std::string_view text) {
  return factual_score(parse_factual_label(text));
}

}  // namespace echotk
