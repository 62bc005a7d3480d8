// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "echotk/ingest.hpp"

#include "json.hpp"

namespace echotk {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

enum class ProjectionBasis { kChannel, kVideo };

std::string_view to_string(ProjectionBasis basis);
ProjectionBasis parse_projection_basis(const std::string& text);

struct PipelineConfig {
  std::filesystem::path channels_path;
  std::filesystem::path comments_path;
  std::filesystem::path output_dir;
  std::uint64_t min_comments = 10;
  ProjectionBasis projection_basis = ProjectionBasis::kChannel;
  double grid_step = 0.01;
  std::uint64_t rewire_steps = 0;  // 0 = auto: 10 x edge count
  std::uint64_t null_replicas = 1;
  std::uint64_t seed = 0;
  bool strict_ingest = false;
  CommentsFormat comments_format = CommentsFormat::kAuto;
  std::size_t popular_item_cutoff = 1024;
  unsigned threads = 0;
  bool export_graph = false;

  nlohmann::ordered_json to_json() const;
};

// Loads a JSON config file and overlays it on `base`. Unknown keys throw.
PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    PipelineConfig base = {});

struct RunManifest {
  std::string status;  // "complete" or "incomplete"
  std::string error;   // set when incomplete
  std::vector<std::string> artifacts;
  nlohmann::ordered_json json;
};

// Full pipeline: ingest -> filter -> indices -> graph -> null replicas ->
// entropy -> exports. Writes all artifacts plus manifest.json into
// config.output_dir. On a stage error the manifest is written with
// status "incomplete" before the exception propagates.
RunManifest run_pipeline(const PipelineConfig& config);

// Ingest-level summary (label shares, per-user comment and per-channel
// video histograms) written as CSV/JSON into output_dir.
void write_summary(const PipelineConfig& config);

// FNV-1a 64-bit over a file's bytes, as a hex string; used for the input
// checksums in the manifest.
std::string fnv1a64_file(const std::filesystem::path& path);

// Fixed CSV formatting for reals: 6 significant digits.
std::string format_real(double value);

}  // namespace echotk
