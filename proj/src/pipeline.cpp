// SPDX-License-Identifier: Apache-2.0
#include "echotk/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "echotk/csv.hpp"
#include "echotk/entropy.hpp"
#include "echotk/error.hpp"
#include "echotk/graph.hpp"
#include "echotk/indices.hpp"
#include "echotk/nullmodel.hpp"
#include "echotk/rng.hpp"

namespace echotk {

std::string_view to_string(ProjectionBasis basis) {
  return basis == ProjectionBasis::kChannel ? "channel" : "video";
}

ProjectionBasis parse_projection_basis(const std::string& text) {
  if (text == "channel") return ProjectionBasis::kChannel;
  if (text == "video") return ProjectionBasis::kVideo;
  throw ConfigError("projection basis must be \"channel\" or \"video\", got \"" +
                    text + "\"");
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for checksum: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

nlohmann::ordered_json PipelineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["channels"] = channels_path.string();
  j["comments"] = comments_path.string();
  j["output_dir"] = output_dir.string();
  j["min_comments"] = min_comments;
  j["projection_basis"] = std::string(to_string(projection_basis));
  j["grid_step"] = grid_step;
  j["rewire_steps"] = rewire_steps;  // 0 = auto (10 x edges)
  j["null_replicas"] = null_replicas;
  j["seed"] = seed;
  j["strict_ingest"] = strict_ingest;
  j["comments_format"] = comments_format == CommentsFormat::kAuto  ? "auto"
                         : comments_format == CommentsFormat::kCsv ? "csv"
                                                                   : "jsonl";
  j["popular_item_cutoff"] = popular_item_cutoff;
  j["threads"] = threads;
  j["export_graph"] = export_graph;
  return j;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError("config file " + path.string() + ": " + err.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config file " + path.string() +
                      " must hold a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "channels") {
      base.channels_path = value.get<std::string>();
    } else if (key == "comments") {
      base.comments_path = value.get<std::string>();
    } else if (key == "output_dir") {
      base.output_dir = value.get<std::string>();
    } else if (key == "min_comments") {
      base.min_comments = value.get<std::uint64_t>();
    } else if (key == "projection_basis") {
      base.projection_basis = parse_projection_basis(value.get<std::string>());
    } else if (key == "grid_step") {
      base.grid_step = value.get<double>();
    } else if (key == "rewire_steps") {
      if (value.is_string() && value.get<std::string>() == "auto") {
        base.rewire_steps = 0;
      } else {
        base.rewire_steps = value.get<std::uint64_t>();
      }
    } else if (key == "null_replicas") {
      base.null_replicas = value.get<std::uint64_t>();
    } else if (key == "seed") {
      base.seed = value.get<std::uint64_t>();
    } else if (key == "strict_ingest") {
      base.strict_ingest = value.get<bool>();
    } else if (key == "comments_format") {
      const std::string text = value.get<std::string>();
      if (text == "auto") {
        base.comments_format = CommentsFormat::kAuto;
      } else if (text == "csv") {
        base.comments_format = CommentsFormat::kCsv;
      } else if (text == "jsonl") {
        base.comments_format = CommentsFormat::kJsonl;
      } else {
        throw ConfigError("comments_format must be auto/csv/jsonl");
      }
    } else if (key == "popular_item_cutoff") {
      base.popular_item_cutoff = value.get<std::size_t>();
    } else if (key == "threads") {
      base.threads = value.get<unsigned>();
    } else if (key == "export_graph") {
      base.export_graph = value.get<bool>();
    } else {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }
  return base;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text,
                std::vector<std::string>& artifacts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  artifacts.push_back(path.filename().string());
}

void write_json(const std::filesystem::path& path,
                const nlohmann::ordered_json& j,
                std::vector<std::string>& artifacts) {
  write_text(path, j.dump(2) + "\n", artifacts);
}

void write_profiles_csv(const std::filesystem::path& path,
                        const std::vector<UserProfile>& profiles,
                        std::vector<std::string>& artifacts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "user_id,n_total,h_channels,p,c\n";
  for (const auto& profile : profiles) {
    write_csv_row(out, {profile.user_id, std::to_string(profile.n_total),
                        std::to_string(profile.h_channels),
                        format_real(profile.p), format_real(profile.c)});
  }
  artifacts.push_back(path.filename().string());
}

void write_neighborhood_csv(const std::filesystem::path& path,
                            const std::vector<UserProfile>& profiles,
                            std::vector<std::string>& artifacts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "user_id,k,p,c,p_neighborhood,c_neighborhood\n";
  for (const auto& profile : profiles) {
    write_csv_row(
        out,
        {profile.user_id, std::to_string(profile.k_projection_degree),
         format_real(profile.p), format_real(profile.c),
         profile.p_neighborhood ? format_real(*profile.p_neighborhood) : "",
         profile.c_neighborhood ? format_real(*profile.c_neighborhood) : ""});
  }
  artifacts.push_back(path.filename().string());
}

void write_graph_csv(const std::filesystem::path& path,
                     const BipartiteGraph& graph,
                     std::vector<std::string>& artifacts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "user_id,item_id,weight\n";
  for (std::uint32_t u = 0; u < graph.user_count(); ++u) {
    for (std::size_t i = 0; i < graph.user_items[u].size(); ++i) {
      const std::uint32_t item = graph.user_items[u][i];
      const std::uint64_t weight =
          graph.has_weights() ? graph.edge_weights[u][i] : 1;
      write_csv_row(out, {graph.user_ids[u], graph.item_ids[item],
                          std::to_string(weight)});
    }
  }
  artifacts.push_back(path.filename().string());
}

void save_named_histogram(const JointHistogram& hist,
                          const std::filesystem::path& dir,
                          const std::string& name,
                          std::vector<std::string>& artifacts) {
  save_histogram(hist, dir, name);
  artifacts.push_back(name + ".csv");
  artifacts.push_back(name + ".meta.json");
  artifacts.push_back(name + ".marginal_x.csv");
  artifacts.push_back(name + ".marginal_y.csv");
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
  RunManifest manifest;
  nlohmann::ordered_json& j = manifest.json;
  j["tool"] = "echotk";
  j["version"] = std::string(kToolkitVersion);
  j["config"] = config.to_json();

  std::filesystem::create_directories(config.output_dir);
  const auto manifest_path = config.output_dir / "manifest.json";

  auto fail = [&](const std::string& message) {
    manifest.status = "incomplete";
    manifest.error = message;
    j["status"] = "incomplete";
    j["error"] = message;
    j["artifacts"] = manifest.artifacts;
    std::ofstream out(manifest_path, std::ios::binary);
    if (out) out << j.dump(2) << "\n";
  };

  try {
    if (!std::filesystem::exists(config.channels_path)) {
      throw Error("channels file not found: " + config.channels_path.string());
    }
    if (!std::filesystem::exists(config.comments_path)) {
      throw Error("comments file not found: " + config.comments_path.string());
    }
    j["inputs"] = {
        {"channels",
         {{"path", config.channels_path.string()},
          {"fnv1a64", fnv1a64_file(config.channels_path)}}},
        {"comments",
         {{"path", config.comments_path.string()},
          {"fnv1a64", fnv1a64_file(config.comments_path)}}},
    };

    IngestOptions ingest_options;
    ingest_options.strict = config.strict_ingest;
    ingest_options.comments_format = config.comments_format;
    Dataset dataset = load_dataset(config.channels_path, config.comments_path,
                                   ingest_options);
    write_json(config.output_dir / "ingest_report.json",
               dataset.report.to_json(), manifest.artifacts);

    auto engagements = build_engagements(dataset.events);
    const std::uint64_t users_total = engagements.size();
    engagements = filter_min_comments(std::move(engagements),
                                      config.min_comments);
    if (engagements.empty()) {
      throw Error("empty population after filter (min_comments=" +
                  std::to_string(config.min_comments) + ")");
    }

    auto profiles = build_profiles(engagements, dataset.channels);
    std::vector<std::string> kept_users;
    kept_users.reserve(profiles.size());
    for (const auto& profile : profiles) kept_users.push_back(profile.user_id);

    BipartiteGraph graph =
        config.projection_basis == ProjectionBasis::kChannel
            ? build_bipartite(engagements)
            : build_video_bipartite(dataset.events, kept_users);

    NeighborhoodOptions nbhd_options;
    nbhd_options.popular_item_cutoff = config.popular_item_cutoff;
    nbhd_options.threads = config.threads;
    const auto stats = neighborhood_averages(graph, profiles, nbhd_options);
    attach_neighborhood_stats(graph, stats, profiles);

    write_profiles_csv(config.output_dir / "profiles.csv", profiles,
                       manifest.artifacts);
    write_neighborhood_csv(config.output_dir / "neighborhood.csv", profiles,
                           manifest.artifacts);
    if (config.export_graph) {
      write_graph_csv(config.output_dir / "graph_edges.csv", graph,
                      manifest.artifacts);
    }

    const std::uint64_t rewire_steps =
        config.rewire_steps == 0
            ? kDefaultRewireStepsPerEdge * graph.edge_count()
            : config.rewire_steps;

    const IndexSample empirical = make_index_sample(profiles,
                                                    config.grid_step);
    std::vector<IndexSample> null_samples;
    nlohmann::ordered_json replica_seeds = nlohmann::ordered_json::array();
    for (std::uint64_t replica = 0; replica < config.null_replicas;
         ++replica) {
      RewireConfig rewire_config;
      rewire_config.steps = rewire_steps;
      rewire_config.seed = splitmix64(config.seed ^ splitmix64(replica + 1));
      replica_seeds.push_back(rewire_config.seed);
      const RewireResult rewired = ms_rewire(graph, rewire_config);
      const RewireReport report = rewire_report(graph, rewired);
      write_json(config.output_dir /
                     ("rewire_report_" + std::to_string(replica + 1) + ".json"),
                 report.to_json(), manifest.artifacts);

      std::vector<UserProfile> null_profiles = profiles;  // p, c stay fixed
      const auto null_stats = neighborhood_averages(rewired.graph,
                                                    null_profiles,
                                                    nbhd_options);
      attach_neighborhood_stats(rewired.graph, null_stats, null_profiles);
      null_samples.push_back(make_index_sample(null_profiles,
                                               config.grid_step));

      const std::string suffix = "_null_" + std::to_string(replica + 1);
      JointHistogram political(political_grid(config.grid_step));
      JointHistogram persisted(persistence_grid(config.grid_step));
      const IndexSample& sample = null_samples.back();
      for (std::size_t i = 0; i < sample.p_paired.size(); ++i) {
        political.add(sample.p_paired[i], sample.p_nbhd[i]);
        persisted.add(sample.c_paired[i], sample.c_nbhd[i]);
      }
      save_named_histogram(political, config.output_dir,
                           "hist_political" + suffix, manifest.artifacts);
      save_named_histogram(persisted, config.output_dir,
                           "hist_persistence" + suffix, manifest.artifacts);
    }

    {
      JointHistogram political(political_grid(config.grid_step));
      JointHistogram persisted(persistence_grid(config.grid_step));
      for (std::size_t i = 0; i < empirical.p_paired.size(); ++i) {
        political.add(empirical.p_paired[i], empirical.p_nbhd[i]);
        persisted.add(empirical.c_paired[i], empirical.c_nbhd[i]);
      }
      JointHistogram joint_pc(bias_persistence_grid(config.grid_step));
      for (std::size_t i = 0; i < empirical.p_all.size(); ++i) {
        joint_pc.add(empirical.p_all[i], empirical.c_all[i]);
      }
      save_named_histogram(political, config.output_dir,
                           "hist_political_empirical", manifest.artifacts);
      save_named_histogram(persisted, config.output_dir,
                           "hist_persistence_empirical", manifest.artifacts);
      save_named_histogram(joint_pc, config.output_dir,
                           "hist_bias_persistence", manifest.artifacts);
    }

    EchoChamberReport report = echo_chamber_report(empirical, null_samples);
    nlohmann::ordered_json report_json = report.to_json();
    report_json["replica_seeds"] = replica_seeds;
    report_json["config"] = config.to_json();
    write_json(config.output_dir / "echo_chamber_report.json", report_json,
               manifest.artifacts);

    j["population"] = {
        {"users_total", users_total},
        {"users_kept", profiles.size()},
        {"min_comments", config.min_comments},
        {"dropped_k0_empirical", report.dropped_k0_empirical},
    };
    j["graph"] = {
        {"basis", std::string(to_string(config.projection_basis))},
        {"users", graph.user_count()},
        {"items", graph.item_count()},
        {"edges", graph.edge_count()},
        {"rewire_steps", rewire_steps},
    };
    j["replica_seeds"] = replica_seeds;
  } catch (const std::exception& err) {
    fail(err.what());
    throw;
  }

  manifest.status = "complete";
  j["status"] = "complete";
  j["artifacts"] = manifest.artifacts;
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw Error("cannot write " + manifest_path.string());
  out << j.dump(2) << "\n";
  manifest.artifacts.push_back("manifest.json");
  return manifest;
}

void write_summary(const PipelineConfig& config) {
  if (!std::filesystem::exists(config.channels_path)) {
    throw Error("channels file not found: " + config.channels_path.string());
  }
  if (!std::filesystem::exists(config.comments_path)) {
    throw Error("comments file not found: " + config.comments_path.string());
  }
  IngestOptions ingest_options;
  ingest_options.strict = config.strict_ingest;
  ingest_options.comments_format = config.comments_format;
  Dataset dataset = load_dataset(config.channels_path, config.comments_path,
                                 ingest_options);
  const DatasetSummary summary =
      summarize_dataset(dataset.channels, dataset.events);

  std::filesystem::create_directories(config.output_dir);
  std::vector<std::string> artifacts;
  write_json(config.output_dir / "summary.json", summary.to_json(), artifacts);
  write_json(config.output_dir / "ingest_report.json",
             dataset.report.to_json(), artifacts);

  {
    std::ofstream out(config.output_dir / "label_shares.csv",
                      std::ios::binary);
    out << "dimension,label,channels,videos,comments,channel_share,"
           "video_share,comment_share\n";
    for (const auto& [label, share] : summary.bias_shares) {
      write_csv_row(out, {"bias", std::string(to_string(label)),
                          std::to_string(share.channel_count),
                          std::to_string(share.video_count),
                          std::to_string(share.comment_count),
                          format_real(share.channel_share),
                          format_real(share.video_share),
                          format_real(share.comment_share)});
    }
    for (const auto& [label, share] : summary.factual_shares) {
      write_csv_row(out, {"factual", std::string(to_string(label)),
                          std::to_string(share.channel_count),
                          std::to_string(share.video_count),
                          std::to_string(share.comment_count),
                          format_real(share.channel_share),
                          format_real(share.video_share),
                          format_real(share.comment_share)});
    }
  }
  auto write_hist = [&](const std::map<std::uint64_t, std::uint64_t>& hist,
                        const std::string& name) {
    std::ofstream out(config.output_dir / name, std::ios::binary);
    out << "value,count\n";
    for (const auto& [value, count] : hist) {
      out << value << ',' << count << '\n';
    }
  };
  write_hist(summary.comments_per_user, "comments_per_user.csv");
  write_hist(summary.videos_per_channel, "videos_per_channel.csv");
}

}  // namespace echotk
