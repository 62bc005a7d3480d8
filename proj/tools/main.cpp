// SPDX-License-Identifier: Apache-2.0
//
// echotk: echo-chamber analysis over user-channel engagement data.
// Subcommands: run, summarize, synth, rewire, entropy.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "echotk/entropy.hpp"
#include "echotk/error.hpp"
#include "echotk/graph.hpp"
#include "echotk/indices.hpp"
#include "echotk/nullmodel.hpp"
#include "echotk/pipeline.hpp"
#include "echotk/synth.hpp"

#include "CLI11.hpp"

namespace {

using namespace echotk;

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("ECHOTK_OUTPUT_DIR")) {
    return env;
  }
  return "echotk_out";
}

CommentsFormat parse_comments_format(const std::string& text) {
  if (text == "auto") return CommentsFormat::kAuto;
  if (text == "csv") return CommentsFormat::kCsv;
  if (text == "jsonl") return CommentsFormat::kJsonl;
  throw ConfigError("comments format must be auto/csv/jsonl, got \"" + text +
                    "\"");
}

// Shared flags for the subcommands that read a dataset and run stages.
struct PipelineArgs {
  std::string channels;
  std::string comments;
  std::string output = default_output_dir().string();
  std::string config_file;
  std::uint64_t min_comments = kDefaultMinComments;
  std::string projection_basis = "channel";
  double grid_step = 0.01;
  std::string rewire_steps = "auto";
  std::uint64_t null_replicas = 1;
  std::uint64_t seed = 0;
  bool strict = false;
  std::string comments_format = "auto";
  unsigned threads = 0;
  bool export_graph = false;
};

void add_pipeline_flags(CLI::App& cmd, PipelineArgs& args) {
  cmd.add_option("--channels", args.channels, "Channels CSV file");
  cmd.add_option("--comments", args.comments,
                 "Comments file (CSV or JSON-lines)");
  cmd.add_option("-o,--out", args.output,
                 "Output directory (default: $ECHOTK_OUTPUT_DIR or "
                 "./echotk_out)");
  cmd.add_option("--config", args.config_file,
                 "JSON config file; explicit flags override its values");
  cmd.add_option("--min-comments", args.min_comments,
                 "Keep users with at least this many comments (default 10)");
  cmd.add_option("--projection-basis", args.projection_basis,
                 "Co-commenting projection basis: channel|video");
  cmd.add_option("--grid-step", args.grid_step,
                 "Histogram quantization step (default 0.01)");
  cmd.add_option("--rewire-steps", args.rewire_steps,
                 "Attempted rewiring steps, or \"auto\" for 10 x edges");
  cmd.add_option("--null-replicas", args.null_replicas,
                 "Number of independent null-model replicas (default 1)");
  cmd.add_option("--seed", args.seed, "Master seed (default 0)");
  cmd.add_flag("--strict", args.strict,
               "Escalate malformed rows and unknown channels to errors");
  cmd.add_option("--comments-format", args.comments_format,
                 "Force comments file format: auto|csv|jsonl");
  cmd.add_option("--threads", args.threads,
                 "Worker threads (0 = hardware concurrency)");
  cmd.add_flag("--export-graph", args.export_graph,
               "Also write the bipartite edge list CSV");
}

PipelineConfig resolve_config(const CLI::App& cmd, const PipelineArgs& args) {
  PipelineConfig config;
  if (!args.config_file.empty()) {
    config = load_pipeline_config(args.config_file, config);
  }
  auto given = [&](const std::string& flag) { return cmd.count(flag) > 0; };
  if (given("--channels") || config.channels_path.empty()) {
    config.channels_path = args.channels;
  }
  if (given("--comments") || config.comments_path.empty()) {
    config.comments_path = args.comments;
  }
  if (given("--out") || config.output_dir.empty()) {
    config.output_dir = args.output;
  }
  if (given("--min-comments")) config.min_comments = args.min_comments;
  if (given("--projection-basis")) {
    config.projection_basis = parse_projection_basis(args.projection_basis);
  }
  if (given("--grid-step")) config.grid_step = args.grid_step;
  if (given("--rewire-steps")) {
    config.rewire_steps =
        args.rewire_steps == "auto" ? 0 : std::stoull(args.rewire_steps);
  }
  if (given("--null-replicas")) config.null_replicas = args.null_replicas;
  if (given("--seed")) config.seed = args.seed;
  if (given("--strict")) config.strict_ingest = args.strict;
  if (given("--comments-format")) {
    config.comments_format = parse_comments_format(args.comments_format);
  }
  if (given("--threads")) config.threads = args.threads;
  if (given("--export-graph")) config.export_graph = args.export_graph;

  if (config.channels_path.empty() || config.comments_path.empty()) {
    throw ConfigError("--channels and --comments are required");
  }
  return config;
}

int cmd_run(const CLI::App& cmd, const PipelineArgs& args) {
  const PipelineConfig config = resolve_config(cmd, args);
  const RunManifest manifest = run_pipeline(config);
  std::cout << "run complete: " << manifest.artifacts.size()
            << " artifacts in " << config.output_dir.string() << "\n";
  return 0;
}

int cmd_summarize(const CLI::App& cmd, const PipelineArgs& args) {
  const PipelineConfig config = resolve_config(cmd, args);
  write_summary(config);
  std::cout << "summary written to " << config.output_dir.string() << "\n";
  return 0;
}

int cmd_rewire(const CLI::App& cmd, const PipelineArgs& args) {
  const PipelineConfig config = resolve_config(cmd, args);
  IngestOptions options;
  options.strict = config.strict_ingest;
  options.comments_format = config.comments_format;
  Dataset dataset =
      load_dataset(config.channels_path, config.comments_path, options);
  auto engagements = filter_min_comments(build_engagements(dataset.events),
                                         config.min_comments);
  if (engagements.empty()) {
    throw Error("empty population after filter (min_comments=" +
                std::to_string(config.min_comments) + ")");
  }
  std::vector<std::string> kept_users;
  for (const auto& engagement : engagements) {
    kept_users.push_back(engagement.user_id);
  }
  BipartiteGraph graph =
      config.projection_basis == ProjectionBasis::kChannel
          ? build_bipartite(engagements)
          : build_video_bipartite(dataset.events, kept_users);

  RewireConfig rewire_config;
  rewire_config.steps = config.rewire_steps == 0
                            ? kDefaultRewireStepsPerEdge * graph.edge_count()
                            : config.rewire_steps;
  rewire_config.seed = config.seed;
  const RewireResult result = ms_rewire(graph, rewire_config);
  const RewireReport report = rewire_report(graph, result);

  std::filesystem::create_directories(config.output_dir);
  {
    std::ofstream out(config.output_dir / "rewired_edges.csv",
                      std::ios::binary);
    out << "user_id,item_id\n";
    for (std::uint32_t u = 0; u < result.graph.user_count(); ++u) {
      for (std::uint32_t item : result.graph.user_items[u]) {
        out << result.graph.user_ids[u] << ',' << result.graph.item_ids[item]
            << '\n';
      }
    }
  }
  {
    std::ofstream out(config.output_dir / "rewire_report.json",
                      std::ios::binary);
    out << report.to_json().dump(2) << "\n";
  }
  std::cout << "rewired " << report.edges << " edges: accepted "
            << report.accepted << ", aborted " << report.aborted << "\n";
  return 0;
}

int run_main(int argc, char** argv) {
  CLI::App app{"echotk " + std::string(kToolkitVersion) +
               " - echo-chamber analysis for user-channel engagement data"};
  app.require_subcommand(1);

  PipelineArgs run_args;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "Full pipeline: ingest, filter, indices, projection, null "
             "model, entropy, exports");
  add_pipeline_flags(*run_cmd, run_args);

  PipelineArgs summarize_args;
  CLI::App* summarize_cmd = app.add_subcommand(
      "summarize", "Dataset summary: label shares and activity histograms");
  add_pipeline_flags(*summarize_cmd, summarize_args);

  PipelineArgs rewire_args;
  CLI::App* rewire_cmd = app.add_subcommand(
      "rewire", "Degree-preserving rewiring of the bipartite graph only");
  add_pipeline_flags(*rewire_cmd, rewire_args);

  // synth
  SynthConfig synth_config;
  std::string synth_channels_out = "channels.csv";
  std::string synth_comments_out = "comments.csv";
  std::string synth_comment_spec = "constant:10";
  std::vector<double> synth_bias_weights;
  std::vector<double> synth_factual_weights;
  std::vector<std::string> synth_modes;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Generate a synthetic dataset with planted homophily");
  synth_cmd->add_option("--n-users", synth_config.n_users, "Number of users");
  synth_cmd->add_option("--n-channels", synth_config.n_channels,
                        "Number of channels");
  synth_cmd->add_option("--comments-per-user", synth_comment_spec,
                        "constant:<n> or lognormal:<median>,<sigma>");
  synth_cmd->add_option("--bias-weights", synth_bias_weights,
                        "7 nonnegative weights, extreme-left..extreme-right")
      ->expected(7);
  synth_cmd->add_option("--factual-weights", synth_factual_weights,
                        "6 nonnegative weights, very-low..very-high")
      ->expected(6);
  synth_cmd->add_option("--homophily", synth_config.homophily,
                        "Channel-choice homophily in [0, 1]");
  synth_cmd->add_option("--coupling", synth_config.bias_factual_coupling,
                        "Bias-factual coupling in [-1, 1]");
  synth_cmd->add_option("--tau", synth_config.kernel_tau,
                        "Closeness kernel width (default 0.25)");
  synth_cmd->add_option("--videos-per-channel",
                        synth_config.videos_per_channel,
                        "Video pool size per channel");
  synth_cmd->add_option("--mode", synth_modes,
                        "Latent mode center[:sigma[:weight]]; repeatable");
  synth_cmd->add_option("--seed", synth_config.seed, "Seed");
  synth_cmd->add_option("--out-channels", synth_channels_out,
                        "Channels CSV output path");
  synth_cmd->add_option("--out-comments", synth_comments_out,
                        "Comments CSV output path");

  // entropy re-analysis
  std::string entropy_matrix;
  std::string entropy_meta;
  std::string entropy_out;
  CLI::App* entropy_cmd = app.add_subcommand(
      "entropy", "Recompute normalized joint entropy from an exported "
                 "histogram");
  entropy_cmd->add_option("--matrix", entropy_matrix, "Histogram count CSV")
      ->required();
  entropy_cmd->add_option("--meta", entropy_meta, "Histogram metadata JSON")
      ->required();
  entropy_cmd->add_option("-o,--out", entropy_out,
                          "Write the result JSON here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) return cmd_run(*run_cmd, run_args);
  if (summarize_cmd->parsed()) return cmd_summarize(*summarize_cmd,
                                                    summarize_args);
  if (rewire_cmd->parsed()) return cmd_rewire(*rewire_cmd, rewire_args);

  if (synth_cmd->parsed()) {
    if (synth_comment_spec.rfind("constant:", 0) == 0) {
      synth_config.comments_per_user = CommentCountSpec::constant_count(
          std::stoull(synth_comment_spec.substr(9)));
    } else if (synth_comment_spec.rfind("lognormal:", 0) == 0) {
      const std::string rest = synth_comment_spec.substr(10);
      const auto comma = rest.find(',');
      if (comma == std::string::npos) {
        throw ConfigError("lognormal spec needs <median>,<sigma>");
      }
      synth_config.comments_per_user = CommentCountSpec::lognormal(
          std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)));
    } else {
      throw ConfigError("comments-per-user must be constant:<n> or "
                        "lognormal:<median>,<sigma>");
    }
    if (!synth_bias_weights.empty()) {
      std::copy(synth_bias_weights.begin(), synth_bias_weights.end(),
                synth_config.bias_label_weights.begin());
    }
    if (!synth_factual_weights.empty()) {
      std::copy(synth_factual_weights.begin(), synth_factual_weights.end(),
                synth_config.factual_label_weights.begin());
    }
    for (const std::string& text : synth_modes) {
      LatentMode mode;
      std::size_t a = text.find(':');
      mode.center = std::stod(text.substr(0, a));
      if (a != std::string::npos) {
        std::size_t b = text.find(':', a + 1);
        mode.sigma = std::stod(text.substr(a + 1, b - a - 1));
        if (b != std::string::npos) mode.weight = std::stod(text.substr(b + 1));
      }
      synth_config.modes.push_back(mode);
    }
    const SynthDataset dataset = generate(synth_config);
    write_channels_csv(synth_channels_out, dataset.channels);
    write_comments_csv(synth_comments_out, dataset.events);
    std::cout << "generated " << dataset.channels.size() << " channels, "
              << dataset.events.size() << " comments\n";
    return 0;
  }

  if (entropy_cmd->parsed()) {
    const JointHistogram hist = load_histogram(entropy_matrix, entropy_meta);
    const EntropyResult result = joint_entropy(hist);
    const std::string text = result.to_json().dump(2) + "\n";
    if (entropy_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(entropy_out, std::ios::binary);
      out << text;
    }
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
