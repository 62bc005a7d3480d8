// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "echotk/indices.hpp"

#include "json.hpp"

namespace echotk {

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double step = 0.01;
};

// (p, p^N) pairs live on [-1,1]^2: 200x200 cells at the default step.
GridSpec political_grid(double step = 0.01);
// (c, c^N) pairs live on [0,1]^2: 100x100 cells.
GridSpec persistence_grid(double step = 0.01);
// (p, c) pairs: 200x100 cells.
GridSpec bias_persistence_grid(double step = 0.01);

// Quantized 2D frequency matrix. Bins are half-open [lo, hi) except the
// last bin on each axis, which is closed so the upper range endpoint has a
// deterministic home.
class JointHistogram {
 public:
  explicit JointHistogram(const GridSpec& grid);

  // Throws Error naming the value when (x, y) is outside the closed ranges.
  void add(double x, double y);
  // Integer count matrices over the same grid add cell-wise.
  void merge(const JointHistogram& other);

  const GridSpec& grid() const { return grid_; }
  std::size_t bins_x() const { return bins_x_; }
  std::size_t bins_y() const { return bins_y_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t n_cells() const {
    return static_cast<std::uint64_t>(bins_x_) * bins_y_;
  }
  std::uint64_t at(std::size_t ix, std::size_t iy) const {
    return counts_[ix * bins_y_ + iy];
  }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  std::vector<std::uint64_t> marginal_x() const;
  std::vector<std::uint64_t> marginal_y() const;

  // Used by the re-analysis path; counts must match an empty histogram's
  // shape for the grid.
  void set_counts(std::vector<std::uint64_t> counts);

 private:
  GridSpec grid_;
  std::size_t bins_x_ = 0;
  std::size_t bins_y_ = 0;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

JointHistogram build_histogram(
    std::span<const std::pair<double, double>> pairs, const GridSpec& grid);

struct EntropyResult {
  double raw_bits = 0.0;
  double normalized = 0.0;  // raw_bits / log2(n_cells), in [0, 1]
  std::uint64_t n_cells = 0;
  std::uint64_t population = 0;

  nlohmann::ordered_json to_json() const;
};

// H = -sum P log2 P over cells, P = count/total, empty cells contributing
// zero; accumulated in fixed row-major order. Throws on an empty histogram.
EntropyResult joint_entropy(const JointHistogram& hist);

struct CorrelationResult {
  bool defined = false;  // false when either side has zero variance
  double r = 0.0;
};

CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

// One population's paired index values, split by whether the user has any
// projection neighbors. Users with k = 0 have no neighborhood averages and
// are dropped from the joint histograms (dropped_k0 records how many).
struct IndexSample {
  std::vector<double> p_all, c_all;              // every user
  std::vector<double> p_paired, p_nbhd;          // users with k >= 1
  std::vector<double> c_paired, c_nbhd;
  std::uint64_t dropped_k0 = 0;
  double grid_step = 0.01;
};

IndexSample make_index_sample(const std::vector<UserProfile>& profiles,
                              double grid_step = 0.01);

struct DimensionComparison {
  EntropyResult empirical;
  std::vector<EntropyResult> null_replicas;
  double null_mean_normalized = 0.0;
  double entropy_gap = 0.0;  // empirical minus null mean, normalized
  CorrelationResult correlation_empirical;
  std::vector<CorrelationResult> correlation_null;
};

struct EchoChamberReport {
  DimensionComparison political;    // (p, p^N)
  DimensionComparison persistence;  // (c, c^N)
  EntropyResult bias_persistence;   // (p, c) joint distribution, 200x100
  std::uint64_t dropped_k0_empirical = 0;
  std::vector<std::uint64_t> dropped_k0_null;
  double grid_step = 0.01;

  nlohmann::ordered_json to_json() const;
};

// Builds the four entropy results (political/persistence x empirical/null)
// plus correlations and gaps. Throws when the populations were sampled on
// different grid settings.
EchoChamberReport echo_chamber_report(const IndexSample& empirical,
                                      const std::vector<IndexSample>& nulls);

// Plot-data exports: count matrix as CSV (one row per x-bin), metadata as
// JSON, marginals as two CSV vectors.
void save_histogram(const JointHistogram& hist,
                    const std::filesystem::path& dir, const std::string& name);
JointHistogram load_histogram(const std::filesystem::path& matrix_csv,
                              const std::filesystem::path& meta_json);

}  // namespace echotk
