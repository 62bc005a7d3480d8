// SPDX-License-Identifier: Apache-2.0
#include "echotk/entropy.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "echotk/error.hpp"
#include "echotk/exact_sum.hpp"

namespace echotk {

GridSpec political_grid(double step) { return {-1.0, 1.0, -1.0, 1.0, step}; }
GridSpec persistence_grid(double step) { return {0.0, 1.0, 0.0, 1.0, step}; }
GridSpec bias_persistence_grid(double step) {
  return {-1.0, 1.0, 0.0, 1.0, step};
}

namespace {

std::size_t grid_bins(double lo, double hi, double step, const char* axis) {
  if (!(step > 0.0)) {
    throw Error("histogram step must be positive, got " +
                std::to_string(step));
  }
  const double width = hi - lo;
  if (!(width > 0.0)) {
    throw Error(std::string("histogram ") + axis + " range is empty");
  }
  const double ratio = width / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9) {
    throw Error(std::string("step ") + std::to_string(step) +
                " does not divide the " + axis + " range width " +
                std::to_string(width));
  }
  return static_cast<std::size_t>(rounded);
}

std::size_t bin_index(double value, double lo, double step,
                      std::size_t bins) {
  // Half-open [lo, hi) cells with the last cell closed: the range maximum
  // lands in bin bins-1 instead of falling out.
  const double offset = (value - lo) / step;
  auto index = static_cast<std::int64_t>(std::floor(offset));
  if (index < 0) index = 0;
  if (index >= static_cast<std::int64_t>(bins)) {
    index = static_cast<std::int64_t>(bins) - 1;
  }
  return static_cast<std::size_t>(index);
}

}  // namespace

JointHistogram::JointHistogram(const GridSpec& grid) : grid_(grid) {
  bins_x_ = grid_bins(grid.x_min, grid.x_max, grid.step, "x");
  bins_y_ = grid_bins(grid.y_min, grid.y_max, grid.step, "y");
  counts_.assign(bins_x_ * bins_y_, 0);
}

void JointHistogram::add(double x, double y) {
  if (!(x >= grid_.x_min && x <= grid_.x_max) ||
      !(y >= grid_.y_min && y <= grid_.y_max)) {
    std::ostringstream msg;
    msg << "pair (" << x << ", " << y << ") outside histogram ranges ["
        << grid_.x_min << ", " << grid_.x_max << "] x [" << grid_.y_min
        << ", " << grid_.y_max << "]";
    throw Error(msg.str());
  }
  const std::size_t ix = bin_index(x, grid_.x_min, grid_.step, bins_x_);
  const std::size_t iy = bin_index(y, grid_.y_min, grid_.step, bins_y_);
  ++counts_[ix * bins_y_ + iy];
  ++total_;
}

void JointHistogram::merge(const JointHistogram& other) {
  if (other.bins_x_ != bins_x_ || other.bins_y_ != bins_y_ ||
      other.grid_.x_min != grid_.x_min || other.grid_.x_max != grid_.x_max ||
      other.grid_.y_min != grid_.y_min || other.grid_.y_max != grid_.y_max ||
      other.grid_.step != grid_.step) {
    throw Error("cannot merge histograms with different grids");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
  }
  total_ += other.total_;
}

std::vector<std::uint64_t> JointHistogram::marginal_x() const {
  std::vector<std::uint64_t> out(bins_x_, 0);
  for (std::size_t ix = 0; ix < bins_x_; ++ix) {
    for (std::size_t iy = 0; iy < bins_y_; ++iy) {
      out[ix] += counts_[ix * bins_y_ + iy];
    }
  }
  return out;
}

std::vector<std::uint64_t> JointHistogram::marginal_y() const {
  std::vector<std::uint64_t> out(bins_y_, 0);
  for (std::size_t ix = 0; ix < bins_x_; ++ix) {
    for (std::size_t iy = 0; iy < bins_y_; ++iy) {
      out[iy] += counts_[ix * bins_y_ + iy];
    }
  }
  return out;
}

void JointHistogram::set_counts(std::vector<std::uint64_t> counts) {
  if (counts.size() != bins_x_ * bins_y_) {
    throw Error("count matrix does not match the histogram shape");
  }
  total_ = 0;
  for (std::uint64_t count : counts) total_ += count;
  counts_ = std::move(counts);
}

JointHistogram build_histogram(
    std::span<const std::pair<double, double>> pairs, const GridSpec& grid) {
  JointHistogram hist(grid);
  for (const auto& [x, y] : pairs) hist.add(x, y);
  return hist;
}

EntropyResult joint_entropy(const JointHistogram& hist) {
  if (hist.total() == 0) {
    throw Error("joint_entropy: empty histogram");
  }
  const double total = static_cast<double>(hist.total());
  // Fixed row-major order with exact accumulation, so the result does not
  // depend on how the histogram was assembled.
  ExactSum sum;
  for (std::uint64_t count : hist.counts()) {
    if (count == 0) continue;
    const double probability = static_cast<double>(count) / total;
    sum.add(probability * std::log2(probability));
  }
  EntropyResult result;
  result.raw_bits = 0.0 - sum.value();
  result.n_cells = hist.n_cells();
  result.population = hist.total();
  if (result.n_cells <= 1) {
    result.normalized = 0.0;
  } else {
    result.normalized =
        result.raw_bits / std::log2(static_cast<double>(result.n_cells));
  }
  if (result.normalized < 0.0) result.normalized = 0.0;
  if (result.normalized > 1.0) result.normalized = 1.0;
  return result;
}

nlohmann::ordered_json EntropyResult::to_json() const {
  nlohmann::ordered_json j;
  j["raw_bits"] = raw_bits;
  j["normalized"] = normalized;
  j["n_cells"] = n_cells;
  j["population"] = population;
  return j;
}

CorrelationResult pearson(std::span<const double> x,
                          std::span<const double> y) {
  CorrelationResult result;
  if (x.size() != y.size() || x.size() < 2) return result;
  const double n = static_cast<double>(x.size());
  ExactSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  ExactSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  const double vx = sxx.value();
  const double vy = syy.value();
  if (vx <= 0.0 || vy <= 0.0) return result;  // zero variance: undefined
  result.defined = true;
  result.r = sxy.value() / std::sqrt(vx * vy);
  if (result.r > 1.0) result.r = 1.0;
  if (result.r < -1.0) result.r = -1.0;
  return result;
}

IndexSample make_index_sample(const std::vector<UserProfile>& profiles,
                              double grid_step) {
  IndexSample sample;
  sample.grid_step = grid_step;
  for (const auto& profile : profiles) {
    sample.p_all.push_back(profile.p);
    sample.c_all.push_back(profile.c);
    if (profile.p_neighborhood && profile.c_neighborhood) {
      sample.p_paired.push_back(profile.p);
      sample.p_nbhd.push_back(*profile.p_neighborhood);
      sample.c_paired.push_back(profile.c);
      sample.c_nbhd.push_back(*profile.c_neighborhood);
    } else {
      ++sample.dropped_k0;
    }
  }
  return sample;
}

namespace {

JointHistogram paired_histogram(const std::vector<double>& x,
                                const std::vector<double>& y,
                                const GridSpec& grid) {
  JointHistogram hist(grid);
  for (std::size_t i = 0; i < x.size(); ++i) hist.add(x[i], y[i]);
  return hist;
}

DimensionComparison compare_dimension(
    const IndexSample& empirical, const std::vector<IndexSample>& nulls,
    const GridSpec& grid, std::vector<double> IndexSample::*paired,
    std::vector<double> IndexSample::*nbhd) {
  DimensionComparison cmp;
  cmp.empirical =
      joint_entropy(paired_histogram(empirical.*paired, empirical.*nbhd, grid));
  cmp.correlation_empirical = pearson(empirical.*paired, empirical.*nbhd);

  ExactSum null_norm;
  for (const auto& null_sample : nulls) {
    cmp.null_replicas.push_back(joint_entropy(
        paired_histogram(null_sample.*paired, null_sample.*nbhd, grid)));
    cmp.correlation_null.push_back(
        pearson(null_sample.*paired, null_sample.*nbhd));
    null_norm.add(cmp.null_replicas.back().normalized);
  }
  if (!nulls.empty()) {
    cmp.null_mean_normalized =
        null_norm.value() / static_cast<double>(nulls.size());
    cmp.entropy_gap = cmp.empirical.normalized - cmp.null_mean_normalized;
  }
  return cmp;
}

nlohmann::ordered_json correlation_json(const CorrelationResult& corr) {
  nlohmann::ordered_json j;
  j["defined"] = corr.defined;
  if (corr.defined) {
    j["r"] = corr.r;
  } else {
    j["r"] = nullptr;
  }
  return j;
}

}  // namespace

EchoChamberReport echo_chamber_report(const IndexSample& empirical,
                                      const std::vector<IndexSample>& nulls) {
  for (const auto& null_sample : nulls) {
    if (null_sample.grid_step != empirical.grid_step) {
      throw Error("echo_chamber_report: grid step mismatch between "
                  "empirical and null populations");
    }
  }
  if (empirical.p_paired.empty()) {
    throw Error("echo_chamber_report: empirical population has no users "
                "with neighbors");
  }

  EchoChamberReport report;
  report.grid_step = empirical.grid_step;
  report.dropped_k0_empirical = empirical.dropped_k0;
  for (const auto& null_sample : nulls) {
    report.dropped_k0_null.push_back(null_sample.dropped_k0);
  }

  report.political =
      compare_dimension(empirical, nulls, political_grid(empirical.grid_step),
                        &IndexSample::p_paired, &IndexSample::p_nbhd);
  report.persistence = compare_dimension(
      empirical, nulls, persistence_grid(empirical.grid_step),
      &IndexSample::c_paired, &IndexSample::c_nbhd);

  JointHistogram pc(bias_persistence_grid(empirical.grid_step));
  for (std::size_t i = 0; i < empirical.p_all.size(); ++i) {
    pc.add(empirical.p_all[i], empirical.c_all[i]);
  }
  report.bias_persistence = joint_entropy(pc);
  return report;
}

nlohmann::ordered_json EchoChamberReport::to_json() const {
  auto dimension_json = [](const DimensionComparison& cmp) {
    nlohmann::ordered_json j;
    j["empirical"] = cmp.empirical.to_json();
    nlohmann::ordered_json replicas = nlohmann::ordered_json::array();
    for (const auto& r : cmp.null_replicas) replicas.push_back(r.to_json());
    j["null_replicas"] = std::move(replicas);
    j["null_mean_normalized"] = cmp.null_mean_normalized;
    j["entropy_gap"] = cmp.entropy_gap;
    j["correlation_empirical"] = correlation_json(cmp.correlation_empirical);
    nlohmann::ordered_json corr_null = nlohmann::ordered_json::array();
    for (const auto& corr : cmp.correlation_null) {
      corr_null.push_back(correlation_json(corr));
    }
    j["correlation_null"] = std::move(corr_null);
    return j;
  };

  nlohmann::ordered_json j;
  j["grid_step"] = grid_step;
  j["political"] = dimension_json(political);
  j["persistence"] = dimension_json(persistence);
  j["bias_persistence"] = bias_persistence.to_json();
  j["dropped_k0_empirical"] = dropped_k0_empirical;
  j["dropped_k0_null"] = dropped_k0_null;
  return j;
}

void save_histogram(const JointHistogram& hist,
                    const std::filesystem::path& dir,
                    const std::string& name) {
  const auto matrix_path = dir / (name + ".csv");
  std::ofstream matrix(matrix_path);
  if (!matrix) throw Error("cannot write " + matrix_path.string());
  for (std::size_t ix = 0; ix < hist.bins_x(); ++ix) {
    for (std::size_t iy = 0; iy < hist.bins_y(); ++iy) {
      if (iy) matrix << ',';
      matrix << hist.at(ix, iy);
    }
    matrix << '\n';
  }

  nlohmann::ordered_json meta;
  meta["x_min"] = hist.grid().x_min;
  meta["x_max"] = hist.grid().x_max;
  meta["y_min"] = hist.grid().y_min;
  meta["y_max"] = hist.grid().y_max;
  meta["step"] = hist.grid().step;
  meta["bins_x"] = hist.bins_x();
  meta["bins_y"] = hist.bins_y();
  meta["total"] = hist.total();
  std::ofstream meta_out(dir / (name + ".meta.json"));
  meta_out << meta.dump(2) << '\n';

  auto write_marginal = [&](const std::vector<std::uint64_t>& counts,
                            const std::string& suffix, double lo) {
    std::ofstream out(dir / (name + suffix));
    out << "bin,lo,count\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      out << i << ',' << (lo + static_cast<double>(i) * hist.grid().step)
          << ',' << counts[i] << '\n';
    }
  };
  write_marginal(hist.marginal_x(), ".marginal_x.csv", hist.grid().x_min);
  write_marginal(hist.marginal_y(), ".marginal_y.csv", hist.grid().y_min);
}

JointHistogram load_histogram(const std::filesystem::path& matrix_csv,
                              const std::filesystem::path& meta_json) {
  std::ifstream meta_in(meta_json);
  if (!meta_in) throw Error("cannot open " + meta_json.string());
  nlohmann::json meta = nlohmann::json::parse(meta_in);
  GridSpec grid{meta.at("x_min").get<double>(), meta.at("x_max").get<double>(),
                meta.at("y_min").get<double>(), meta.at("y_max").get<double>(),
                meta.at("step").get<double>()};
  JointHistogram hist(grid);

  std::ifstream matrix_in(matrix_csv);
  if (!matrix_in) throw Error("cannot open " + matrix_csv.string());
  std::vector<std::uint64_t> counts;
  counts.reserve(hist.n_cells());
  std::string line;
  while (std::getline(matrix_in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      counts.push_back(std::stoull(cell));
    }
  }
  hist.set_counts(std::move(counts));
  return hist;
}

}  // namespace echotk
