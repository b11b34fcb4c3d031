#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srdm/distributions.hpp"
#include "srdm/grouping.hpp"
#include "srdm/parallel.hpp"
#include "srdm/patches.hpp"
#include "srdm/resample.hpp"

namespace srdm {

struct MetricConfig {
  int scale = 4;
  int patch_size = 13;
  int stride = 0;          // 0 = use scale
  int n_groups = 0;        // 0 = auto: max(1, total_samples / 1000)
  int min_group_samples = 50;
  Distance distance = Distance::wasserstein;
  GroupingMode grouping_mode = GroupingMode::projected_fpc;
  int pixel_dr = -1;       // -1 = default floor((s-1)/2)
  int pixel_dc = -1;
  std::uint64_t seed = 0;

  void validate() const {
    if (scale < 2) throw std::invalid_argument("config: scale must be >= 2");
    if (patch_size < 3 || patch_size % 2 == 0)
      throw std::invalid_argument("config: patch_size must be odd and >= 3");
    if (stride < 0) throw std::invalid_argument("config: stride must be >= 1 (or 0 for default)");
    if (min_group_samples < 1) throw std::invalid_argument("config: min_group_samples must be >= 1");
  }

  int effective_stride() const { return stride == 0 ? scale : stride; }
  PixelOffset effective_offset() const {
    if (pixel_dr < 0 || pixel_dc < 0) return default_pixel_offset(scale);
    return {pixel_dr, pixel_dc};
  }
  int effective_groups(std::size_t total_samples) const {
    if (n_groups > 0) return n_groups;
    return std::max<int>(1, static_cast<int>(total_samples / 1000));
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["scale"] = scale;
    j["patch_size"] = patch_size;
    j["stride"] = effective_stride();
    j["n_groups"] = n_groups == 0 ? nlohmann::json("auto") : nlohmann::json(n_groups);
    j["min_group_samples"] = min_group_samples;
    j["distance"] = to_string(distance);
    j["grouping_mode"] = to_string(grouping_mode);
    PixelOffset off = effective_offset();
    j["pixel_offset"] = {off.dr, off.dc};
    j["seed"] = seed;
    return j;
  }
};

struct GroupDistance {
  int group = 0;
  std::uint64_t gt_count = 0;
  std::uint64_t gen_count = 0;
  double distance = 0.0;
};

struct MetricReport {
  double aggregate = 0.0;  // mean of per-group distances over surviving groups
  std::vector<GroupDistance> per_group;
  int dropped_groups = 0;
  std::uint64_t total_samples = 0;
  MetricConfig config;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["aggregate"] = aggregate;
    j["dropped_groups"] = dropped_groups;
    j["total_samples"] = total_samples;
    j["config"] = config.to_json();
    j["per_group"] = nlohmann::json::array();
    for (const auto& g : per_group)
      j["per_group"].push_back({{"group", g.group},
                                {"gt_count", g.gt_count},
                                {"gen_count", g.gen_count},
                                {"distance", g.distance}});
    return j;
  }
};

// One group's projected GT / generated sample values.
struct GroupValues {
  std::vector<std::uint8_t> gt;
  std::vector<std::uint8_t> gen;
};

// Mean per-group distribution distance; groups where either side has fewer
// than min_samples values are dropped and counted, not merged.
inline MetricReport aggregate_grouped(const std::vector<GroupValues>& groups, Distance dist,
                                      int min_samples) {
  MetricReport report;
  std::vector<int> keep;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    report.total_samples += groups[g].gt.size();
    if (groups[g].gt.size() < static_cast<std::size_t>(min_samples) ||
        groups[g].gen.size() < static_cast<std::size_t>(min_samples)) {
      ++report.dropped_groups;
    } else {
      keep.push_back(static_cast<int>(g));
    }
  }
  if (keep.empty()) throw std::runtime_error("metric: all groups dropped");

  report.per_group.resize(keep.size());
  parallel_for(keep.size(), [&](std::size_t i) {
    const auto& gv = groups[keep[i]];
    GroupDistance gd;
    gd.group = keep[i];
    gd.gt_count = gv.gt.size();
    gd.gen_count = gv.gen.size();
    gd.distance = distribution_distance(histogram(gv.gt), histogram(gv.gen), dist);
    report.per_group[i] = gd;
  });
  double sum = 0.0;
  for (const auto& g : report.per_group) sum += g.distance;
  report.aggregate = sum / static_cast<double>(report.per_group.size());
  return report;
}

inline std::vector<GroupValues> collect_group_values(const PatchPairSet& patchset,
                                                     const GroupingModel& model) {
  std::vector<GroupValues> groups(model.k);
  for (std::size_t i = 0; i < patchset.samples.size(); ++i) {
    auto& g = groups[model.assignments[i]];
    g.gt.push_back(patchset.samples[i].gt_value);
    g.gen.push_back(patchset.samples[i].gen_value);
  }
  return groups;
}

// The grouped projected metric on an already-extracted patch set.
inline MetricReport compute_metric_on_samples(const PatchPairSet& patchset,
                                              const MetricConfig& config) {
  config.validate();
  if (patchset.samples.empty()) throw std::invalid_argument("metric: no valid patches");
  int k = config.effective_groups(patchset.samples.size());
  k = std::min<int>(k, static_cast<int>(patchset.samples.size()));
  GroupingModel model = build_grouping(patchset, config.grouping_mode, k, config.seed);
  MetricReport report = aggregate_grouped(collect_group_values(patchset, model),
                                          config.distance, config.min_group_samples);
  report.config = config;
  return report;
}

struct ImageTriple {
  GrayImage lr;
  GrayImage hr_gt;
  GrayImage hr_gen;
};

inline PatchPairSet extract_dataset(const std::vector<ImageTriple>& dataset,
                                    const MetricConfig& config) {
  config.validate();
  PatchPairSet all;
  all.patch_size = config.patch_size;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    PatchPairSet one = extract_patch_pairs(dataset[i].lr, dataset[i].hr_gt, dataset[i].hr_gen,
                                           config.patch_size, config.scale,
                                           config.effective_stride(), config.effective_offset(),
                                           static_cast<int>(i));
    all.samples.insert(all.samples.end(), one.samples.begin(), one.samples.end());
  }
  return all;
}

// Pooled dataset-level metric: every image's patches enter one grouping.
inline MetricReport compute_metric(const std::vector<ImageTriple>& dataset,
                                   const MetricConfig& config) {
  return compute_metric_on_samples(extract_dataset(dataset, config), config);
}

// Non-default per-image mode: the metric per triple, averaged.
inline double compute_metric_per_image(const std::vector<ImageTriple>& dataset,
                                       const MetricConfig& config) {
  if (dataset.empty()) throw std::invalid_argument("metric: empty dataset");
  double sum = 0.0;
  for (const auto& triple : dataset)
    sum += compute_metric({triple}, config).aggregate;
  return sum / static_cast<double>(dataset.size());
}

// Ideal per-instance metric: mean over discrete keys of the distance between
// the per-key GT and generated sample distributions. Only meaningful on
// synthetic data where many HR samples exist per exact LR instance.
inline double compute_instance_metric(const std::vector<GroupValues>& per_key, Distance dist) {
  if (per_key.empty()) throw std::invalid_argument("instance metric: no keys");
  double sum = 0.0;
  for (const auto& key : per_key) {
    if (key.gt.empty() || key.gen.empty())
      throw std::invalid_argument("instance metric: empty value list for a key");
    sum += distribution_distance(histogram(key.gt), histogram(key.gen), dist);
  }
  return sum / static_cast<double>(per_key.size());
}

struct SubsampleResult {
  double mean = 0.0;
  double variance = 0.0;
};

// Repeatedly draws n_per_group samples (without replacement) from each group's
// GT and generated sample sets, recomputes the aggregate, and reports the mean
// and variance over repetitions. Groups smaller than n_per_group are dropped
// per repetition.
inline SubsampleResult metric_with_subsampling(const std::vector<ImageTriple>& dataset,
                                               const MetricConfig& config, int n_per_group,
                                               int repetitions, std::uint64_t seed) {
  if (repetitions < 1) throw std::invalid_argument("subsampling: repetitions must be >= 1");
  if (n_per_group < 1) throw std::invalid_argument("subsampling: n_per_group must be >= 1");
  PatchPairSet patchset = extract_dataset(dataset, config);
  if (patchset.samples.empty()) throw std::invalid_argument("metric: no valid patches");
  int k = config.effective_groups(patchset.samples.size());
  k = std::min<int>(k, static_cast<int>(patchset.samples.size()));
  GroupingModel model = build_grouping(patchset, config.grouping_mode, k, config.seed);
  std::vector<GroupValues> groups = collect_group_values(patchset, model);

  std::mt19937_64 rng(seed);
  auto draw = [&rng, n_per_group](const std::vector<std::uint8_t>& pool) {
    std::vector<std::uint8_t> out;
    out.reserve(n_per_group);
    std::sample(pool.begin(), pool.end(), std::back_inserter(out),
                static_cast<std::size_t>(n_per_group), rng);
    return out;
  };

  std::vector<double> aggregates;
  aggregates.reserve(repetitions);
  for (int rep = 0; rep < repetitions; ++rep) {
    std::vector<GroupValues> sub;
    for (const auto& g : groups) {
      if (g.gt.size() < static_cast<std::size_t>(n_per_group) ||
          g.gen.size() < static_cast<std::size_t>(n_per_group))
        continue;
      sub.push_back({draw(g.gt), draw(g.gen)});
    }
    if (sub.empty()) throw std::runtime_error("subsampling: all groups smaller than n_per_group");
    aggregates.push_back(aggregate_grouped(sub, config.distance, 1).aggregate);
  }

  SubsampleResult res;
  for (double a : aggregates) res.mean += a;
  res.mean /= static_cast<double>(aggregates.size());
  for (double a : aggregates) res.variance += (a - res.mean) * (a - res.mean);
  res.variance /= static_cast<double>(aggregates.size());
  return res;
}

// Back-projection fidelity: RMSE between the downsampled SR image and the LR
// input, on the 0-255 scale.
inline double back_projection_error(const GrayImage& sr, const GrayImage& lr, int s,
                                    Kernel kernel) {
  if (sr.width != lr.width * s || sr.height != lr.height * s)
    throw std::invalid_argument("back_projection_error: SR dims must be s x LR dims");
  GrayImage down = downsample(sr, s, kernel);
  double sum = 0.0;
  for (std::size_t i = 0; i < down.data.size(); ++i) {
    double d = static_cast<double>(down.data[i]) - static_cast<double>(lr.data[i]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(down.data.size()));
}

}  // namespace srdm
