#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srdm/kmeans.hpp"
#include "srdm/patches.hpp"
#include "srdm/pca.hpp"

namespace srdm {

// How LR patches are partitioned: directly in r^2-dimensional patch space, or
// in a 1-D projection of the patch (first principal component or mean
// intensity).
enum class GroupingMode { direct, projected_fpc, projected_ones };

inline GroupingMode grouping_mode_from_string(const std::string& s) {
  if (s == "direct") return GroupingMode::direct;
  if (s == "projected_fpc") return GroupingMode::projected_fpc;
  if (s == "projected_ones") return GroupingMode::projected_ones;
  throw std::invalid_argument("unknown grouping mode: " + s);
}

inline const char* to_string(GroupingMode m) {
  switch (m) {
    case GroupingMode::direct: return "direct";
    case GroupingMode::projected_fpc: return "projected_fpc";
    default: return "projected_ones";
  }
}

struct GroupingModel {
  GroupingMode mode = GroupingMode::projected_fpc;
  int k = 1;
  std::vector<std::vector<double>> centroids;  // dim r^2 for direct, 1 otherwise
  std::vector<double> projection;              // unit-norm, empty for direct
  std::vector<int> assignments;                // per sample, in [0, k)
  std::uint64_t seed = 0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["mode"] = to_string(mode);
    j["k"] = k;
    j["seed"] = seed;
    j["centroids"] = centroids;
    if (!projection.empty()) j["projection"] = projection;
    return j;
  }
};

// Partitions the LR patches of a PatchPairSet into k groups via K-means. The
// projection (when used) is fitted on the LR patches themselves, so the GT and
// generated distributions are compared under one shared partition.
inline GroupingModel build_grouping(const PatchPairSet& patchset, GroupingMode mode, int k,
                                    std::uint64_t seed) {
  if (patchset.samples.empty()) throw std::invalid_argument("build_grouping: empty patch set");
  if (k < 1 || static_cast<std::size_t>(k) > patchset.samples.size())
    throw std::invalid_argument("build_grouping: k out of range");

  GroupingModel model;
  model.mode = mode;
  model.k = k;
  model.seed = seed;

  std::vector<std::vector<double>> points;
  points.reserve(patchset.samples.size());
  if (mode == GroupingMode::direct) {
    for (const auto& s : patchset.samples)
      points.emplace_back(s.lr_patch.begin(), s.lr_patch.end());
  } else {
    const std::size_t dim = patchset.samples[0].lr_patch.size();
    if (mode == GroupingMode::projected_fpc) {
      std::vector<std::vector<double>> raw;
      raw.reserve(patchset.samples.size());
      for (const auto& s : patchset.samples) raw.emplace_back(s.lr_patch.begin(), s.lr_patch.end());
      model.projection = first_principal_component(raw);
    } else {
      model.projection.assign(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    }
    for (const auto& s : patchset.samples) {
      double v = 0.0;
      for (std::size_t d = 0; d < dim; ++d) v += model.projection[d] * s.lr_patch[d];
      points.push_back({v});
    }
  }

  KMeansResult km = kmeans(points, k, seed);
  model.centroids = std::move(km.centroids);
  model.assignments = std::move(km.assignments);
  return model;
}

}  // namespace srdm
