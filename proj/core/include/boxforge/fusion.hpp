#pragma once

#include <cstddef>
#include <vector>

#include "boxforge/types.hpp"

namespace boxforge::fusion {

struct FusionConfig {
  // Overlap at or above this joins a cluster (wbf) or suppresses (nms).
  double iou_threshold = 0.55;
  // Detections with raw score strictly below this are dropped at entry.
  double score_threshold = 0.0;
  // Number of models in the ensemble; drives the wbf score rescale.
  int num_models = 1;
  // Per-model score multipliers, indexed by Detection::model_id.
  // Empty means all ones; otherwise must have num_models positive entries.
  std::vector<double> model_weights;

  static FusionConfig nms_defaults() {
    FusionConfig cfg;
    cfg.iou_threshold = 0.5;
    return cfg;
  }
  static FusionConfig wbf_defaults() { return FusionConfig{}; }
};

struct FusedBox {
  BBox bbox;
  double score = 0.0;
  std::int64_t category_id = 0;
  int cluster_size = 1;  // number of member boxes
};

// One wbf cluster with the indices (into the caller's detection vector)
// of its members, for introspection and algebra checks.
struct WbfCluster {
  FusedBox fused;
  std::vector<std::size_t> members;
};

// Greedy non-maximum suppression over one image's detections, processed
// independently per category: sort by score descending (stable), keep the
// top box, discard every remaining same-category box with iou >= threshold
// against a kept box. Kept boxes are returned unchanged in descending-score
// order. model_weights are not applied here.
std::vector<Detection> nms(const std::vector<Detection>& dets,
                           const FusionConfig& cfg);

// Weighted boxes fusion over one image's detections from up to num_models
// models. Scores are multiplied by their model weight at entry; detections
// are clustered greedily in descending score order, each joining the first
// cluster (same category) whose current fused box overlaps at iou >=
// threshold. A cluster's box is the score-weighted mean of member
// coordinates and its raw score the arithmetic mean of member scores; the
// final score is raw * min(cluster_size, num_models) / num_models. Output
// sorted by final score descending.
std::vector<FusedBox> wbf(const std::vector<Detection>& dets,
                          const FusionConfig& cfg);

// Same algorithm, returning per-cluster membership.
std::vector<WbfCluster> wbf_clusters(const std::vector<Detection>& dets,
                                     const FusionConfig& cfg);

}  // namespace boxforge::fusion
