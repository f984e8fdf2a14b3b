#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "boxforge/types.hpp"

namespace boxforge::eval {

std::vector<double> default_iou_thresholds();  // 0.50, 0.55, ..., 0.95

struct EvalConfig {
  // Strictly increasing, each in (0, 1).
  std::vector<double> iou_thresholds = default_iou_thresholds();
  // Detections kept per image and category, by score.
  int max_dets = 100;
  // Evenly spaced recall samples in [0, 1] for interpolated AP.
  int recall_points = 101;
};

enum class MatchLabel {
  kTruePositive,
  kFalsePositive,
  kExcluded,  // best remaining match is an ignore region: not scored
};

struct MatchResult {
  std::vector<MatchLabel> labels;  // parallel to the input detections
  int tp = 0;
  int fp = 0;
  int fn = 0;  // unmatched non-ignore ground truths
};

// Greedy one-to-one matching for a single image and category at iou
// threshold t. Detections are taken in descending score order (stable);
// each matches the unmatched non-ignore ground truth with highest iou when
// that iou >= t. Detections whose best remaining match is an ignore ground
// truth at iou >= t are excluded from scoring; ignore regions are never
// consumed. Labels come back in the input detections' order.
MatchResult match(const std::vector<Detection>& dets,
                  const std::vector<GroundTruth>& gts, double t);

// Interpolated average precision. `labels` must be in descending-score
// order; excluded entries are skipped. Precision is made monotonically
// non-increasing from the right, then sampled at recall_points evenly
// spaced recalls. Returns NaN when num_gt == 0 and no scored labels remain
// (category excluded from aggregation), 0 when num_gt == 0 but spurious
// detections exist.
double average_precision(const std::vector<MatchLabel>& labels, int num_gt,
                         int recall_points = 101);

struct ThresholdCounts {
  double threshold = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

struct CategoryEval {
  std::int64_t category_id = 0;
  std::vector<double> ap;  // per config threshold; NaN when undefined
  std::vector<ThresholdCounts> counts;
  long num_gt = 0;  // non-ignore ground truths of this category
};

struct EvalReport {
  std::vector<CategoryEval> categories;  // ascending category_id
  // Means over categories with at least one non-ignore ground truth;
  // NaN when no category qualifies or the relevant threshold is absent.
  double ap_50_95 = 0.0;
  double ap_50 = 0.0;
  double ap_75 = 0.0;
};

// Full COCO-protocol evaluation: per category and threshold, matches are
// pooled across images (keeping the top max_dets detections per image and
// category) and reduced in (score desc, input order) order. Zero-area boxes
// on either side are dropped at entry.
EvalReport evaluate(const std::vector<Detection>& dets,
                    const std::vector<GroundTruth>& gts,
                    const EvalConfig& cfg = {});

// Same, validating that every detection references a known image id;
// throws DataError listing the offending ids otherwise.
EvalReport evaluate(const std::vector<Detection>& dets,
                    const std::vector<GroundTruth>& gts, const EvalConfig& cfg,
                    const std::unordered_set<std::int64_t>& known_image_ids);

// Text table with columns Methods | AP@0.50:0.95 | AP@0.50 | AP@0.75,
// values as percentages with one decimal; undefined cells render as n/a.
std::string render_table(
    const std::vector<std::pair<std::string, EvalReport>>& rows);

nlohmann::json report_to_json(const EvalReport& report);

}  // namespace boxforge::eval
