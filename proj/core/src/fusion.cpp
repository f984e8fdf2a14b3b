#include "boxforge/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "boxforge/error.hpp"
#include "boxforge/geometry.hpp"

namespace boxforge::fusion {

namespace {

void validate(const FusionConfig& cfg) {
  if (cfg.num_models < 1) {
    throw ConfigError("fusion: num_models must be >= 1, got " +
                      std::to_string(cfg.num_models));
  }
  if (!(cfg.iou_threshold > 0.0 && cfg.iou_threshold < 1.0)) {
    throw ConfigError("fusion: iou_threshold must be in (0, 1)");
  }
  if (!(cfg.score_threshold >= 0.0 && cfg.score_threshold <= 1.0)) {
    throw ConfigError("fusion: score_threshold must be in [0, 1]");
  }
  if (!cfg.model_weights.empty()) {
    if (static_cast<int>(cfg.model_weights.size()) != cfg.num_models) {
      throw ConfigError("fusion: model_weights has " +
                        std::to_string(cfg.model_weights.size()) +
                        " entries for " + std::to_string(cfg.num_models) +
                        " models");
    }
    for (double w : cfg.model_weights) {
      if (!(w > 0.0)) throw ConfigError("fusion: model weights must be > 0");
    }
  }
}

double model_weight(const FusionConfig& cfg, const Detection& d) {
  if (cfg.model_weights.empty()) return 1.0;
  if (d.model_id < 0 || d.model_id >= cfg.num_models) {
    throw DataError("fusion: detection model_id " + std::to_string(d.model_id) +
                    " outside [0, " + std::to_string(cfg.num_models) + ")");
  }
  return cfg.model_weights[d.model_id];
}

// Surviving indices, stable-sorted by score descending. Zero-area boxes and
// scores below the threshold are dropped at entry.
std::vector<std::size_t> entry_order(const std::vector<Detection>& dets,
                                     const FusionConfig& cfg) {
  std::vector<std::size_t> order;
  order.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].score < cfg.score_threshold) continue;
    if (dets[i].bbox.area() <= 0.0) continue;
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

}  // namespace

std::vector<Detection> nms(const std::vector<Detection>& dets,
                           const FusionConfig& cfg) {
  validate(cfg);
  std::vector<Detection> kept;
  for (std::size_t idx : entry_order(dets, cfg)) {
    const Detection& d = dets[idx];
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.category_id == d.category_id &&
          iou(k.bbox, d.bbox) >= cfg.iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

namespace {

struct Cluster {
  std::vector<std::size_t> members;
  std::int64_t category_id = 0;
  double score_sum = 0.0;  // sum of weighted member scores
  // Score-weighted coordinate sums, plus plain sums as the fallback when
  // every member score is zero.
  double wx1 = 0.0, wy1 = 0.0, wx2 = 0.0, wy2 = 0.0;
  double px1 = 0.0, py1 = 0.0, px2 = 0.0, py2 = 0.0;

  BBox current_box() const {
    const double n = static_cast<double>(members.size());
    if (score_sum > 0.0) {
      return {wx1 / score_sum, wy1 / score_sum, wx2 / score_sum,
              wy2 / score_sum};
    }
    return {px1 / n, py1 / n, px2 / n, py2 / n};
  }

  void add(std::size_t index, const BBox& b, double weighted_score) {
    members.push_back(index);
    score_sum += weighted_score;
    wx1 += weighted_score * b.x1;
    wy1 += weighted_score * b.y1;
    wx2 += weighted_score * b.x2;
    wy2 += weighted_score * b.y2;
    px1 += b.x1;
    py1 += b.y1;
    px2 += b.x2;
    py2 += b.y2;
  }
};

}  // namespace

std::vector<WbfCluster> wbf_clusters(const std::vector<Detection>& dets,
                                     const FusionConfig& cfg) {
  validate(cfg);

  std::vector<Cluster> clusters;
  for (std::size_t idx : entry_order(dets, cfg)) {
    const Detection& d = dets[idx];
    const double weighted = d.score * model_weight(cfg, d);

    Cluster* home = nullptr;
    for (Cluster& c : clusters) {
      if (c.category_id != d.category_id) continue;
      if (iou(c.current_box(), d.bbox) >= cfg.iou_threshold) {
        home = &c;
        break;  // first matching cluster wins
      }
    }
    if (home == nullptr) {
      clusters.emplace_back();
      home = &clusters.back();
      home->category_id = d.category_id;
    }
    home->add(idx, d.bbox, weighted);
  }

  std::vector<WbfCluster> out;
  out.reserve(clusters.size());
  for (Cluster& c : clusters) {
    const int t = static_cast<int>(c.members.size());
    const double raw = c.score_sum / t;
    const double rescale =
        static_cast<double>(std::min(t, cfg.num_models)) / cfg.num_models;
    WbfCluster wc;
    wc.fused.bbox = c.current_box();
    wc.fused.score = raw * rescale;
    wc.fused.category_id = c.category_id;
    wc.fused.cluster_size = t;
    wc.members = std::move(c.members);
    out.push_back(std::move(wc));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const WbfCluster& a, const WbfCluster& b) {
                     return a.fused.score > b.fused.score;
                   });
  return out;
}

std::vector<FusedBox> wbf(const std::vector<Detection>& dets,
                          const FusionConfig& cfg) {
  std::vector<FusedBox> out;
  for (auto& c : wbf_clusters(dets, cfg)) out.push_back(c.fused);
  return out;
}

}  // namespace boxforge::fusion
