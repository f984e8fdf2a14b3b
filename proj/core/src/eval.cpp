#include "boxforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "boxforge/error.hpp"
#include "boxforge/geometry.hpp"

namespace boxforge::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const EvalConfig& cfg) {
  if (cfg.iou_thresholds.empty()) {
    throw ConfigError("eval: iou_thresholds must not be empty");
  }
  double prev = 0.0;
  for (double t : cfg.iou_thresholds) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ConfigError("eval: iou thresholds must lie in (0, 1)");
    }
    if (t <= prev) {
      throw ConfigError("eval: iou thresholds must be strictly increasing");
    }
    prev = t;
  }
  if (cfg.max_dets < 1) throw ConfigError("eval: max_dets must be >= 1");
  if (cfg.recall_points < 2) {
    throw ConfigError("eval: recall_points must be >= 2");
  }
}

int threshold_index(const std::vector<double>& thresholds, double value) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (std::abs(thresholds[i] - value) < 1e-9) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

std::vector<double> default_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(0.50 + 0.05 * i);
  return t;
}

MatchResult match(const std::vector<Detection>& dets,
                  const std::vector<GroundTruth>& gts, double t) {
  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  MatchResult result;
  result.labels.assign(dets.size(), MatchLabel::kFalsePositive);
  std::vector<bool> gt_matched(gts.size(), false);

  int num_gt = 0;
  for (const GroundTruth& g : gts) {
    if (!g.ignore) ++num_gt;
  }

  for (std::size_t idx : order) {
    const Detection& d = dets[idx];

    double best_iou = 0.0;
    std::ptrdiff_t best_gt = -1;
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (gts[j].ignore || gt_matched[j]) continue;
      const double v = iou(d.bbox, gts[j].bbox);
      if (v > best_iou) {
        best_iou = v;
        best_gt = static_cast<std::ptrdiff_t>(j);
      }
    }
    if (best_gt >= 0 && best_iou >= t) {
      gt_matched[static_cast<std::size_t>(best_gt)] = true;
      result.labels[idx] = MatchLabel::kTruePositive;
      ++result.tp;
      continue;
    }

    // Ignore regions absorb any number of detections without scoring them.
    bool excluded = false;
    for (const GroundTruth& g : gts) {
      if (!g.ignore) continue;
      if (iou(d.bbox, g.bbox) >= t) {
        excluded = true;
        break;
      }
    }
    if (excluded) {
      result.labels[idx] = MatchLabel::kExcluded;
    } else {
      ++result.fp;
    }
  }
  result.fn = num_gt - result.tp;
  return result;
}

double average_precision(const std::vector<MatchLabel>& labels, int num_gt,
                         int recall_points) {
  std::vector<MatchLabel> scored;
  scored.reserve(labels.size());
  for (MatchLabel l : labels) {
    if (l != MatchLabel::kExcluded) scored.push_back(l);
  }
  if (num_gt <= 0) {
    return scored.empty() ? kNaN : 0.0;
  }
  if (scored.empty()) return 0.0;

  std::vector<double> recall(scored.size());
  std::vector<double> precision(scored.size());
  long tp = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i] == MatchLabel::kTruePositive) ++tp;
    recall[i] = static_cast<double>(tp) / num_gt;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = precision.size() - 1; i > 0; --i) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }

  // recall is non-decreasing, so walk the curve once across the samples.
  double sum = 0.0;
  std::size_t pos = 0;
  for (int j = 0; j < recall_points; ++j) {
    const double r = static_cast<double>(j) / (recall_points - 1);
    while (pos < recall.size() && recall[pos] < r) ++pos;
    if (pos < precision.size()) sum += precision[pos];
  }
  return sum / recall_points;
}

namespace {

struct PooledDet {
  double score;
  std::size_t global_index;  // stable tie-break
  MatchLabel label;
};

EvalReport evaluate_impl(const std::vector<Detection>& dets,
                         const std::vector<GroundTruth>& gts,
                         const EvalConfig& cfg,
                         const std::unordered_set<std::int64_t>* known_ids) {
  validate(cfg);

  if (known_ids != nullptr) {
    std::set<std::int64_t> unknown;
    for (const Detection& d : dets) {
      if (known_ids->find(d.image_id) == known_ids->end()) {
        unknown.insert(d.image_id);
      }
    }
    if (!unknown.empty()) {
      std::ostringstream msg;
      msg << "eval: detections reference unknown image ids:";
      for (std::int64_t id : unknown) msg << ' ' << id;
      throw DataError(msg.str());
    }
  }

  // Degenerate boxes are dropped at entry; geometry keeps them legal.
  using Key = std::pair<std::int64_t, std::int64_t>;  // (category, image)
  std::map<Key, std::vector<std::size_t>> dets_by_key;
  std::map<Key, std::vector<GroundTruth>> gts_by_key;
  std::map<std::int64_t, long> num_gt_by_cat;
  std::map<std::int64_t, std::set<std::int64_t>> images_by_cat;
  std::set<std::int64_t> category_ids;

  for (std::size_t i = 0; i < gts.size(); ++i) {
    if (gts[i].bbox.area() <= 0.0) continue;
    gts_by_key[{gts[i].category_id, gts[i].image_id}].push_back(gts[i]);
    if (!gts[i].ignore) ++num_gt_by_cat[gts[i].category_id];
    images_by_cat[gts[i].category_id].insert(gts[i].image_id);
    category_ids.insert(gts[i].category_id);
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].bbox.area() <= 0.0) continue;
    dets_by_key[{dets[i].category_id, dets[i].image_id}].push_back(i);
    images_by_cat[dets[i].category_id].insert(dets[i].image_id);
    category_ids.insert(dets[i].category_id);
  }

  // Top max_dets per image and category, by score (ties: input order).
  for (auto& [key, indices] : dets_by_key) {
    std::stable_sort(indices.begin(), indices.end(),
                     [&](std::size_t a, std::size_t b) {
                       return dets[a].score > dets[b].score;
                     });
    if (indices.size() > static_cast<std::size_t>(cfg.max_dets)) {
      indices.resize(static_cast<std::size_t>(cfg.max_dets));
    }
  }

  EvalReport report;
  const int idx_50 = threshold_index(cfg.iou_thresholds, 0.50);
  const int idx_75 = threshold_index(cfg.iou_thresholds, 0.75);

  double sum_all = 0.0, sum_50 = 0.0, sum_75 = 0.0;
  long qualifying = 0;

  for (std::int64_t cat : category_ids) {
    CategoryEval ce;
    ce.category_id = cat;
    ce.num_gt = num_gt_by_cat.count(cat) ? num_gt_by_cat[cat] : 0;

    const std::set<std::int64_t>& image_ids = images_by_cat[cat];

    for (double t : cfg.iou_thresholds) {
      std::vector<PooledDet> pooled;
      long tp = 0, fp = 0;
      for (std::int64_t img : image_ids) {
        const auto dit = dets_by_key.find({cat, img});
        const auto git = gts_by_key.find({cat, img});
        static const std::vector<GroundTruth> no_gts;
        const std::vector<GroundTruth>& img_gts =
            git != gts_by_key.end() ? git->second : no_gts;

        std::vector<Detection> img_dets;
        if (dit != dets_by_key.end()) {
          for (std::size_t gi : dit->second) img_dets.push_back(dets[gi]);
        }
        const MatchResult m = match(img_dets, img_gts, t);
        tp += m.tp;
        fp += m.fp;
        if (dit != dets_by_key.end()) {
          for (std::size_t k = 0; k < img_dets.size(); ++k) {
            pooled.push_back(
                {img_dets[k].score, dit->second[k], m.labels[k]});
          }
        }
      }
      std::sort(pooled.begin(), pooled.end(),
                [](const PooledDet& a, const PooledDet& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.global_index < b.global_index;
                });
      std::vector<MatchLabel> labels;
      labels.reserve(pooled.size());
      for (const PooledDet& p : pooled) labels.push_back(p.label);

      ce.ap.push_back(average_precision(labels, static_cast<int>(ce.num_gt),
                                        cfg.recall_points));
      ce.counts.push_back({t, tp, fp, ce.num_gt - tp});
    }

    if (ce.num_gt > 0) {
      ++qualifying;
      double cat_mean = 0.0;
      for (double ap : ce.ap) cat_mean += ap;
      sum_all += cat_mean / static_cast<double>(ce.ap.size());
      if (idx_50 >= 0) sum_50 += ce.ap[idx_50];
      if (idx_75 >= 0) sum_75 += ce.ap[idx_75];
    }
    report.categories.push_back(std::move(ce));
  }

  if (qualifying > 0) {
    report.ap_50_95 = sum_all / qualifying;
    report.ap_50 = idx_50 >= 0 ? sum_50 / qualifying : kNaN;
    report.ap_75 = idx_75 >= 0 ? sum_75 / qualifying : kNaN;
  } else {
    report.ap_50_95 = kNaN;
    report.ap_50 = kNaN;
    report.ap_75 = kNaN;
  }
  return report;
}

std::string format_cell(double value) {
  if (std::isnan(value)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value * 100.0);
  return buf;
}

}  // namespace

EvalReport evaluate(const std::vector<Detection>& dets,
                    const std::vector<GroundTruth>& gts,
                    const EvalConfig& cfg) {
  return evaluate_impl(dets, gts, cfg, nullptr);
}

EvalReport evaluate(const std::vector<Detection>& dets,
                    const std::vector<GroundTruth>& gts, const EvalConfig& cfg,
                    const std::unordered_set<std::int64_t>& known_image_ids) {
  return evaluate_impl(dets, gts, cfg, &known_image_ids);
}

std::string render_table(
    const std::vector<std::pair<std::string, EvalReport>>& rows) {
  const std::string headers[4] = {"Methods", "AP@0.50:0.95", "AP@0.50",
                                  "AP@0.75"};
  std::size_t label_w = headers[0].size();
  for (const auto& [label, report] : rows) {
    label_w = std::max(label_w, label.size());
  }

  auto pad = [](const std::string& s, std::size_t w) {
    std::string out = s;
    if (out.size() < w) out.append(w - out.size(), ' ');
    return out;
  };

  std::ostringstream out;
  out << pad(headers[0], label_w) << "  " << headers[1] << "  " << headers[2]
      << "  " << headers[3] << '\n';
  for (const auto& [label, report] : rows) {
    out << pad(label, label_w) << "  "
        << pad(format_cell(report.ap_50_95), headers[1].size()) << "  "
        << pad(format_cell(report.ap_50), headers[2].size()) << "  "
        << pad(format_cell(report.ap_75), headers[3].size()) << '\n';
  }
  return out.str();
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["ap_50_95"] = report.ap_50_95;
  j["ap_50"] = report.ap_50;
  j["ap_75"] = report.ap_75;
  j["categories"] = nlohmann::json::array();
  for (const CategoryEval& ce : report.categories) {
    nlohmann::json c;
    c["category_id"] = ce.category_id;
    c["num_gt"] = ce.num_gt;
    c["ap"] = ce.ap;
    c["counts"] = nlohmann::json::array();
    for (const ThresholdCounts& tc : ce.counts) {
      c["counts"].push_back({{"threshold", tc.threshold},
                             {"tp", tc.tp},
                             {"fp", tc.fp},
                             {"fn", tc.fn}});
    }
    j["categories"].push_back(std::move(c));
  }
  return j;
}

}  // namespace boxforge::eval
