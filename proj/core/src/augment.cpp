#include "boxforge/augment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "boxforge/error.hpp"
#include "boxforge/geometry.hpp"
#include "boxforge/rng.hpp"

namespace boxforge::augment {

namespace {

void validate(const JitterConfig& cfg) {
  if (!(cfg.amp_lo > 0.0 && cfg.amp_lo <= cfg.amp_hi)) {
    throw ConfigError("jitter: need 0 < amp_lo <= amp_hi");
  }
}

void validate(const GridMaskConfig& cfg) {
  if (!(cfg.d_min >= 2 && cfg.d_min <= cfg.d_max)) {
    throw ConfigError("grid-mask: need 2 <= d_min <= d_max");
  }
  if (!(cfg.keep_ratio > 0.0 && cfg.keep_ratio < 1.0)) {
    throw ConfigError("grid-mask: keep_ratio must be in (0, 1)");
  }
  if (!(cfg.apply_prob >= 0.0 && cfg.apply_prob <= 1.0)) {
    throw ConfigError("grid-mask: apply_prob must be in [0, 1]");
  }
}

void validate(const MixupConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw ConfigError("mix-up: alpha must be > 0");
  if (!(cfg.apply_prob >= 0.0 && cfg.apply_prob <= 1.0)) {
    throw ConfigError("mix-up: apply_prob must be in [0, 1]");
  }
}

}  // namespace

BBox jitter_box(const BBox& b, double sx, double sy) {
  if (sx == 1.0 && sy == 1.0) return b;
  const double cx = (b.x1 + b.x2) / 2.0;
  const double cy = (b.y1 + b.y2) / 2.0;
  const double hw = (b.x2 - b.x1) / 2.0 * sx;
  const double hh = (b.y2 - b.y1) / 2.0 * sy;
  return clamp_to_unit({cx - hw, cy - hh, cx + hw, cy + hh});
}

std::vector<GroundTruth> bbox_jitter(const std::vector<GroundTruth>& gts,
                                     const ImageMeta& /*m*/,
                                     const JitterConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  std::vector<GroundTruth> out;
  out.reserve(gts.size());
  for (const GroundTruth& g : gts) {
    const double sx = rng.uniform(cfg.amp_lo, cfg.amp_hi);
    const double sy = rng.uniform(cfg.amp_lo, cfg.amp_hi);
    GroundTruth j = g;
    j.bbox = jitter_box(g.bbox, sx, sy);
    out.push_back(j);
  }
  return out;
}

ImageBuffer apply_grid(const ImageBuffer& img, int period, int offset_x,
                       int offset_y, double keep_ratio) {
  const long l = std::lround(period * (1.0 - keep_ratio));
  ImageBuffer out = img;
  if (l <= 0) return out;
  for (int y = 0; y < out.height; ++y) {
    const bool row_dropped = (y + offset_y) % period < l;
    if (!row_dropped) continue;
    for (int x = 0; x < out.width; ++x) {
      if ((x + offset_x) % period < l) {
        std::uint8_t* p = out.at(x, y);
        p[0] = p[1] = p[2] = 0;
      }
    }
  }
  return out;
}

ImageBuffer grid_mask(const ImageBuffer& img, const GridMaskConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  if (!rng.bernoulli(cfg.apply_prob)) return img;
  const int d = static_cast<int>(rng.uniform_int(cfg.d_min, cfg.d_max));
  const int dx = static_cast<int>(rng.uniform_int(0, d - 1));
  const int dy = static_cast<int>(rng.uniform_int(0, d - 1));
  return apply_grid(img, d, dx, dy, cfg.keep_ratio);
}

MixupResult mix_with_lambda(const ImageBuffer& a,
                            const std::vector<GroundTruth>& a_gts,
                            const ImageBuffer& b,
                            const std::vector<GroundTruth>& b_gts,
                            double lambda) {
  if (a.width != b.width || a.height != b.height) {
    throw DataError("mix-up: image dimensions differ (" +
                    std::to_string(a.width) + "x" + std::to_string(a.height) +
                    " vs " + std::to_string(b.width) + "x" +
                    std::to_string(b.height) + ")");
  }
  MixupResult result;
  result.lambda = lambda;
  result.image.width = a.width;
  result.image.height = a.height;
  result.image.pixels.resize(a.pixels.size());
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double v = lambda * a.pixels[i] + (1.0 - lambda) * b.pixels[i];
    result.image.pixels[i] =
        static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
  }
  for (const GroundTruth& g : a_gts) {
    if (lambda > 0.0) result.annotations.push_back({g, lambda});
  }
  for (const GroundTruth& g : b_gts) {
    if (1.0 - lambda > 0.0) result.annotations.push_back({g, 1.0 - lambda});
  }
  return result;
}

MixupResult mix_up(const ImageBuffer& a, const std::vector<GroundTruth>& a_gts,
                   const ImageBuffer& b, const std::vector<GroundTruth>& b_gts,
                   const MixupConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  const double lambda = rng.beta(cfg.alpha, cfg.alpha);
  return mix_with_lambda(a, a_gts, b, b_gts, lambda);
}

namespace {

bool contains(const BBox& outer, const BBox& inner) {
  return outer.x1 <= inner.x1 && outer.y1 <= inner.y1 &&
         outer.x2 >= inner.x2 && outer.y2 >= inner.y2;
}

}  // namespace

OversamplePlan plan_oversample(const coco::DatasetIndex& index,
                               const OversampleConfig& cfg) {
  if (cfg.copies < 1) throw ConfigError("oversample: copies must be >= 1");
  if (cfg.min_count < 1) throw ConfigError("oversample: min_count must be >= 1");

  OversamplePlan plan;
  std::set<std::int64_t> all_categories;
  for (const auto& [cat, name] : index.categories) all_categories.insert(cat);
  for (const auto& [cat, n] : index.instance_counts) all_categories.insert(cat);
  for (std::int64_t cat : all_categories) {
    const auto it = index.instance_counts.find(cat);
    const std::int64_t count = it != index.instance_counts.end() ? it->second : 0;
    if (count < cfg.min_count) plan.rare_categories.push_back(cat);
  }
  if (plan.rare_categories.empty()) return plan;

  std::set<std::int64_t> rare_set(plan.rare_categories.begin(),
                                  plan.rare_categories.end());

  std::map<std::int64_t, std::vector<std::size_t>> anns_by_image;
  for (std::size_t i = 0; i < index.annotations.size(); ++i) {
    anns_by_image[index.annotations[i].image_id].push_back(i);
  }

  std::int64_t next_id = 0;
  for (const auto& [id, meta] : index.images) next_id = std::max(next_id, id);
  ++next_id;

  // anns_by_image iterates images in ascending id order, so ids and streams
  // come out identical regardless of how copies are later rendered.
  for (const auto& [image_id, ann_indices] : anns_by_image) {
    std::vector<std::size_t> rare_boxes;
    for (std::size_t i : ann_indices) {
      if (rare_set.count(index.annotations[i].category_id)) {
        rare_boxes.push_back(i);
      }
    }
    if (rare_boxes.empty()) continue;
    const ImageMeta& src_meta = index.images.at(image_id);
    const double w = src_meta.width;
    const double h = src_meta.height;

    for (int k = 0; k < cfg.copies; ++k) {
      const std::int64_t new_id = next_id++;
      Rng rng(derive_stream(cfg.seed, static_cast<std::uint64_t>(new_id)));

      const std::size_t pick = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(rare_boxes.size()) - 1));
      const BBox& target = index.annotations[rare_boxes[pick]].bbox;

      // Crop spans that always contain the target box and keep at least
      // half the image area: cw >= sqrt(1/2) forces cw*ch >= 1/2.
      const double min_w = std::max(target.width(), std::sqrt(0.5));
      const double cw = rng.uniform(min_w, 1.0);
      const double min_h = std::max(target.height(), 0.5 / cw);
      const double ch = rng.uniform(min_h, 1.0);
      const double cx1 =
          rng.uniform(std::max(0.0, target.x2 - cw), std::min(target.x1, 1.0 - cw));
      const double cy1 =
          rng.uniform(std::max(0.0, target.y2 - ch), std::min(target.y1, 1.0 - ch));
      const bool flipped = rng.bernoulli(0.5);

      // Snap outward to whole pixels, then widen to the target's own pixel
      // bounds so containment survives rounding in either step.
      OversampleCopy copy;
      copy.source_image_id = image_id;
      copy.flipped = flipped;
      copy.crop_x = std::max(
          0, std::min(static_cast<int>(std::floor(cx1 * w)),
                      static_cast<int>(std::floor(target.x1 * w))));
      copy.crop_y = std::max(
          0, std::min(static_cast<int>(std::floor(cy1 * h)),
                      static_cast<int>(std::floor(target.y1 * h))));
      const int px2 = std::min(
          src_meta.width, std::max(static_cast<int>(std::ceil((cx1 + cw) * w)),
                                   static_cast<int>(std::ceil(target.x2 * w))));
      const int py2 = std::min(
          src_meta.height, std::max(static_cast<int>(std::ceil((cy1 + ch) * h)),
                                    static_cast<int>(std::ceil(target.y2 * h))));
      copy.crop_w = std::max(1, px2 - copy.crop_x);
      copy.crop_h = std::max(1, py2 - copy.crop_y);

      copy.meta.image_id = new_id;
      copy.meta.width = copy.crop_w;
      copy.meta.height = copy.crop_h;
      copy.meta.file_name =
          "aug_" + std::to_string(image_id) + "_" + std::to_string(k) + ".png";

      const BBox crop{copy.crop_x / w, copy.crop_y / h,
                      (copy.crop_x + copy.crop_w) / w,
                      (copy.crop_y + copy.crop_h) / h};
      const double crop_w_n = crop.width();
      const double crop_h_n = crop.height();

      for (std::size_t i : ann_indices) {
        const GroundTruth& g = index.annotations[i];
        const BBox inter = intersect(g.bbox, crop);
        if (inter.area() < 0.25 * g.bbox.area()) continue;
        BBox nb{(inter.x1 - crop.x1) / crop_w_n, (inter.y1 - crop.y1) / crop_h_n,
                (inter.x2 - crop.x1) / crop_w_n, (inter.y2 - crop.y1) / crop_h_n};
        nb = clamp_to_unit(nb);
        if (flipped) nb = hflip(nb);
        GroundTruth out = g;
        out.bbox = nb;
        out.image_id = new_id;
        copy.annotations.push_back(out);
      }
      plan.copies.push_back(std::move(copy));
    }
  }
  return plan;
}

ImageBuffer render_oversample_copy(const ImageBuffer& source,
                                   const OversampleCopy& copy) {
  if (copy.crop_x < 0 || copy.crop_y < 0 ||
      copy.crop_x + copy.crop_w > source.width ||
      copy.crop_y + copy.crop_h > source.height) {
    throw DataError("oversample: crop outside source image");
  }
  ImageBuffer out;
  out.width = copy.crop_w;
  out.height = copy.crop_h;
  out.pixels.resize(static_cast<std::size_t>(copy.crop_w) * copy.crop_h * 3);
  for (int y = 0; y < copy.crop_h; ++y) {
    for (int x = 0; x < copy.crop_w; ++x) {
      const int sx = copy.crop_x + (copy.flipped ? copy.crop_w - 1 - x : x);
      const int sy = copy.crop_y + y;
      const std::uint8_t* src = source.at(sx, sy);
      std::uint8_t* dst = out.at(x, y);
      dst[0] = src[0];
      dst[1] = src[1];
      dst[2] = src[2];
    }
  }
  return out;
}

coco::DatasetIndex apply_oversample(const coco::DatasetIndex& index,
                                    const OversamplePlan& plan) {
  coco::DatasetIndex out = index;
  for (const OversampleCopy& copy : plan.copies) {
    out.images[copy.meta.image_id] = copy.meta;
    for (const GroundTruth& g : copy.annotations) {
      out.annotations.push_back(g);
      out.annotation_weights.push_back(1.0);
      ++out.instance_counts[g.category_id];
    }
  }
  return out;
}

coco::DatasetIndex oversample_rare_classes(const coco::DatasetIndex& index,
                                           const OversampleConfig& cfg) {
  return apply_oversample(index, plan_oversample(index, cfg));
}

}  // namespace boxforge::augment
