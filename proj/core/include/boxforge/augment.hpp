#pragma once

#include <cstdint>
#include <vector>

#include "boxforge/coco_io.hpp"
#include "boxforge/types.hpp"

namespace boxforge::augment {

struct JitterConfig {
  double amp_lo = 0.95;  // 0 < amp_lo <= amp_hi
  double amp_hi = 1.05;
  std::uint64_t seed = 0;
};

struct GridMaskConfig {
  int d_min = 32;  // grid period bounds in pixels, 2 <= d_min <= d_max
  int d_max = 96;
  double keep_ratio = 0.5;   // fraction of each period kept, in (0, 1)
  double apply_prob = 0.7;
  std::uint64_t seed = 0;
};

struct MixupConfig {
  double alpha = 1.5;       // Beta(alpha, alpha) mixing law, > 0
  double apply_prob = 0.5;  // pipeline-level gate; the op itself always mixes
  std::uint64_t seed = 0;
};

struct WeightedAnnotation {
  GroundTruth gt;
  double weight = 1.0;  // in (0, 1]
};

// Rescales a box about its center by (sx, sy) and clamps to the unit
// square. sx == sy == 1 is an exact identity.
BBox jitter_box(const BBox& b, double sx, double sy);

// Independently rescales each box by factors drawn uniformly from
// [amp_lo, amp_hi]. Count, categories, and order are preserved. Pixels are
// never touched; jitter perturbs the training signal only.
std::vector<GroundTruth> bbox_jitter(const std::vector<GroundTruth>& gts,
                                     const ImageMeta& m,
                                     const JitterConfig& cfg);

// Zeroes every pixel (x, y) with ((x+off_x) mod period) < l and
// ((y+off_y) mod period) < l, where l = round(period * (1 - keep_ratio)).
ImageBuffer apply_grid(const ImageBuffer& img, int period, int offset_x,
                       int offset_y, double keep_ratio);

// With probability apply_prob, samples a period from [d_min, d_max] and
// offsets from [0, period) and applies the grid; otherwise returns the
// image unchanged.
ImageBuffer grid_mask(const ImageBuffer& img, const GridMaskConfig& cfg);

struct MixupResult {
  ImageBuffer image;
  std::vector<WeightedAnnotation> annotations;
  double lambda = 0.0;
};

// out = round(lambda * a + (1 - lambda) * b) per channel; annotations are
// a's boxes at weight lambda followed by b's at 1 - lambda, dropping
// zero-weight entries. Throws DataError when dimensions differ.
MixupResult mix_with_lambda(const ImageBuffer& a,
                            const std::vector<GroundTruth>& a_gts,
                            const ImageBuffer& b,
                            const std::vector<GroundTruth>& b_gts,
                            double lambda);

// Draws lambda from Beta(alpha, alpha) and mixes.
MixupResult mix_up(const ImageBuffer& a, const std::vector<GroundTruth>& a_gts,
                   const ImageBuffer& b, const std::vector<GroundTruth>& b_gts,
                   const MixupConfig& cfg);

struct OversampleConfig {
  int min_count = 1;  // a category is rare iff its instance count < min_count
  int copies = 6;     // new images emitted per image containing a rare box
  std::uint64_t seed = 0;
};

// One planned crop-and-flip copy of a source image. Pixel geometry and the
// re-clipped annotations are fixed at plan time so rendering is pure.
struct OversampleCopy {
  std::int64_t source_image_id = 0;
  ImageMeta meta;  // new id, crop dimensions, generated file name
  int crop_x = 0;
  int crop_y = 0;
  int crop_w = 0;
  int crop_h = 0;
  bool flipped = false;
  // Source boxes clipped to the crop, in the copy's frame; boxes keeping
  // < 25% of their area are dropped.
  std::vector<GroundTruth> annotations;
};

struct OversamplePlan {
  std::vector<std::int64_t> rare_categories;
  std::vector<OversampleCopy> copies;
};

// Single deterministic pre-scan: for every image containing a rare-category
// box, plans `copies` new images, each cropped so that at least one rare
// box is fully contained and the crop covers >= 50% of the image area, then
// flipped with probability 0.5. New ids continue past the current maxima.
OversamplePlan plan_oversample(const coco::DatasetIndex& index,
                               const OversampleConfig& cfg);

// Crops (and, when planned, mirrors) the source pixels for one copy.
ImageBuffer render_oversample_copy(const ImageBuffer& source,
                                   const OversampleCopy& copy);

// Merged dataset: all originals plus the planned copies.
coco::DatasetIndex apply_oversample(const coco::DatasetIndex& index,
                                    const OversamplePlan& plan);

// plan + apply in one call.
coco::DatasetIndex oversample_rare_classes(const coco::DatasetIndex& index,
                                           const OversampleConfig& cfg);

}  // namespace boxforge::augment
