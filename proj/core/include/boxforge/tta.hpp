#pragma once

#include <vector>

#include "boxforge/fusion.hpp"
#include "boxforge/types.hpp"

namespace boxforge::tta {

// One transformed copy of an image: resized to scale_w x scale_h pixels,
// optionally mirrored horizontally.
struct TtaTransform {
  int scale_w = 0;
  int scale_h = 0;
  bool flipped = false;
};

struct TtaEntry {
  TtaTransform transform;
  std::vector<Detection> detections;  // normalized coords of the transformed copy
};

struct TtaBundle {
  std::int64_t image_id = 0;
  std::vector<TtaEntry> entries;  // >= 1
};

// Maps detections from a transformed copy's normalized frame back to the
// original frame. Uniform resizing is an identity in normalized
// coordinates, so only flips move boxes; scores and categories pass
// through untouched.
std::vector<Detection> remap(std::vector<Detection> dets,
                             const TtaTransform& t);

// Remaps every entry, concatenates, and fuses with wbf treating each
// transform as one model (num_models = entry count). Throws ConfigError on
// an empty bundle, non-positive transform dimensions, or a weight list that
// does not match the entry count.
std::vector<fusion::FusedBox> merge(const TtaBundle& bundle,
                                    fusion::FusionConfig cfg);

}  // namespace boxforge::tta
