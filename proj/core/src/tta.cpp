#include "boxforge/tta.hpp"

#include <string>

#include "boxforge/error.hpp"
#include "boxforge/geometry.hpp"

namespace boxforge::tta {

std::vector<Detection> remap(std::vector<Detection> dets,
                             const TtaTransform& t) {
  if (t.flipped) {
    for (Detection& d : dets) d.bbox = hflip(d.bbox);
  }
  return dets;
}

std::vector<fusion::FusedBox> merge(const TtaBundle& bundle,
                                    fusion::FusionConfig cfg) {
  if (bundle.entries.empty()) {
    throw ConfigError("tta: bundle for image " +
                      std::to_string(bundle.image_id) + " has no entries");
  }
  for (const TtaEntry& e : bundle.entries) {
    if (e.transform.scale_w <= 0 || e.transform.scale_h <= 0) {
      throw ConfigError("tta: transform dimensions must be positive");
    }
  }
  cfg.num_models = static_cast<int>(bundle.entries.size());

  std::vector<Detection> pooled;
  for (std::size_t i = 0; i < bundle.entries.size(); ++i) {
    auto remapped = remap(bundle.entries[i].detections,
                          bundle.entries[i].transform);
    for (Detection& d : remapped) {
      d.model_id = static_cast<int>(i);  // each transform acts as one model
      pooled.push_back(d);
    }
  }
  return fusion::wbf(pooled, cfg);
}

}  // namespace boxforge::tta
