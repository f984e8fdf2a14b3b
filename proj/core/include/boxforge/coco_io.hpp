#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "boxforge/types.hpp"

namespace boxforge::coco {

struct LoadReport {
  // Annotation boxes that fell outside their image and were clamped.
  int clamped_boxes = 0;
};

// In-memory view of a COCO "instances" file with boxes normalized.
struct DatasetIndex {
  std::map<std::int64_t, ImageMeta> images;
  std::vector<GroundTruth> annotations;
  // Parallel to annotations; 1.0 unless the file carried a `weight` field.
  std::vector<double> annotation_weights;
  std::map<std::int64_t, std::string> categories;
  std::map<std::int64_t, std::int64_t> instance_counts;
  LoadReport load_report;
};

// Parses a COCO instances JSON. Pixel [x,y,w,h] boxes are normalized via
// their image's dimensions; iscrowd maps to GroundTruth::ignore. Throws
// ParseError (with byte offset) on malformed JSON, DataError listing ids on
// dangling image/category references. Boxes outside their image are clamped
// and counted in the load report.
DatasetIndex load_annotations(const std::filesystem::path& path);

// Writes the index back as COCO instances JSON. Annotation ids are assigned
// sequentially; weights other than 1.0 are emitted as a `weight` field.
void save_annotations(const DatasetIndex& index,
                      const std::filesystem::path& path);

// Parses a COCO results array, tagging every detection with model_id.
// Throws DataError on scores outside [0,1] or unknown image ids.
std::vector<Detection> load_results(const std::filesystem::path& path,
                                    const DatasetIndex& index,
                                    int model_id = 0);

// Same, but normalizes by fixed dimensions instead of per-image metadata:
// for results produced on uniformly resized copies (test-time augmentation).
std::vector<Detection> load_results_scaled(const std::filesystem::path& path,
                                           const DatasetIndex& index,
                                           int width, int height,
                                           int model_id = 0);

void save_results(const std::vector<Detection>& dets,
                  const DatasetIndex& index,
                  const std::filesystem::path& path);

// RGB8 image decode/encode. PNG round-trips bit-exactly; JPEG saves at
// quality 95; grayscale sources expand to r=g=b. Throws IoError on
// unsupported or corrupt streams.
ImageBuffer load_image(const std::filesystem::path& path);
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

// Bilinear resize (used to equalize mix-up pair dimensions).
ImageBuffer resize_image(const ImageBuffer& img, int width, int height);

}  // namespace boxforge::coco
