#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace boxforge {

// Axis-aligned rectangle in normalized coordinates: every value is a
// fraction of image width/height, so boxes are comparable across scales.
// Valid boxes satisfy 0 <= x1 <= x2 <= 1 and 0 <= y1 <= y2 <= 1.
// Zero-area boxes are legal values; they have iou 0 against everything
// and are filtered at fusion/eval entry rather than rejected here.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }

  bool operator==(const BBox&) const = default;
};

// One model prediction on one image.
struct Detection {
  BBox bbox;
  double score = 0.0;             // in [0, 1]
  std::int64_t category_id = 0;   // >= 1 in COCO files
  int model_id = 0;               // source model, used by ensembling
  std::int64_t image_id = 0;
};

// One annotated object. `ignore` maps from COCO iscrowd: matched
// detections are excluded from scoring instead of counted.
struct GroundTruth {
  BBox bbox;
  std::int64_t category_id = 0;
  std::int64_t image_id = 0;
  bool ignore = false;
};

struct ImageMeta {
  std::int64_t image_id = 0;
  int width = 0;    // pixels, > 0
  int height = 0;   // pixels, > 0
  std::string file_name;
};

// Row-major RGB8 pixel plane.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size == width * height * 3

  static ImageBuffer filled(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
  std::uint8_t* at(int x, int y) { return pixels.data() + offset(x, y); }
  const std::uint8_t* at(int x, int y) const { return pixels.data() + offset(x, y); }

  bool operator==(const ImageBuffer&) const = default;
};

// Pixel-space rectangle in the COCO [x, y, w, h] convention.
struct PixelRect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool operator==(const PixelRect&) const = default;
};

}  // namespace boxforge
