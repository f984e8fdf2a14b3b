#include "boxforge/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "boxforge/error.hpp"

namespace boxforge {

double iou(const BBox& a, const BBox& b) {
  const double ix1 = std::max(a.x1, b.x1);
  const double iy1 = std::max(a.y1, b.y1);
  const double ix2 = std::min(a.x2, b.x2);
  const double iy2 = std::min(a.y2, b.y2);
  const double iw = ix2 - ix1;
  const double ih = iy2 - iy1;
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

BBox clamp_to_unit(const BBox& b) {
  if (!std::isfinite(b.x1) || !std::isfinite(b.y1) || !std::isfinite(b.x2) ||
      !std::isfinite(b.y2)) {
    throw DataError("invalid geometry: non-finite box coordinate");
  }
  BBox out = b;
  if (out.x1 > out.x2) std::swap(out.x1, out.x2);
  if (out.y1 > out.y2) std::swap(out.y1, out.y2);
  out.x1 = std::clamp(out.x1, 0.0, 1.0);
  out.y1 = std::clamp(out.y1, 0.0, 1.0);
  out.x2 = std::clamp(out.x2, 0.0, 1.0);
  out.y2 = std::clamp(out.y2, 0.0, 1.0);
  return out;
}

BBox hflip(const BBox& b) { return {1.0 - b.x2, b.y1, 1.0 - b.x1, b.y2}; }

static void require_valid_meta(const ImageMeta& m) {
  if (m.width <= 0 || m.height <= 0) {
    throw DataError("invalid image meta: non-positive dimensions for image " +
                    std::to_string(m.image_id));
  }
}

PixelRect to_pixels(const BBox& b, const ImageMeta& m) {
  require_valid_meta(m);
  const double w = static_cast<double>(m.width);
  const double h = static_cast<double>(m.height);
  return {b.x1 * w, b.y1 * h, (b.x2 - b.x1) * w, (b.y2 - b.y1) * h};
}

BBox from_pixels(const PixelRect& r, const ImageMeta& m) {
  require_valid_meta(m);
  const double w = static_cast<double>(m.width);
  const double h = static_cast<double>(m.height);
  return {r.x / w, r.y / h, (r.x + r.w) / w, (r.y + r.h) / h};
}

BBox intersect(const BBox& a, const BBox& b) {
  const double ix1 = std::max(a.x1, b.x1);
  const double iy1 = std::max(a.y1, b.y1);
  const double ix2 = std::min(a.x2, b.x2);
  const double iy2 = std::min(a.y2, b.y2);
  if (ix1 >= ix2 || iy1 >= iy2) return {ix1, iy1, ix1, iy1};
  return {ix1, iy1, ix2, iy2};
}

ImageBuffer ImageBuffer::filled(int w, int h, std::uint8_t r, std::uint8_t g,
                                std::uint8_t b) {
  ImageBuffer img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
    img.pixels[i] = r;
    img.pixels[i + 1] = g;
    img.pixels[i + 2] = b;
  }
  return img;
}

}  // namespace boxforge
