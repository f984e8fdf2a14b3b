#pragma once

#include "boxforge/types.hpp"

namespace boxforge {

// Intersection over union. Total on valid boxes: returns 0 when the union
// has zero area.
double iou(const BBox& a, const BBox& b);

// Restores corner ordering (swapping if needed) and clips every coordinate
// to [0, 1]. Throws DataError on non-finite input.
BBox clamp_to_unit(const BBox& b);

// Mirror across the vertical image axis: [1-x2, y1, 1-x1, y2].
BBox hflip(const BBox& b);

// Exact affine scaling between normalized boxes and COCO pixel rectangles.
// Throws DataError when the meta has non-positive dimensions.
PixelRect to_pixels(const BBox& b, const ImageMeta& m);
BBox from_pixels(const PixelRect& r, const ImageMeta& m);

// Intersection box; degenerate (zero-area, corner-collapsed) when disjoint.
BBox intersect(const BBox& a, const BBox& b);

}  // namespace boxforge
