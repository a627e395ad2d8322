#pragma once

#include <cstdint>

namespace uirft::geom {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  Point center() const { return {(x1 + x2) / 2.0, (y1 + y2) / 2.0}; }
  bool operator==(const BBox&) const = default;
};

struct ImageSize {
  int width = 0;
  int height = 0;
  std::int64_t area() const {
    return static_cast<std::int64_t>(width) * height;
  }
  bool operator==(const ImageSize&) const = default;
};

// Resize granularity and pixel-area bounds used by smart_resize.
struct ResizePolicy {
  int factor = 28;
  std::int64_t min_pixels = 28 * 28;
  std::int64_t max_pixels = 12845056;
};

// Dimensions whose aspect ratio exceeds this are rejected by smart_resize.
inline constexpr double kMaxAspectRatio = 200.0;

void validate(const BBox& b);
void validate(const ImageSize& s);
void validate(const ResizePolicy& p);

// Aspect-preserving resize to factor-multiple dimensions with area inside
// [min_pixels, max_pixels]: each dimension is rounded to the nearest factor
// multiple; oversized images shrink (floor rounding) and undersized grow
// (ceil rounding) by the square-root area ratio.
ImageSize smart_resize(const ImageSize& size, const ResizePolicy& policy = {});

// Maps a prediction made in resized-image space back to original pixels.
Point scale_coordinates(const Point& pred, const ImageSize& origin,
                        const ResizePolicy& policy = {});

// Boundary inclusive.
bool point_in_bbox(const Point& p, const BBox& b);

// Intersection over union; 0 when the union is degenerate.
double iou(const BBox& a, const BBox& b);

// True when |pred - gt| <= ratio * image diagonal.
bool within_screen_distance(const Point& pred, const Point& gt,
                            const ImageSize& size, double ratio = 0.14);

}  // namespace uirft::geom
