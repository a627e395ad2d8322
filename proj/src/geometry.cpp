#include "uirft/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uirft::geom {

void validate(const BBox& b) {
  if (!(b.x1 <= b.x2 && b.y1 <= b.y2)) {
    throw std::invalid_argument("BBox: requires x1 <= x2 and y1 <= y2");
  }
  if (!std::isfinite(b.x1) || !std::isfinite(b.y1) || !std::isfinite(b.x2) ||
      !std::isfinite(b.y2)) {
    throw std::invalid_argument("BBox: coordinates must be finite");
  }
}

void validate(const ImageSize& s) {
  if (s.width < 1 || s.height < 1) {
    throw std::invalid_argument("ImageSize: width and height must be >= 1");
  }
}

void validate(const ResizePolicy& p) {
  if (p.factor < 1) throw std::invalid_argument("ResizePolicy: factor must be >= 1");
  if (p.min_pixels > p.max_pixels) {
    throw std::invalid_argument("ResizePolicy: min_pixels must be <= max_pixels");
  }
  std::int64_t f2 = static_cast<std::int64_t>(p.factor) * p.factor;
  if (p.min_pixels < f2) {
    throw std::invalid_argument("ResizePolicy: min_pixels must be >= factor^2");
  }
}

namespace {

std::int64_t round_by_factor(double v, int factor) {
  return std::llround(v / factor) * factor;
}

std::int64_t floor_by_factor(double v, int factor) {
  return static_cast<std::int64_t>(std::floor(v / factor)) * factor;
}

std::int64_t ceil_by_factor(double v, int factor) {
  return static_cast<std::int64_t>(std::ceil(v / factor)) * factor;
}

}  // namespace

ImageSize smart_resize(const ImageSize& size, const ResizePolicy& policy) {
  validate(size);
  validate(policy);
  double w = size.width;
  double h = size.height;
  if (std::max(w, h) / std::min(w, h) > kMaxAspectRatio) {
    throw std::invalid_argument("smart_resize: aspect ratio exceeds " +
                                std::to_string(kMaxAspectRatio));
  }

  int f = policy.factor;
  std::int64_t w_bar = std::max<std::int64_t>(f, round_by_factor(w, f));
  std::int64_t h_bar = std::max<std::int64_t>(f, round_by_factor(h, f));

  if (w_bar * h_bar > policy.max_pixels) {
    double scale = std::sqrt(static_cast<double>(policy.max_pixels) / (w * h));
    w_bar = std::max<std::int64_t>(f, floor_by_factor(w * scale, f));
    h_bar = std::max<std::int64_t>(f, floor_by_factor(h * scale, f));
  } else if (w_bar * h_bar < policy.min_pixels) {
    double scale = std::sqrt(static_cast<double>(policy.min_pixels) / (w * h));
    w_bar = ceil_by_factor(w * scale, f);
    h_bar = ceil_by_factor(h * scale, f);
  }
  return {static_cast<int>(w_bar), static_cast<int>(h_bar)};
}

Point scale_coordinates(const Point& pred, const ImageSize& origin,
                        const ResizePolicy& policy) {
  ImageSize resized = smart_resize(origin, policy);
  return {pred.x * origin.width / resized.width,
          pred.y * origin.height / resized.height};
}

bool point_in_bbox(const Point& p, const BBox& b) {
  return b.x1 <= p.x && p.x <= b.x2 && b.y1 <= p.y && p.y <= b.y2;
}

double iou(const BBox& a, const BBox& b) {
  double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  double inter = std::max(0.0, iw) * std::max(0.0, ih);
  double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

bool within_screen_distance(const Point& pred, const Point& gt,
                            const ImageSize& size, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("within_screen_distance: ratio must be in (0,1]");
  }
  double dx = pred.x - gt.x;
  double dy = pred.y - gt.y;
  double diag = std::hypot(static_cast<double>(size.width),
                           static_cast<double>(size.height));
  return std::hypot(dx, dy) <= ratio * diag;
}

}  // namespace uirft::geom
