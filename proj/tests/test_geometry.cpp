#include "uirft/geometry.hpp"

#include <cmath>

#include "doctest.h"
#include "uirft/rng.hpp"

using namespace uirft;
using geom::BBox;
using geom::ImageSize;
using geom::Point;
using geom::ResizePolicy;

namespace {

// Independent oracle: count unit pixels whose centers fall in each box.
double grid_iou(const BBox& a, const BBox& b, int extent) {
  long long inter = 0, in_a = 0, in_b = 0;
  for (int y = 0; y < extent; ++y) {
    for (int x = 0; x < extent; ++x) {
      Point p{x + 0.5, y + 0.5};
      bool pa = p.x > a.x1 && p.x < a.x2 && p.y > a.y1 && p.y < a.y2;
      bool pb = p.x > b.x1 && p.x < b.x2 && p.y > b.y1 && p.y < b.y2;
      inter += pa && pb;
      in_a += pa;
      in_b += pb;
    }
  }
  long long uni = in_a + in_b - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

// Independent oracle: nearest factor multiple by exhaustive candidate scan.
int nearest_multiple(int value, int factor, int limit) {
  int best = factor;
  double best_dist = std::abs(value - factor);
  for (int m = factor; m <= limit; m += factor) {
    double d = std::abs(value - m);
    if (d < best_dist) {
      best = m;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("smart_resize keeps factor-multiple images inside bounds untouched") {
  CHECK(geom::smart_resize({2800, 2800}) == ImageSize{2800, 2800});
}

TEST_CASE("smart_resize shrinks oversized images by the area ratio") {
  CHECK(geom::smart_resize({5600, 5600}) == ImageSize{3584, 3584});
}

TEST_CASE("smart_resize rounds to the nearest factor multiples") {
  CHECK(geom::smart_resize({1179, 2556}) == ImageSize{1176, 2548});
  // cross-check the rounding against the enumeration oracle
  CHECK(nearest_multiple(1179, 28, 10000) == 1176);
  CHECK(nearest_multiple(2556, 28, 10000) == 2548);
}

TEST_CASE("smart_resize grows undersized images") {
  ResizePolicy policy;
  policy.min_pixels = 100 * 28 * 28;
  ImageSize out = geom::smart_resize({30, 30}, policy);
  CHECK(out.width % 28 == 0);
  CHECK(out.height % 28 == 0);
  CHECK(out.area() >= policy.min_pixels);
}

TEST_CASE("smart_resize rejects invalid inputs") {
  CHECK_THROWS_AS(geom::smart_resize({0, 100}), std::invalid_argument);
  CHECK_THROWS_AS(geom::smart_resize({100000, 100}), std::invalid_argument);
  ResizePolicy bad;
  bad.min_pixels = 10;  // below factor^2
  CHECK_THROWS_AS(geom::smart_resize({100, 100}, bad), std::invalid_argument);
  bad = ResizePolicy{};
  bad.max_pixels = 100;
  CHECK_THROWS_AS(geom::smart_resize({100, 100}, bad), std::invalid_argument);
}

TEST_CASE("smart_resize properties over random sizes") {
  Rng rng(2024);
  ResizePolicy policy;
  for (int trial = 0; trial < 2000; ++trial) {
    int w = rng.next_int(1, 8000);
    int h = rng.next_int(1, 8000);
    double ratio = static_cast<double>(std::max(w, h)) / std::min(w, h);
    if (ratio > geom::kMaxAspectRatio) continue;
    ImageSize out = geom::smart_resize({w, h}, policy);
    CAPTURE(w);
    CAPTURE(h);
    CHECK(out.width % policy.factor == 0);
    CHECK(out.height % policy.factor == 0);
    CHECK(out.area() <= policy.max_pixels);
    CHECK(out.area() >= policy.min_pixels);
    CHECK(geom::smart_resize(out, policy) == out);  // idempotent
  }
}

TEST_CASE("scale_coordinates is identity when resize is identity") {
  Point p = geom::scale_coordinates({100, 200}, {1176, 2548});
  CHECK(p.x == doctest::Approx(100).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(200).epsilon(1e-12));
}

TEST_CASE("scale_coordinates maps resized space back to original pixels") {
  Point p = geom::scale_coordinates({1792, 1792}, {5600, 5600});
  CHECK(p.x == doctest::Approx(2800).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(2800).epsilon(1e-12));
  Point origin = geom::scale_coordinates({0, 0}, {5600, 5600});
  CHECK(origin.x == 0.0);
  CHECK(origin.y == 0.0);
}

TEST_CASE("point_in_bbox is boundary inclusive") {
  BBox b{0, 0, 100, 100};
  CHECK(geom::point_in_bbox({50, 50}, b));
  CHECK_FALSE(geom::point_in_bbox({150, 50}, b));
  CHECK(geom::point_in_bbox({100, 100}, b));
  CHECK(geom::point_in_bbox({0, 0}, b));
}

TEST_CASE("point_in_bbox contains the center of any non-degenerate box") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    double x1 = rng.next_double() * 100;
    double y1 = rng.next_double() * 100;
    BBox b{x1, y1, x1 + 0.1 + rng.next_double() * 50, y1 + 0.1 + rng.next_double() * 50};
    CHECK(geom::point_in_bbox(b.center(), b));
  }
}

TEST_CASE("iou matches hand-computed cases") {
  CHECK(geom::iou({0, 0, 10, 10}, {0, 0, 10, 10}) == doctest::Approx(1.0));
  CHECK(geom::iou({0, 0, 10, 10}, {20, 20, 30, 30}) == doctest::Approx(0.0));
  CHECK(geom::iou({0, 0, 10, 10}, {5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0));
  CHECK(grid_iou({0, 0, 10, 10}, {5, 0, 15, 10}, 20) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("iou of degenerate boxes is 0") {
  CHECK(geom::iou({5, 5, 5, 5}, {5, 5, 5, 5}) == 0.0);
}

TEST_CASE("iou properties against the pixel-grid oracle") {
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    // integer-aligned boxes so the unit-pixel oracle is exact
    int ax1 = rng.next_int(0, 30), ay1 = rng.next_int(0, 30);
    int bx1 = rng.next_int(0, 30), by1 = rng.next_int(0, 30);
    BBox a{double(ax1), double(ay1), double(ax1 + rng.next_int(1, 20)),
           double(ay1 + rng.next_int(1, 20))};
    BBox b{double(bx1), double(by1), double(bx1 + rng.next_int(1, 20)),
           double(by1 + rng.next_int(1, 20))};
    double v = geom::iou(a, b);
    CHECK(v == doctest::Approx(geom::iou(b, a)));  // symmetric
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == doctest::Approx(grid_iou(a, b, 60)).epsilon(1e-9));
  }
}

TEST_CASE("within_screen_distance uses the diagonal rule") {
  ImageSize screen{1000, 1000};
  CHECK(geom::within_screen_distance({500, 500}, {500, 500}, screen));
  CHECK(geom::within_screen_distance({600, 600}, {500, 500}, screen));
  CHECK_FALSE(geom::within_screen_distance({700, 700}, {500, 500}, screen));
  CHECK_THROWS_AS(geom::within_screen_distance({0, 0}, {0, 0}, screen, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(geom::within_screen_distance({0, 0}, {0, 0}, screen, 1.5),
                  std::invalid_argument);
}
