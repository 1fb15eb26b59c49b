#pragma once

#include <algorithm>
#include <cmath>

namespace crowdhat {

/// A ground-truth head center.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// One detector output: center, size, raw (pre-sigmoid) confidence.
/// The same shape is used for bounding boxes and region proposals.
struct Detection {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double score = 0.0;
};

/// Square box synthesized from a point annotation. Always centered on its
/// source point, side derived from nearest-neighbor spacing.
struct PseudoBox {
  double cx = 0.0;
  double cy = 0.0;
  double side = 0.0;

  Detection as_detection(double score = 0.0) const {
    return Detection{cx, cy, side, side, score};
  }
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// softplus(x) = log(1 + e^x), computed without overflow for large x.
inline double softplus(double x) {
  return x > 30.0 ? x : std::log1p(std::exp(x));
}

/// Intersection-over-union of two axis-aligned rectangles given in
/// center/size form. Symmetric, in [0,1], exactly 1 for identical boxes.
inline double iou(const Detection& a, const Detection& b) {
  const double ax0 = a.cx - 0.5 * a.w, ax1 = a.cx + 0.5 * a.w;
  const double ay0 = a.cy - 0.5 * a.h, ay1 = a.cy + 0.5 * a.h;
  const double bx0 = b.cx - 0.5 * b.w, bx1 = b.cx + 0.5 * b.w;
  const double by0 = b.cy - 0.5 * b.h, by1 = b.cy + 0.5 * b.h;
  const double iw = std::min(ax1, bx1) - std::max(ax0, bx0);
  const double ih = std::min(ay1, by1) - std::max(ay0, by0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return inter / uni;
}

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace crowdhat
