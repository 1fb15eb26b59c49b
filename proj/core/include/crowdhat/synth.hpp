#pragma once

#include <utility>
#include <vector>

#include "crowdhat/scene.hpp"

namespace crowdhat {

/// Configuration of the synthetic scene generator and detector simulator.
/// The simulator stands in for a real detection backbone: dense regions
/// produce smaller boxes with lower confidence, duplicates cluster tighter
/// around their source in dense regions, and false positives appear at a
/// rate proportional to the crowd size.
struct SynthConfig {
  std::uint64_t seed = 1;
  int num_scenes = 500;
  int width = 1024;
  int height = 768;
  std::pair<int, int> count_range{5, 220};
  std::pair<int, int> cluster_count_range{1, 4};
  double density_gradient = 3.0;     // within-scene density variation strength
  double detector_recall_base = 0.92;
  double fp_rate = 0.12;             // background false positives per true head
  double duplicate_rate = 0.8;       // duplicate near-boxes per detected head
  double size_noise = 0.15;          // relative std of box size jitter
  double conf_density_slope = 0.35;  // how strongly density depresses confidence
  double proposal_multiplier = 2.0;  // proposal overdraw relative to boxes

  void validate() const;
};

/// Default pseudo-box clamp bounds: side = clamp(nn distance, s_min, s_max)
/// with s_max = min(width,height)/8.
double pseudo_box_max_side(int width, int height);
constexpr double kPseudoBoxMinSide = 4.0;

/// One square box per point, side equal to the distance to the nearest
/// other point, clamped to [s_min, s_max]. A single isolated point gets
/// side s_max.
std::vector<PseudoBox> pseudo_boxes_from_points(
    const std::vector<Point>& points, int width, int height,
    double s_min = kPseudoBoxMinSide, double s_max = -1.0);

/// Number of points within radius r of each point (the point itself
/// included). Defaults r to the pseudo-box clamp bound s_max.
std::vector<int> local_density(const std::vector<Point>& points, int width,
                               int height, double radius = -1.0);

/// Draws ground-truth point sets: a mixture of Gaussian clusters plus a
/// uniform background, so per-region density varies within each scene.
/// Deterministic given cfg.seed; scene i uses an RNG stream derived from
/// (seed, i), so generation order never matters.
std::vector<SceneRecord> generate_ground_truth(const SynthConfig& cfg);

/// Fills boxes and proposals of one ground-truth scene with simulated
/// detector output. Pure given (scene, cfg, scene_index).
SceneRecord simulate_detector(const SceneRecord& scene, const SynthConfig& cfg,
                              int scene_index);

/// generate_ground_truth + simulate_detector over every scene.
std::vector<SceneRecord> generate_dataset(const SynthConfig& cfg);

}  // namespace crowdhat
