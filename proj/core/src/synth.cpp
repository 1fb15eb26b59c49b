#include "crowdhat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "crowdhat/rng.hpp"

namespace crowdhat {

namespace {

// Per-purpose stream salts keep GT generation and detector simulation
// decorrelated while both derive from (cfg.seed, scene index).
constexpr std::uint64_t kGroundTruthSalt = 0x67741d2a5c8e3b17ULL;
constexpr std::uint64_t kDetectorSalt = 0xab12f9e04d6c8851ULL;

// How strongly local density depresses per-head recall. recall_base == 1
// stays exactly 1 regardless of density.
constexpr double kRecallDensityGain = 0.15;

// Duplicate near-boxes hug their source tighter in dense regions, so the
// IoU band separating duplicates from true neighbors shifts with density.
constexpr double kDuplicateOffsetBase = 0.45;
constexpr double kDuplicateOffsetDensityGain = 0.6;

std::uint64_t stream_seed(std::uint64_t seed, int index, std::uint64_t salt) {
  return splitmix64(splitmix64(seed ^ salt) +
                    0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1));
}

std::string scene_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene-%05d", index);
  return buf;
}

double median_side(std::vector<double> sides) {
  std::sort(sides.begin(), sides.end());
  return sides[sides.size() / 2];
}

}  // namespace

void SynthConfig::validate() const {
  if (num_scenes < 0) throw std::invalid_argument("num_scenes must be >= 0");
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("frame dimensions must be positive");
  if (count_range.first < 0 || count_range.second < count_range.first)
    throw std::invalid_argument("count_range is empty");
  if (cluster_count_range.first < 1 ||
      cluster_count_range.second < cluster_count_range.first)
    throw std::invalid_argument("cluster_count_range is empty");
  if (density_gradient < 0.0)
    throw std::invalid_argument("density_gradient must be >= 0");
  if (detector_recall_base <= 0.0 || detector_recall_base > 1.0)
    throw std::invalid_argument("detector_recall_base must be in (0,1]");
  if (fp_rate < 0.0 || duplicate_rate < 0.0)
    throw std::invalid_argument("rates must be >= 0");
  if (size_noise < 0.0 || conf_density_slope < 0.0)
    throw std::invalid_argument("noise parameters must be >= 0");
  if (proposal_multiplier < 1.0)
    throw std::invalid_argument("proposal_multiplier must be >= 1");
  if (static_cast<long long>(width) * height < count_range.second)
    throw std::invalid_argument(
        "frame too small to place the requested head count");
}

double pseudo_box_max_side(int width, int height) {
  return std::min(width, height) / 8.0;
}

std::vector<PseudoBox> pseudo_boxes_from_points(const std::vector<Point>& points,
                                                int width, int height,
                                                double s_min, double s_max) {
  if (s_max <= 0.0) s_max = pseudo_box_max_side(width, height);
  std::vector<PseudoBox> out;
  out.reserve(points.size());
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    double nn = s_max;  // isolated point falls back to the upper clamp
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      nn = std::min(nn, distance(points[i], points[j]));
    }
    out.push_back(PseudoBox{points[i].x, points[i].y,
                            std::clamp(nn, std::min(s_min, s_max), s_max)});
  }
  return out;
}

std::vector<int> local_density(const std::vector<Point>& points, int width,
                               int height, double radius) {
  if (radius <= 0.0) radius = pseudo_box_max_side(width, height);
  const std::size_t n = points.size();
  std::vector<int> dens(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (distance(points[i], points[j]) <= radius) ++dens[i];
  return dens;
}

std::vector<SceneRecord> generate_ground_truth(const SynthConfig& cfg) {
  cfg.validate();
  std::vector<SceneRecord> scenes;
  scenes.reserve(cfg.num_scenes);
  const double w = cfg.width, h = cfg.height;
  const double frac_clustered =
      cfg.density_gradient / (1.0 + cfg.density_gradient);
  const double sigma_base =
      std::min(w, h) * 0.35 / (1.0 + cfg.density_gradient);

  for (int i = 0; i < cfg.num_scenes; ++i) {
    Rng rng(stream_seed(cfg.seed, i, kGroundTruthSalt));
    SceneRecord s;
    s.id = scene_id(i);
    s.width = cfg.width;
    s.height = cfg.height;

    const long n = rng.uniform_int(cfg.count_range.first, cfg.count_range.second);
    const long n_clusters = rng.uniform_int(cfg.cluster_count_range.first,
                                            cfg.cluster_count_range.second);
    std::vector<Point> centers(n_clusters);
    std::vector<double> sigmas(n_clusters);
    for (long c = 0; c < n_clusters; ++c) {
      centers[c] = Point{rng.uniform(0.15 * w, 0.85 * w),
                         rng.uniform(0.15 * h, 0.85 * h)};
      sigmas[c] = sigma_base * rng.uniform(0.6, 1.4);
    }

    s.points.reserve(n);
    for (long k = 0; k < n; ++k) {
      Point p;
      if (n_clusters > 0 && rng.bernoulli(frac_clustered)) {
        const long c = rng.uniform_int(0, n_clusters - 1);
        p = Point{rng.normal(centers[c].x, sigmas[c]),
                  rng.normal(centers[c].y, sigmas[c])};
        for (int t = 0; t < 8 && (p.x < 0 || p.x > w || p.y < 0 || p.y > h); ++t)
          p = Point{rng.normal(centers[c].x, sigmas[c]),
                    rng.normal(centers[c].y, sigmas[c])};
        p.x = std::clamp(p.x, 0.0, w);
        p.y = std::clamp(p.y, 0.0, h);
      } else {
        p = Point{rng.uniform(0.0, w), rng.uniform(0.0, h)};
      }
      s.points.push_back(p);
    }
    scenes.push_back(std::move(s));
  }
  return scenes;
}

SceneRecord simulate_detector(const SceneRecord& scene, const SynthConfig& cfg,
                              int scene_index) {
  cfg.validate();
  Rng rng(stream_seed(cfg.seed, scene_index, kDetectorSalt));
  SceneRecord out = scene;
  out.boxes.clear();

  const double w = scene.width, h = scene.height;
  const auto pseudo = pseudo_boxes_from_points(scene.points, scene.width,
                                               scene.height);
  const auto dens = local_density(scene.points, scene.width, scene.height);

  for (std::size_t k = 0; k < scene.points.size(); ++k) {
    const int d = dens[k];
    const double p_det = std::pow(cfg.detector_recall_base,
                                  1.0 + kRecallDensityGain * (d - 1));
    if (!rng.bernoulli(p_det)) continue;

    const double side = pseudo[k].side;
    Detection b;
    b.cx = std::clamp(scene.points[k].x + rng.normal() * 0.25 * cfg.size_noise * side,
                      0.0, w);
    b.cy = std::clamp(scene.points[k].y + rng.normal() * 0.25 * cfg.size_noise * side,
                      0.0, h);
    b.w = b.h = side * std::exp(rng.normal() * cfg.size_noise);
    const double mean_conf =
        std::clamp(0.9 - cfg.conf_density_slope * (d - 1) / 8.0, 0.05, 0.95);
    b.score = logit(mean_conf) + rng.normal() * 2.0 * cfg.size_noise;
    out.boxes.push_back(b);

    const long n_dup = rng.poisson(cfg.duplicate_rate);
    const double offset_frac =
        kDuplicateOffsetBase / (1.0 + kDuplicateOffsetDensityGain * (d - 1));
    for (long j = 0; j < n_dup; ++j) {
      const double ang = rng.uniform(0.0, 6.283185307179586);
      Detection dup = b;
      dup.cx = std::clamp(b.cx + std::cos(ang) * offset_frac * b.w, 0.0, w);
      dup.cy = std::clamp(b.cy + std::sin(ang) * offset_frac * b.h, 0.0, h);
      const double sj = std::exp(rng.normal() * 0.5 * cfg.size_noise);
      dup.w = b.w * sj;
      dup.h = b.h * sj;
      dup.score = b.score - 0.3 - std::abs(rng.normal()) * 0.4;
      out.boxes.push_back(dup);
    }
  }

  if (!scene.points.empty() && cfg.fp_rate > 0.0) {
    std::vector<double> sides;
    sides.reserve(pseudo.size());
    for (const auto& p : pseudo) sides.push_back(p.side);
    const double fp_side = median_side(std::move(sides));
    const long n_fp =
        rng.poisson(cfg.fp_rate * static_cast<double>(scene.points.size()));
    for (long j = 0; j < n_fp; ++j) {
      Detection fp;
      fp.cx = rng.uniform(0.0, w);
      fp.cy = rng.uniform(0.0, h);
      fp.w = fp.h = fp_side * std::exp(rng.normal() * 0.4);
      fp.score = logit(0.45) + rng.normal() * 0.5;
      out.boxes.push_back(fp);
    }
  }

  // Proposal overdraw: each box resampled >= 1 time with extra jitter and
  // noisier scores.
  std::vector<Detection> proposals;
  for (const auto& b : out.boxes) {
    const long copies = 1 + rng.poisson(cfg.proposal_multiplier - 1.0);
    for (long j = 0; j < copies; ++j) {
      Detection p = b;
      p.cx = std::clamp(b.cx + rng.normal() * 0.35 * cfg.size_noise * b.w, 0.0, w);
      p.cy = std::clamp(b.cy + rng.normal() * 0.35 * cfg.size_noise * b.h, 0.0, h);
      const double sj = std::exp(rng.normal() * 1.5 * cfg.size_noise);
      p.w = b.w * sj;
      p.h = b.h * sj;
      p.score = b.score + rng.normal() * 3.0 * cfg.size_noise;
      proposals.push_back(p);
    }
  }
  out.proposals = std::move(proposals);
  return out;
}

std::vector<SceneRecord> generate_dataset(const SynthConfig& cfg) {
  auto scenes = generate_ground_truth(cfg);
  for (int i = 0; i < static_cast<int>(scenes.size()); ++i)
    scenes[i] = simulate_detector(scenes[i], cfg, i);
  return scenes;
}

}  // namespace crowdhat
