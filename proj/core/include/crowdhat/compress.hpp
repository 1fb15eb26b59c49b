#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "crowdhat/scene.hpp"

namespace crowdhat {

/// Knobs of the mixed 2D-1D output-feature compression. The scaling
/// coefficients spread numerically congested values across the histogram
/// range before the nonlinear map; confidences already live on a usable
/// scale, so their coefficients default to 1.
struct CompressionConfig {
  int grid_size = 64;            // S
  int hist_len = 256;            // L
  double alpha_box_area = 200.0;   // area coefficients feed tanh
  double alpha_box_conf = 1.0;     // confidence coefficients feed sigmoid
  double alpha_prop_area = 200.0;
  double alpha_prop_conf = 1.0;
  bool two_stage = true;         // C = 4 with proposals, C = 2 without
  // The 2D confidence matrices use bare sigmoid(score); this override
  // scales the score first and is 1 (off) unless experimenting.
  double conf_2d_alpha = 1.0;

  int channels() const { return two_stage ? 4 : 2; }
  void validate() const;
};

/// S x S accumulation grid. Cell (ix, iy) indexes the x-bin then y-bin;
/// storage is iy-major so a serialized row spans x at fixed y, matching
/// image orientation.
struct FeatureGrid {
  int size = 0;
  std::vector<double> v;

  explicit FeatureGrid(int s = 0) : size(s), v(static_cast<std::size_t>(s) * s) {}
  double& at(int ix, int iy) { return v[static_cast<std::size_t>(iy) * size + ix]; }
  double at(int ix, int iy) const {
    return v[static_cast<std::size_t>(iy) * size + ix];
  }
};

/// Stacked network input pair: t2d is C x S x S, t1d is C x L, both
/// channel-major. Channel order is fixed; one-stage configs carry only the
/// first two channels.
struct CompressedFeatures {
  int channels = 0;
  int grid_size = 0;
  int hist_len = 0;
  std::vector<double> t2d;
  std::vector<double> t1d;

  static constexpr std::array<std::string_view, 4> kChannelOrder = {
      "box_area", "box_conf", "proposal_area", "proposal_conf"};

  std::span<double> t2d_channel(int c) {
    const std::size_t plane = static_cast<std::size_t>(grid_size) * grid_size;
    return {t2d.data() + c * plane, plane};
  }
  std::span<const double> t2d_channel(int c) const {
    const std::size_t plane = static_cast<std::size_t>(grid_size) * grid_size;
    return {t2d.data() + c * plane, plane};
  }
  std::span<double> t1d_channel(int c) {
    return {t1d.data() + static_cast<std::size_t>(c) * hist_len,
            static_cast<std::size_t>(hist_len)};
  }
  std::span<const double> t1d_channel(int c) const {
    return {t1d.data() + static_cast<std::size_t>(c) * hist_len,
            static_cast<std::size_t>(hist_len)};
  }
};

/// Spatial grid of summed normalized areas: cell (i,j) accumulates
/// (w/W)*(h/H) over detections whose center bins to (i,j). Patch size is
/// W/S x H/S; a center exactly on the far edge clamps into the last bin.
FeatureGrid compress_2d_area(std::span<const Detection> dets, double width,
                             double height, int grid_size);

/// Spatial grid of summed sigmoid confidences.
FeatureGrid compress_2d_conf(std::span<const Detection> dets, double width,
                             double height, int grid_size, double alpha = 1.0);

/// Histogram of sigmoid(score * alpha) over L equal intervals of [0,1).
/// The bin index floor(value * L) clamps to L-1 when the value reaches 1.
std::vector<double> compress_1d_conf(std::span<const Detection> dets,
                                     int hist_len, double alpha);

/// Histogram of tanh(normalized area * alpha).
std::vector<double> compress_1d_area(std::span<const Detection> dets,
                                     double width, double height, int hist_len,
                                     double alpha);

/// Applies all four compressions to boxes and, for two-stage configs, to
/// proposals, stacking channels in kChannelOrder. Throws if the config is
/// two-stage but the scene carries no proposals.
CompressedFeatures compress_scene(const SceneRecord& scene,
                                  const CompressionConfig& cfg);

/// Writes one CSV per channel into `dir` (t2d_<name>.csv as an S x S grid
/// with rows spanning x at fixed y, t1d_<name>.csv as a single row).
/// Values are printed with enough digits to round-trip binary64 exactly.
void dump_features(const CompressedFeatures& f,
                   const std::filesystem::path& dir);

/// Binary feature file: uint32 C,S,L header, then t2d and t1d as raw
/// little-endian 64-bit reals in channel-major, row-major order.
void write_features(const CompressedFeatures& f,
                    const std::filesystem::path& path);
CompressedFeatures read_features(const std::filesystem::path& path);

}  // namespace crowdhat
