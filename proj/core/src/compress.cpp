#include "crowdhat/compress.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace crowdhat {

namespace {

int bin_index(double coord, double cell, int n) {
  const int i = static_cast<int>(std::floor(coord / cell));
  return std::min(std::max(i, 0), n - 1);
}

void write_csv_row(std::FILE* f, std::span<const double> row) {
  char buf[40];
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", row[i]);
    std::fputs(buf, f);
    std::fputc(i + 1 < row.size() ? ',' : '\n', f);
  }
}

}  // namespace

void CompressionConfig::validate() const {
  if (grid_size < 1) throw std::invalid_argument("grid_size must be >= 1");
  if (hist_len < 1) throw std::invalid_argument("hist_len must be >= 1");
  if (alpha_box_area < 1.0 || alpha_box_conf < 1.0 || alpha_prop_area < 1.0 ||
      alpha_prop_conf < 1.0)
    throw std::invalid_argument("scaling coefficients must be >= 1");
}

FeatureGrid compress_2d_area(std::span<const Detection> dets, double width,
                             double height, int grid_size) {
  FeatureGrid m(grid_size);
  const double w0 = width / grid_size, h0 = height / grid_size;
  for (const auto& d : dets) {
    m.at(bin_index(d.cx, w0, grid_size), bin_index(d.cy, h0, grid_size)) +=
        (d.w / width) * (d.h / height);
  }
  return m;
}

FeatureGrid compress_2d_conf(std::span<const Detection> dets, double width,
                             double height, int grid_size, double alpha) {
  FeatureGrid m(grid_size);
  const double w0 = width / grid_size, h0 = height / grid_size;
  for (const auto& d : dets) {
    m.at(bin_index(d.cx, w0, grid_size), bin_index(d.cy, h0, grid_size)) +=
        sigmoid(d.score * alpha);
  }
  return m;
}

std::vector<double> compress_1d_conf(std::span<const Detection> dets,
                                     int hist_len, double alpha) {
  std::vector<double> v(hist_len, 0.0);
  for (const auto& d : dets) {
    const int i = static_cast<int>(std::floor(sigmoid(d.score * alpha) * hist_len));
    v[std::min(i, hist_len - 1)] += 1.0;
  }
  return v;
}

std::vector<double> compress_1d_area(std::span<const Detection> dets,
                                     double width, double height, int hist_len,
                                     double alpha) {
  std::vector<double> v(hist_len, 0.0);
  for (const auto& d : dets) {
    const double a = (d.w / width) * (d.h / height);
    const int i = static_cast<int>(std::floor(std::tanh(a * alpha) * hist_len));
    v[std::min(i, hist_len - 1)] += 1.0;
  }
  return v;
}

CompressedFeatures compress_scene(const SceneRecord& scene,
                                  const CompressionConfig& cfg) {
  cfg.validate();
  if (cfg.two_stage && !scene.proposals)
    throw std::runtime_error("two-stage compression requires proposals: scene " +
                             scene.id);
  const double w = scene.width, h = scene.height;
  const int s = cfg.grid_size, l = cfg.hist_len;

  CompressedFeatures f;
  f.channels = cfg.channels();
  f.grid_size = s;
  f.hist_len = l;
  f.t2d.resize(static_cast<std::size_t>(f.channels) * s * s);
  f.t1d.resize(static_cast<std::size_t>(f.channels) * l);

  auto put = [&](int c, const FeatureGrid& grid, const std::vector<double>& hist) {
    std::copy(grid.v.begin(), grid.v.end(), f.t2d_channel(c).begin());
    std::copy(hist.begin(), hist.end(), f.t1d_channel(c).begin());
  };

  put(0, compress_2d_area(scene.boxes, w, h, s),
      compress_1d_area(scene.boxes, w, h, l, cfg.alpha_box_area));
  put(1, compress_2d_conf(scene.boxes, w, h, s, cfg.conf_2d_alpha),
      compress_1d_conf(scene.boxes, l, cfg.alpha_box_conf));
  if (cfg.two_stage) {
    put(2, compress_2d_area(*scene.proposals, w, h, s),
        compress_1d_area(*scene.proposals, w, h, l, cfg.alpha_prop_area));
    put(3, compress_2d_conf(*scene.proposals, w, h, s, cfg.conf_2d_alpha),
        compress_1d_conf(*scene.proposals, l, cfg.alpha_prop_conf));
  }
  return f;
}

void dump_features(const CompressedFeatures& f,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (int c = 0; c < f.channels; ++c) {
    const std::string name(CompressedFeatures::kChannelOrder[c]);
    {
      std::FILE* out =
          std::fopen((dir / ("t2d_" + name + ".csv")).c_str(), "w");
      if (!out) throw std::runtime_error("cannot write feature dump in " +
                                         dir.string());
      const auto plane = f.t2d_channel(c);
      for (int iy = 0; iy < f.grid_size; ++iy)
        write_csv_row(out, plane.subspan(
                               static_cast<std::size_t>(iy) * f.grid_size,
                               f.grid_size));
      std::fclose(out);
    }
    {
      std::FILE* out =
          std::fopen((dir / ("t1d_" + name + ".csv")).c_str(), "w");
      if (!out) throw std::runtime_error("cannot write feature dump in " +
                                         dir.string());
      write_csv_row(out, f.t1d_channel(c));
      std::fclose(out);
    }
  }
}

void write_features(const CompressedFeatures& f,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write feature file: " + path.string());
  const std::uint32_t header[3] = {static_cast<std::uint32_t>(f.channels),
                                   static_cast<std::uint32_t>(f.grid_size),
                                   static_cast<std::uint32_t>(f.hist_len)};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(f.t2d.data()),
            static_cast<std::streamsize>(f.t2d.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(f.t1d.data()),
            static_cast<std::streamsize>(f.t1d.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CompressedFeatures read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read feature file: " + path.string());
  std::uint32_t header[3];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in) throw std::runtime_error("truncated feature file: " + path.string());
  CompressedFeatures f;
  f.channels = static_cast<int>(header[0]);
  f.grid_size = static_cast<int>(header[1]);
  f.hist_len = static_cast<int>(header[2]);
  f.t2d.resize(static_cast<std::size_t>(f.channels) * f.grid_size * f.grid_size);
  f.t1d.resize(static_cast<std::size_t>(f.channels) * f.hist_len);
  in.read(reinterpret_cast<char*>(f.t2d.data()),
          static_cast<std::streamsize>(f.t2d.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(f.t1d.data()),
          static_cast<std::streamsize>(f.t1d.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated feature file: " + path.string());
  return f;
}

}  // namespace crowdhat
