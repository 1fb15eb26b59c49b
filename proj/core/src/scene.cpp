#include "crowdhat/scene.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace crowdhat {

using nlohmann::json;

namespace {

double clamp_coord(double v, double lo, double hi, LoadStats* stats) {
  if (v < lo || v > hi) {
    if (stats) ++stats->clamped_coordinates;
    return std::clamp(v, lo, hi);
  }
  return v;
}

std::vector<Detection> parse_detections(const json& arr, double w, double h,
                                        LoadStats* stats) {
  std::vector<Detection> out;
  out.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 5)
      throw std::runtime_error("detection entry is not a 5-element array");
    Detection d{e[0].get<double>(), e[1].get<double>(), e[2].get<double>(),
                e[3].get<double>(), e[4].get<double>()};
    if (!(d.w > 0.0) || !(d.h > 0.0))
      throw std::runtime_error("detection has non-positive size");
    d.cx = clamp_coord(d.cx, 0.0, w, stats);
    d.cy = clamp_coord(d.cy, 0.0, h, stats);
    out.push_back(d);
  }
  return out;
}

json detections_to_json(const std::vector<Detection>& dets) {
  json arr = json::array();
  for (const auto& d : dets) arr.push_back({d.cx, d.cy, d.w, d.h, d.score});
  return arr;
}

}  // namespace

std::vector<SceneRecord> load_scenes(const std::filesystem::path& path,
                                     LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file: " + path.string());

  std::vector<SceneRecord> scenes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      SceneRecord s;
      s.id = j.at("id").get<std::string>();
      s.width = j.at("width").get<int>();
      s.height = j.at("height").get<int>();
      if (s.width <= 0 || s.height <= 0)
        throw std::runtime_error("non-positive image dimensions");
      const double w = s.width, h = s.height;
      for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2)
          throw std::runtime_error("point entry is not an [x,y] pair");
        s.points.push_back(Point{clamp_coord(p[0].get<double>(), 0.0, w, stats),
                                 clamp_coord(p[1].get<double>(), 0.0, h, stats)});
      }
      s.boxes = parse_detections(j.at("boxes"), w, h, stats);
      if (j.contains("proposals") && !j.at("proposals").is_null())
        s.proposals = parse_detections(j.at("proposals"), w, h, stats);
      scenes.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed scene line: " + e.what());
    }
  }
  return scenes;
}

void save_scenes(const std::vector<SceneRecord>& scenes,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open scene file for writing: " +
                             path.string());
  for (const auto& s : scenes) {
    json j;
    j["id"] = s.id;
    j["width"] = s.width;
    j["height"] = s.height;
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({p.x, p.y});
    j["points"] = std::move(pts);
    j["boxes"] = detections_to_json(s.boxes);
    j["proposals"] = s.proposals ? detections_to_json(*s.proposals) : json();
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace crowdhat
