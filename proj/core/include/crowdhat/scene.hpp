#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crowdhat/geometry.hpp"

namespace crowdhat {

/// One annotated image worth of data: ground-truth head points plus the
/// detector outputs over it. Pixel data is never stored; the toolkit
/// consumes detector outputs only.
struct SceneRecord {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<Point> points;
  std::vector<Detection> boxes;
  std::optional<std::vector<Detection>> proposals;
};

struct LoadStats {
  std::size_t clamped_coordinates = 0;
};

/// Reads a JSONL scene file, one scene object per line:
///   {"id": str, "width": int, "height": int, "points": [[x,y],...],
///    "boxes": [[cx,cy,w,h,score],...], "proposals": [...]|null}
/// Coordinates slightly out of frame are clamped and counted in `stats`;
/// a malformed line raises std::runtime_error naming the line number.
std::vector<SceneRecord> load_scenes(const std::filesystem::path& path,
                                     LoadStats* stats = nullptr);

/// Writes scenes as JSONL. save_scenes then load_scenes reproduces every
/// field bit-exactly for finite reals.
void save_scenes(const std::vector<SceneRecord>& scenes,
                 const std::filesystem::path& path);

}  // namespace crowdhat
