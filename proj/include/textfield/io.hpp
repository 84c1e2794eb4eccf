#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "textfield/field.hpp"
#include "textfield/geometry.hpp"
#include "textfield/grid.hpp"
#include "textfield/synth.hpp"

namespace textfield::io {

// Annotation text: one polygon per line as "x1,y1,...,xn,yn" (integers),
// '#' starts a comment line. A "# size W H" comment records the image size.

struct Annotation {
  std::vector<Polygon> polygons;
  std::optional<std::pair<int, int>> size;
};

Annotation parse_annotation(std::istream& in, const std::string& origin = "<stream>");
Annotation read_annotation(const std::filesystem::path& path);

/// Builds a scene; the size comes from the file, else from `fallback`.
PolygonScene read_scene(const std::filesystem::path& path,
                        std::optional<std::pair<int, int>> fallback = {});

/// Writes the scene with a size comment. Vertices must be integral.
void write_annotation(std::ostream& out, const PolygonScene& scene);
void write_annotation(const std::filesystem::path& path, const PolygonScene& scene);
/// Writes bare polygons, without a size comment.
void write_polygons(std::ostream& out, const std::vector<Polygon>& polygons);

// Binary PGM (P5). 8-bit masks use 0/255; label maps use 16-bit big-endian
// samples with maxval 65535.

void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask read_mask_pgm(const std::filesystem::path& path);
void write_labels_pgm(const std::filesystem::path& path, const InstanceMap& labels);
/// Accepts 8-bit or 16-bit PGM; sample values become labels.
InstanceMap read_labels_pgm(const std::filesystem::path& path);

// DFF1: "DFF1", u32 width, u32 height, float32 vx[w*h], float32 vy[w*h],
// all little-endian, row-major.

void write_dff(std::ostream& out, const DirectionField& field);
void write_dff(const std::filesystem::path& path, const DirectionField& field);
DirectionField read_dff(std::istream& in, const std::string& origin = "<stream>");
DirectionField read_dff(const std::filesystem::path& path);

nlohmann::json to_json(const SynthSpec& spec);
/// Missing keys keep their defaults; unknown keys are rejected.
SynthSpec synth_spec_from_json(const nlohmann::json& doc);

}  // namespace textfield::io
