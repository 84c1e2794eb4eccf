#include "textfield/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace textfield::io {
namespace fs = std::filesystem;
namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long parse_int(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    throw InputError(where + ": expected integer, got '" + t + "'");
  }
  if (used != t.size() || t.empty()) {
    throw InputError(where + ": expected integer, got '" + t + "'");
  }
  return v;
}

// PGM header: magic, width, height, maxval, single whitespace byte.
struct PgmHeader {
  int width = 0, height = 0, maxval = 0;
};

PgmHeader read_pgm_header(std::istream& in, const std::string& origin) {
  auto token = [&]() {
    std::string t;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(c);
    }
    return t;
  };
  if (token() != "P5") throw InputError(origin + ": not a binary PGM (P5)");
  PgmHeader h;
  h.width = static_cast<int>(parse_int(token(), origin));
  h.height = static_cast<int>(parse_int(token(), origin));
  h.maxval = static_cast<int>(parse_int(token(), origin));
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535) {
    throw InputError(origin + ": bad PGM header");
  }
  return h;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in, const std::string& origin) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw InputError(origin + ": truncated DFF1 data");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

Annotation parse_annotation(std::istream& in, const std::string& origin) {
  Annotation ann;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::istringstream comment(t.substr(1));
      std::string key;
      int w = 0, h = 0;
      if (comment >> key && key == "size" && comment >> w >> h) {
        ann.size = {w, h};
      }
      continue;
    }
    std::vector<long> values;
    std::stringstream fields(t);
    std::string token;
    while (std::getline(fields, token, ',')) {
      values.push_back(parse_int(token, where));
    }
    if (values.size() % 2 != 0) {
      throw InputError(where + ": odd number of coordinates");
    }
    if (values.size() < 6) {
      throw InputError(where + ": polygon needs at least 3 points");
    }
    std::vector<Point> pts;
    for (std::size_t i = 0; i < values.size(); i += 2) {
      pts.push_back({static_cast<double>(values[i]),
                     static_cast<double>(values[i + 1])});
    }
    try {
      ann.polygons.emplace_back(std::move(pts));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return ann;
}

Annotation read_annotation(const fs::path& path) {
  auto in = open_in(path);
  return parse_annotation(in, path.string());
}

PolygonScene read_scene(const fs::path& path,
                        std::optional<std::pair<int, int>> fallback) {
  Annotation ann = read_annotation(path);
  const auto size = ann.size ? ann.size : fallback;
  if (!size) {
    throw InputError(path.string() +
                     ": image size unknown (no '# size W H' comment)");
  }
  try {
    return PolygonScene(size->first, size->second, std::move(ann.polygons));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_polygons(std::ostream& out, const std::vector<Polygon>& polygons) {
  for (const auto& polygon : polygons) {
    bool first = true;
    for (const auto& p : polygon.points()) {
      if (p.x != std::round(p.x) || p.y != std::round(p.y)) {
        throw InputError("annotation vertices must be integers");
      }
      if (!first) out << ',';
      out << static_cast<long>(p.x) << ',' << static_cast<long>(p.y);
      first = false;
    }
    out << '\n';
  }
}

void write_annotation(std::ostream& out, const PolygonScene& scene) {
  out << "# size " << scene.width() << ' ' << scene.height() << '\n';
  write_polygons(out, scene.instances());
}

void write_annotation(const fs::path& path, const PolygonScene& scene) {
  auto out = open_out(path);
  write_annotation(out, scene);
}

void write_mask_pgm(const fs::path& path, const BinaryMask& mask) {
  auto out = open_out(path);
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(mask.width()));
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      row[x] = static_cast<char>(mask(x, y) ? 255 : 0);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

BinaryMask read_mask_pgm(const fs::path& path) {
  const InstanceMap values = read_labels_pgm(path);
  BinaryMask mask(values.width(), values.height());
  for (std::size_t i = 0; i < values.size(); ++i) mask[i] = values[i] != 0;
  return mask;
}

void write_labels_pgm(const fs::path& path, const InstanceMap& labels) {
  for (const auto l : labels.values()) {
    if (l < 0 || l > 65535) {
      throw InputError("label " + std::to_string(l) +
                       " does not fit a 16-bit PGM");
    }
  }
  auto out = open_out(path);
  out << "P5\n" << labels.width() << ' ' << labels.height() << "\n65535\n";
  std::vector<char> row(static_cast<std::size_t>(labels.width()) * 2);
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      const auto v = static_cast<std::uint16_t>(labels(x, y));
      row[2 * x] = static_cast<char>(v >> 8);
      row[2 * x + 1] = static_cast<char>(v & 0xff);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

InstanceMap read_labels_pgm(const fs::path& path) {
  auto in = open_in(path);
  const std::string origin = path.string();
  const PgmHeader h = read_pgm_header(in, origin);
  const int bytes = h.maxval < 256 ? 1 : 2;
  InstanceMap labels(h.width, h.height);
  std::vector<unsigned char> row(static_cast<std::size_t>(h.width) * bytes);
  for (int y = 0; y < h.height; ++y) {
    if (!in.read(reinterpret_cast<char*>(row.data()),
                 static_cast<std::streamsize>(row.size()))) {
      throw InputError(origin + ": truncated PGM data");
    }
    for (int x = 0; x < h.width; ++x) {
      labels(x, y) = bytes == 1 ? row[x] : (row[2 * x] << 8) | row[2 * x + 1];
    }
  }
  return labels;
}

void write_dff(std::ostream& out, const DirectionField& field) {
  out.write("DFF1", 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.width()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.height()));
  for (const float v : field.vx.values()) put_le<float>(out, v);
  for (const float v : field.vy.values()) put_le<float>(out, v);
}

void write_dff(const fs::path& path, const DirectionField& field) {
  auto out = open_out(path);
  write_dff(out, field);
  if (!out) throw InputError("failed writing " + path.string());
}

DirectionField read_dff(std::istream& in, const std::string& origin) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "DFF1", 4) != 0) {
    throw InputError(origin + ": missing DFF1 magic");
  }
  const auto w = get_le<std::uint32_t>(in, origin);
  const auto h = get_le<std::uint32_t>(in, origin);
  if (w > (1u << 16) || h > (1u << 16)) {
    throw InputError(origin + ": implausible field size");
  }
  DirectionField field(static_cast<int>(w), static_cast<int>(h));
  for (auto& v : field.vx.values()) v = get_le<float>(in, origin);
  for (auto& v : field.vy.values()) v = get_le<float>(in, origin);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!std::isfinite(field.vx[i]) || !std::isfinite(field.vy[i])) {
      throw InputError(origin + ": non-finite vector");
    }
  }
  return field;
}

DirectionField read_dff(const fs::path& path) {
  auto in = open_in(path);
  return read_dff(in, path.string());
}

nlohmann::json to_json(const SynthSpec& s) {
  return {
      {"seed", s.seed},
      {"width", s.width},
      {"height", s.height},
      {"count_min", s.count_min},
      {"count_max", s.count_max},
      {"shape", std::string(shape_family_name(s.shape))},
      {"stroke_min", s.stroke_min},
      {"stroke_max", s.stroke_max},
      {"length_min", s.length_min},
      {"length_max", s.length_max},
      {"min_gap", s.min_gap},
      {"margin", s.margin},
      {"min_area", s.min_area},
      {"max_attempts", s.max_attempts},
  };
}

SynthSpec synth_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("synth spec must be a JSON object");
  SynthSpec s;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "seed") s.seed = value.get<std::uint64_t>();
      else if (key == "width") s.width = value.get<int>();
      else if (key == "height") s.height = value.get<int>();
      else if (key == "count_min") s.count_min = value.get<int>();
      else if (key == "count_max") s.count_max = value.get<int>();
      else if (key == "shape") {
        const auto family = parse_shape_family(value.get<std::string>());
        if (!family) throw InputError("unknown shape '" + value.get<std::string>() + "'");
        s.shape = *family;
      }
      else if (key == "stroke_min") s.stroke_min = value.get<double>();
      else if (key == "stroke_max") s.stroke_max = value.get<double>();
      else if (key == "length_min") s.length_min = value.get<double>();
      else if (key == "length_max") s.length_max = value.get<double>();
      else if (key == "min_gap") s.min_gap = value.get<int>();
      else if (key == "margin") s.margin = value.get<int>();
      else if (key == "min_area") s.min_area = value.get<int>();
      else if (key == "max_attempts") s.max_attempts = value.get<int>();
      else throw InputError("unknown synth spec key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("synth spec: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace textfield::io
