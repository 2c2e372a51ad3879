#include "movai/render.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "movai/error.hpp"

namespace movai {

VideoTensor render_scene(const SceneGraph& graph, std::size_t height, std::size_t width, std::size_t frames) {
  std::vector<const Entity*> order;
  for (const auto& e : graph.objects) {
    const auto* a = graph.annotation_for(e.id);
    if (!a) throw MissingAnnotations("entity " + std::to_string(e.id) + " has no annotation");
    if (a->positions.size() != frames) {
      throw MissingAnnotations("entity " + std::to_string(e.id) + " annotated for " +
                               std::to_string(a->positions.size()) + " frames, need " + std::to_string(frames));
    }
    order.push_back(&e);
  }
  std::stable_sort(order.begin(), order.end(), [](const Entity* a, const Entity* b) {
    if (a->role != b->role) return a->role == Role::Ground;
    return a->id < b->id;
  });

  VideoTensor v(frames, height, width, 3, kBackground);
  const double hf = static_cast<double>(height), wf = static_cast<double>(width);
  for (std::size_t t = 0; t < frames; ++t) {
    for (const Entity* e : order) {
      const Point p = graph.annotation_for(e->id)->positions[t];
      const double r = e->size;
      // Only scan the bounding box.
      const auto y0 = static_cast<std::size_t>(std::max(0.0, std::floor((p.y - r) * hf)));
      const auto y1 = static_cast<std::size_t>(std::clamp(std::ceil((p.y + r) * hf), 0.0, hf));
      const auto x0 = static_cast<std::size_t>(std::max(0.0, std::floor((p.x - r) * wf)));
      const auto x1 = static_cast<std::size_t>(std::clamp(std::ceil((p.x + r) * wf), 0.0, wf));
      for (std::size_t y = y0; y < y1; ++y) {
        const double sy = (static_cast<double>(y) + 0.5) / hf - p.y;
        for (std::size_t x = x0; x < x1; ++x) {
          const double sx = (static_cast<double>(x) + 0.5) / wf - p.x;
          const bool inside = e->shape == Shape::Circle ? sx * sx + sy * sy <= r * r
                                                        : std::abs(sx) <= r && std::abs(sy) <= r;
          if (!inside) continue;
          for (std::size_t c = 0; c < 3; ++c) v.at(t, y, x, c) = e->color[c];
        }
      }
    }
  }
  return v;
}

namespace {

constexpr std::size_t kHeaderBytes = 20;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_video(const VideoTensor& v) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * v.size());
  out.insert(out.end(), {'M', 'V', 'T', '1'});
  put_u32(out, static_cast<std::uint32_t>(v.frames()));
  put_u32(out, static_cast<std::uint32_t>(v.height()));
  put_u32(out, static_cast<std::uint32_t>(v.width()));
  put_u32(out, static_cast<std::uint32_t>(v.channels()));
  for (double x : v.values()) {
    const float f = static_cast<float>(std::isnan(x) ? 0.0 : std::clamp(x, 0.0, 1.0));
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

VideoTensor decode_video(const std::vector<std::uint8_t>& in) {
  if (in.size() < 4) throw FormatError(in.size(), "truncated magic");
  if (std::memcmp(in.data(), "MVT1", 4) != 0) throw FormatError(0, "magic");
  std::uint32_t dims[4];
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t at = 4 + 4 * i;
    if (in.size() < at + 4) throw FormatError(in.size(), "truncated header");
    dims[i] = get_u32(in, at);
    if (dims[i] == 0) throw FormatError(at, "zero dimension");
  }
  if (dims[3] != 3) throw FormatError(16, "channel count must be 3");
  const std::uint64_t count = std::uint64_t{dims[0]} * dims[1] * dims[2] * dims[3];
  const std::uint64_t expected = kHeaderBytes + 4 * count;
  if (in.size() < expected) throw FormatError(in.size(), "truncated payload");
  if (in.size() > expected) throw FormatError(expected, "trailing bytes");
  VideoTensor v(dims[0], dims[1], dims[2], dims[3]);
  for (std::size_t i = 0; i < count; ++i) {
    const float f = std::bit_cast<float>(get_u32(in, kHeaderBytes + 4 * i));
    if (!(f >= 0.0f && f <= 1.0f)) throw FormatError(kHeaderBytes + 4 * i, "value outside [0,1]");
    v[i] = f;
  }
  return v;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void write_video(const VideoTensor& v, const std::filesystem::path& path) { write_file(path, encode_video(v)); }

VideoTensor read_video(const std::filesystem::path& path) { return decode_video(read_file(path)); }

std::vector<std::filesystem::path> export_frames(const VideoTensor& v, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  if (v.channels() != 3) throw ShapeMismatch("PPM export needs 3 channels");
  std::vector<std::filesystem::path> paths;
  for (std::size_t t = 0; t < v.frames(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.ppm", t);
    const std::string header = "P6\n" + std::to_string(v.width()) + " " + std::to_string(v.height()) + "\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    for (std::size_t y = 0; y < v.height(); ++y)
      for (std::size_t x = 0; x < v.width(); ++x)
        for (std::size_t c = 0; c < 3; ++c) {
          const double val = std::clamp(v.at(t, y, x, c), 0.0, 1.0);
          bytes.push_back(static_cast<std::uint8_t>(std::floor(255.0 * val + 0.5)));
        }
    paths.push_back(dir / name);
    write_file(paths.back(), bytes);
  }
  return paths;
}

}  // namespace movai
