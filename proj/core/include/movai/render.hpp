#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "movai/scene_graph.hpp"
#include "movai/video.hpp"

namespace movai {

inline constexpr double kBackground = 0.15;

/// Hard-edged rasterization of an annotated graph. Pixel (y, x) samples the
/// scene at ((x + 0.5) / W, (y + 0.5) / H); a circle covers samples within
/// `size` of its center, a rect those within `size` on both axes. Ground
/// entities are drawn before actors, ties by id. Throws MissingAnnotations.
VideoTensor render_scene(const SceneGraph& graph, std::size_t height, std::size_t width, std::size_t frames);

/// ".mvt": magic "MVT1", u32 n, H, W, C (little-endian), then n*H*W*C
/// little-endian float32 values frame by frame. Values are clamped to [0, 1]
/// before quantization.
std::vector<std::uint8_t> encode_video(const VideoTensor& v);
/// Throws FormatError(byte offset, reason).
VideoTensor decode_video(const std::vector<std::uint8_t>& bytes);

void write_video(const VideoTensor& v, const std::filesystem::path& path);
VideoTensor read_video(const std::filesystem::path& path);

/// One binary P6 file per frame, frame_0000.ppm, ..., bytes = floor(255 v + 0.5).
std::vector<std::filesystem::path> export_frames(const VideoTensor& v, const std::filesystem::path& dir);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace movai
