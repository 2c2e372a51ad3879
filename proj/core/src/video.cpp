#include "movai/video.hpp"

#include <algorithm>
#include <cmath>

#include "movai/error.hpp"

namespace movai {

VideoTensor::VideoTensor(std::size_t frames, std::size_t height, std::size_t width, std::size_t channels,
                         double fill)
    : n_(frames), h_(height), w_(width), c_(channels), data_(frames * height * width * channels, fill) {
  if (frames == 0 || height == 0 || width == 0 || channels == 0) throw ShapeMismatch("video dimensions must be >= 1");
}

void clamp01(VideoTensor& v) {
  for (double& x : v.values()) x = std::isnan(x) ? 0.0 : std::clamp(x, 0.0, 1.0);
}

VideoTensor permute_frames(const VideoTensor& v, const std::vector<std::size_t>& order) {
  if (order.size() != v.frames()) throw ShapeMismatch("frame permutation length differs from frame count");
  VideoTensor out = v;
  const std::size_t fs = v.frame_size();
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (order[t] >= v.frames()) throw ShapeMismatch("frame index out of range");
    std::copy_n(v.values().begin() + static_cast<std::ptrdiff_t>(order[t] * fs), fs,
                out.values().begin() + static_cast<std::ptrdiff_t>(t * fs));
  }
  return out;
}

}  // namespace movai
