#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "movai/scene_graph.hpp"

namespace movai {

/// n x H x W x C frame stack, row-major frame by frame, C = 3.
class VideoTensor {
 public:
  VideoTensor() = default;
  VideoTensor(std::size_t frames, std::size_t height, std::size_t width, std::size_t channels = 3,
              double fill = 0.0);

  std::size_t frames() const { return n_; }
  std::size_t height() const { return h_; }
  std::size_t width() const { return w_; }
  std::size_t channels() const { return c_; }
  std::size_t size() const { return data_.size(); }
  std::size_t frame_size() const { return h_ * w_ * c_; }

  double& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) {
    return data_[((t * h_ + y) * w_ + x) * c_ + c];
  }
  double at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const {
    return data_[((t * h_ + y) * w_ + x) * c_ + c];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  bool same_shape(const VideoTensor& o) const { return n_ == o.n_ && h_ == o.h_ && w_ == o.w_ && c_ == o.c_; }
  bool operator==(const VideoTensor&) const = default;

 private:
  std::size_t n_ = 0, h_ = 0, w_ = 0, c_ = 3;
  std::vector<double> data_;
};

/// Clamps every value into [0, 1] in place.
void clamp01(VideoTensor& v);

/// Copy with frame t of the result taken from frame order[t] of `v`.
VideoTensor permute_frames(const VideoTensor& v, const std::vector<std::size_t>& order);

}  // namespace movai
