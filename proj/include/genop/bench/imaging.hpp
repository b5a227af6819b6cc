// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "genop/bench/scenario.hpp"
#include "genop/core/tensor.hpp"

namespace genop::bench {

// Interleaved RGB, row-major (HWC), 8 bits per channel.
struct RawFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual RawFrame next() = 0;
};

// Frame i depends only on (seed, i, width, height).
class SyntheticFrameSource : public FrameSource {
 public:
  SyntheticFrameSource(std::uint64_t seed, int width, int height);
  RawFrame next() override;

 private:
  std::uint64_t seed_;
  int width_;
  int height_;
  std::uint64_t index_ = 0;
};

// Cycles through the `*.rgb` files of a directory in name order. Each file
// must hold exactly width * height * 3 bytes (INVALID_SHAPE otherwise);
// an empty or missing directory is BACKEND_FAILURE.
class DirectoryFrameSource : public FrameSource {
 public:
  DirectoryFrameSource(const std::string& directory, int width, int height);
  RawFrame next() override;
  std::size_t file_count() const { return files_.size(); }

 private:
  std::vector<std::string> files_;
  int width_;
  int height_;
  std::size_t index_ = 0;
};

std::unique_ptr<FrameSource> make_frame_source(const FrameSourceSpec& spec);

// Bilinear resize with aligned corners followed by per-channel
// normalization ((v / 255 - mean) / std), producing planar CHW floats.
//
// For output row oy the source coordinate is sy = oy * (in_h - 1) / (out_h - 1)
// in double precision (0 when out_h == 1); y0 = floor(sy),
// y1 = min(y0 + 1, in_h - 1), wy = float(sy - y0). Columns likewise. The
// interpolated value is accumulated in float in the fixed order
// (1-wy)(1-wx)*p00 + (1-wy)wx*p01 + wy(1-wx)*p10 + wy*wx*p11.
std::vector<float> preprocess_frame(const RawFrame& frame, int out_h, int out_w,
                                    const std::array<float, 3>& mean,
                                    const std::array<float, 3>& stddev);

// Task-specific reduction of the model outputs to a published record.
// classify/video: argmax of the class vector; segment: per-pixel argmax over
// the channel axis (lowest index wins ties), summarized by its digest.
std::string postprocess(TaskKind task, const std::vector<Tensor>& outputs);

// Per-pixel channel argmax of an f32 [1, C, H, W] tensor, as a row-major
// H x W label map.
std::vector<std::uint8_t> segmentation_mask(const Tensor& logits);

}  // namespace genop::bench
