// SPDX-License-Identifier: Apache-2.0
#include "genop/bench/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "genop/core/bytes.hpp"
#include "genop/core/error.hpp"
#include "genop/interp/kernels.hpp"

namespace genop::bench {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct Taps {
  int i0, i1;
  float w;
};

std::vector<Taps> axis_taps(int in, int out) {
  std::vector<Taps> taps(static_cast<std::size_t>(out));
  for (int o = 0; o < out; ++o) {
    const double s = out > 1 ? static_cast<double>(o) * (in - 1) / (out - 1) : 0.0;
    const int i0 = std::min(static_cast<int>(std::floor(s)), in - 1);
    const int i1 = std::min(i0 + 1, in - 1);
    taps[static_cast<std::size_t>(o)] = {i0, i1, static_cast<float>(s - i0)};
  }
  return taps;
}

}  // namespace

SyntheticFrameSource::SyntheticFrameSource(std::uint64_t seed, int width, int height)
    : seed_(seed), width_(width), height_(height) {
  if (width < 1 || height < 1) throw Error(ErrorCode::kInvalidShape, "frame size must be positive");
}

RawFrame SyntheticFrameSource::next() {
  RawFrame f;
  f.width = width_;
  f.height = height_;
  f.rgb.resize(static_cast<std::size_t>(width_) * height_ * 3);
  std::uint64_t state = seed_ * 0xD1B54A32D192ED03ull + index_++;
  std::size_t i = 0;
  const std::size_t n = f.rgb.size();
  while (i < n) {
    std::uint64_t r = splitmix64(state);
    for (int b = 0; b < 8 && i < n; ++b, ++i) {
      f.rgb[i] = static_cast<std::uint8_t>(r);
      r >>= 8;
    }
  }
  return f;
}

DirectoryFrameSource::DirectoryFrameSource(const std::string& directory, int width, int height)
    : width_(width), height_(height) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw Error(ErrorCode::kBackendFailure, "frame directory not found: " + directory);
  }
  for (const auto& entry : fs::directory_iterator(directory, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rgb") {
      files_.push_back(entry.path().string());
    }
  }
  std::sort(files_.begin(), files_.end());
  if (files_.empty()) throw Error(ErrorCode::kBackendFailure, "no .rgb frames in " + directory);
}

RawFrame DirectoryFrameSource::next() {
  const std::string& path = files_[index_ % files_.size()];
  ++index_;
  Bytes data = read_file(path);
  const std::size_t expected = static_cast<std::size_t>(width_) * height_ * 3;
  if (data.size() != expected) {
    throw Error(ErrorCode::kInvalidShape, path + ": expected " + std::to_string(expected) +
                                              " bytes, found " + std::to_string(data.size()));
  }
  return RawFrame{width_, height_, std::move(data)};
}

std::unique_ptr<FrameSource> make_frame_source(const FrameSourceSpec& spec) {
  if (spec.directory.empty()) {
    return std::make_unique<SyntheticFrameSource>(spec.seed, spec.width, spec.height);
  }
  return std::make_unique<DirectoryFrameSource>(spec.directory, spec.width, spec.height);
}

std::vector<float> preprocess_frame(const RawFrame& frame, int out_h, int out_w,
                                    const std::array<float, 3>& mean,
                                    const std::array<float, 3>& stddev) {
  if (out_h < 1 || out_w < 1 || frame.width < 1 || frame.height < 1 ||
      frame.rgb.size() != static_cast<std::size_t>(frame.width) * frame.height * 3) {
    throw Error(ErrorCode::kInvalidShape, "preprocess: bad frame or target size");
  }
  const auto ys = axis_taps(frame.height, out_h);
  const auto xs = axis_taps(frame.width, out_w);
  const std::size_t plane = static_cast<std::size_t>(out_h) * out_w;
  std::vector<float> out(plane * 3);
  const std::size_t stride = static_cast<std::size_t>(frame.width) * 3;
  for (int c = 0; c < 3; ++c) {
    for (int oy = 0; oy < out_h; ++oy) {
      const Taps ty = ys[static_cast<std::size_t>(oy)];
      const std::uint8_t* r0 = frame.rgb.data() + static_cast<std::size_t>(ty.i0) * stride;
      const std::uint8_t* r1 = frame.rgb.data() + static_cast<std::size_t>(ty.i1) * stride;
      for (int ox = 0; ox < out_w; ++ox) {
        const Taps tx = xs[static_cast<std::size_t>(ox)];
        const float p00 = r0[tx.i0 * 3 + c];
        const float p01 = r0[tx.i1 * 3 + c];
        const float p10 = r1[tx.i0 * 3 + c];
        const float p11 = r1[tx.i1 * 3 + c];
        float v = 0.0f;
        v += ((1.0f - ty.w) * (1.0f - tx.w)) * p00;
        v += ((1.0f - ty.w) * tx.w) * p01;
        v += (ty.w * (1.0f - tx.w)) * p10;
        v += (ty.w * tx.w) * p11;
        out[static_cast<std::size_t>(c) * plane + static_cast<std::size_t>(oy) * out_w + ox] =
            (v / 255.0f - mean[c]) / stddev[c];
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> segmentation_mask(const Tensor& logits) {
  const auto& shape = logits.shape();
  if (shape.size() != 4 || shape[0] != 1 || shape[1] > 256) {
    throw Error(ErrorCode::kInvalidShape, "segmentation output must be [1,C,H,W] with C <= 256");
  }
  const auto v = logits.values<float>();
  const std::size_t channels = static_cast<std::size_t>(shape[1]);
  const std::size_t pixels = static_cast<std::size_t>(shape[2] * shape[3]);
  std::vector<std::uint8_t> mask(pixels, 0);
  for (std::size_t p = 0; p < pixels; ++p) {
    float best = v[p];
    for (std::size_t c = 1; c < channels; ++c) {
      const float x = v[c * pixels + p];
      if (x > best) {
        best = x;
        mask[p] = static_cast<std::uint8_t>(c);
      }
    }
  }
  return mask;
}

std::string postprocess(TaskKind task, const std::vector<Tensor>& outputs) {
  if (outputs.empty()) throw Error(ErrorCode::kInvalidShape, "postprocess: no outputs");
  if (task == TaskKind::kSegment) {
    const auto mask = segmentation_mask(outputs[0]);
    const Digest d = sha256(ByteView(mask.data(), mask.size()));
    return "mask=" + to_hex(ByteView(d.data(), 8));
  }
  const Tensor top = interp::serial::argmax_top1(outputs[0]);
  const auto idx = top.values<std::int64_t>();
  return "class=" + std::to_string(idx.empty() ? -1 : idx[0]);
}

}  // namespace genop::bench
