// SPDX-License-Identifier: Apache-2.0
// OpenMP kernels. Loops are reordered for locality and the outermost
// independent dimension is split across threads; reductions never are.
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "genop/interp/kernels.hpp"
#include "kernel_util.hpp"

namespace genop::interp {

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

using planc::OpKind;

namespace {

// Below this many multiply-adds the fork/join costs more than it saves.
constexpr std::int64_t kParallelWork = 1 << 14;

void matmul_into(std::span<const float> av, std::span<const float> bv, std::int64_t m,
                 std::int64_t k, std::int64_t n, std::vector<float>& c, bool fuse_relu) {
  // i-t-j order: each c[i,j] still accumulates t = 0, 1, ... in sequence.
#pragma omp parallel for schedule(static) if (m * k * n >= kParallelWork && m > 1)
  for (std::int64_t i = 0; i < m; ++i) {
    float* row = c.data() + i * n;
    for (std::int64_t j = 0; j < n; ++j) row[j] = 0.0f;
    for (std::int64_t t = 0; t < k; ++t) {
      const float a_it = av[i * k + t];
      const float* brow = bv.data() + t * n;
      for (std::int64_t j = 0; j < n; ++j) row[j] += a_it * brow[j];
    }
    if (fuse_relu) {
      for (std::int64_t j = 0; j < n; ++j) row[j] = detail::relu_value(row[j]);
    }
  }
}

Tensor matmul_impl(const Tensor& a, const Tensor& b, bool fuse_relu) {
  TensorSpec out = detail::checked_output(OpKind::kMatMul, {}, {&a, &b});
  const std::int64_t m = out.shape[0], n = out.shape[1], k = b.shape()[0];
  std::vector<float> c(static_cast<std::size_t>(m * n));
  matmul_into(a.values<float>(), b.values<float>(), m, k, n, c, fuse_relu);
  return Tensor::from_values(out.shape, c);
}

Tensor conv2d_impl(const Tensor& x, const Tensor& k, int stride, int pad, bool fuse_relu) {
  planc::OpAttrs attrs = detail::window_attrs(0, stride, pad);
  TensorSpec out = detail::checked_output(OpKind::kConv2D, attrs, {&x, &k});
  auto xv = x.values<float>();
  auto kv = k.values<float>();
  const std::int64_t batch = x.shape()[0], channels = x.shape()[1];
  const std::int64_t height = x.shape()[2], width = x.shape()[3];
  const std::int64_t out_channels = k.shape()[0], kh = k.shape()[2], kw = k.shape()[3];
  const std::int64_t oh = out.shape[2], ow = out.shape[3];
  const std::int64_t planes = batch * out_channels;
  const std::int64_t work = planes * oh * ow * channels * kh * kw;
  std::vector<float> y(static_cast<std::size_t>(num_elements(out.shape)), 0.0f);

  // One output plane per iteration. Taps are visited in (c, ky, kx) order
  // and the whole plane is updated per tap, which keeps each element's
  // accumulation sequence identical to the serial kernel.
#pragma omp parallel for schedule(static) if (work >= kParallelWork && planes > 1)
  for (std::int64_t p = 0; p < planes; ++p) {
    const std::int64_t n = p / out_channels, o = p % out_channels;
    float* plane = y.data() + p * oh * ow;
    for (std::int64_t c = 0; c < channels; ++c) {
      const float* src = xv.data() + (n * channels + c) * height * width;
      const float* wk = kv.data() + (o * channels + c) * kh * kw;
      for (std::int64_t ky = 0; ky < kh; ++ky) {
        for (std::int64_t kx = 0; kx < kw; ++kx) {
          const float w = wk[ky * kw + kx];
          for (std::int64_t oy = 0; oy < oh; ++oy) {
            const std::int64_t iy = oy * stride - pad + ky;
            if (iy < 0 || iy >= height) continue;
            const float* srow = src + iy * width;
            float* drow = plane + oy * ow;
            for (std::int64_t ox = 0; ox < ow; ++ox) {
              const std::int64_t ix = ox * stride - pad + kx;
              if (ix < 0 || ix >= width) continue;
              drow[ox] += srow[ix] * w;
            }
          }
        }
      }
    }
    if (fuse_relu) {
      for (std::int64_t i = 0; i < oh * ow; ++i) plane[i] = detail::relu_value(plane[i]);
    }
  }
  return Tensor::from_values(out.shape, y);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) { return matmul_impl(a, b, false); }
Tensor fused_matmul_relu(const Tensor& a, const Tensor& b) { return matmul_impl(a, b, true); }

Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad) {
  return conv2d_impl(x, k, stride, pad, false);
}
Tensor fused_conv2d_relu(const Tensor& x, const Tensor& k, int stride, int pad) {
  return conv2d_impl(x, k, stride, pad, true);
}

Tensor relu(const Tensor& x) {
  TensorSpec out = detail::checked_output(OpKind::kReLU, {}, {&x});
  auto xv = x.values<float>();
  const auto size = static_cast<std::int64_t>(xv.size());
  std::vector<float> y(xv.size());
#pragma omp parallel for schedule(static) if (size >= kParallelWork)
  for (std::int64_t i = 0; i < size; ++i) y[i] = detail::relu_value(xv[i]);
  return Tensor::from_values(out.shape, y);
}

Tensor add(const Tensor& a, const Tensor& b) {
  TensorSpec out = detail::checked_output(OpKind::kAdd, {}, {&a, &b});
  auto av = a.values<float>();
  auto bv = b.values<float>();
  const auto size = static_cast<std::int64_t>(av.size());
  std::vector<float> y(av.size());
#pragma omp parallel for schedule(static) if (size >= kParallelWork)
  for (std::int64_t i = 0; i < size; ++i) y[i] = av[i] + bv[i];
  return Tensor::from_values(out.shape, y);
}

Tensor maxpool2d(const Tensor& x, int kernel, int stride, int pad) {
  planc::OpAttrs attrs = detail::window_attrs(kernel, stride, pad);
  TensorSpec out = detail::checked_output(OpKind::kMaxPool2D, attrs, {&x});
  auto xv = x.values<float>();
  const std::int64_t planes = x.shape()[0] * x.shape()[1];
  const std::int64_t height = x.shape()[2], width = x.shape()[3];
  const std::int64_t oh = out.shape[2], ow = out.shape[3];
  std::vector<float> y(static_cast<std::size_t>(planes * oh * ow),
                       -std::numeric_limits<float>::infinity());
  const std::int64_t work = planes * oh * ow * kernel * kernel;
#pragma omp parallel for schedule(static) if (work >= kParallelWork && planes > 1)
  for (std::int64_t p = 0; p < planes; ++p) {
    const float* src = xv.data() + p * height * width;
    float* dst = y.data() + p * oh * ow;
    for (std::int64_t oy = 0; oy < oh; ++oy) {
      const std::int64_t y0 = std::max<std::int64_t>(0, oy * stride - pad);
      const std::int64_t y1 = std::min<std::int64_t>(height, oy * stride - pad + kernel);
      for (std::int64_t ox = 0; ox < ow; ++ox) {
        const std::int64_t x0 = std::max<std::int64_t>(0, ox * stride - pad);
        const std::int64_t x1 = std::min<std::int64_t>(width, ox * stride - pad + kernel);
        float best = dst[oy * ow + ox];
        for (std::int64_t iy = y0; iy < y1; ++iy) {
          const float* row = src + iy * width;
          for (std::int64_t ix = x0; ix < x1; ++ix) {
            if (row[ix] > best) best = row[ix];
          }
        }
        dst[oy * ow + ox] = best;
      }
    }
  }
  return Tensor::from_values(out.shape, y);
}

Tensor global_avg_pool(const Tensor& x) {
  TensorSpec out = detail::checked_output(OpKind::kGlobalAvgPool, {}, {&x});
  auto xv = x.values<float>();
  const std::int64_t planes = x.shape()[0] * x.shape()[1];
  const std::int64_t area = x.shape()[2] * x.shape()[3];
  std::vector<float> y(static_cast<std::size_t>(planes));
#pragma omp parallel for schedule(static) if (planes * area >= kParallelWork && planes > 1)
  for (std::int64_t p = 0; p < planes; ++p) {
    const float* src = xv.data() + p * area;
    float sum = 0.0f;
    for (std::int64_t i = 0; i < area; ++i) sum += src[i];
    y[p] = sum / static_cast<float>(area);
  }
  return Tensor::from_values(out.shape, y);
}

Tensor softmax(const Tensor& x, int axis) {
  planc::OpAttrs attrs;
  attrs.axis = axis;
  TensorSpec out = detail::checked_output(OpKind::kSoftmax, attrs, {&x});
  const auto& shape = x.shape();
  const int ax = detail::normalize_axis(axis, shape.size());
  std::int64_t outer = 1, inner = 1;
  for (int i = 0; i < ax; ++i) outer *= shape[i];
  for (std::size_t i = ax + 1; i < shape.size(); ++i) inner *= shape[i];
  const std::int64_t dim = shape[ax];
  const std::int64_t lanes = outer * inner;
  auto xv = x.values<float>();
  std::vector<float> y(xv.size());
#pragma omp parallel for schedule(static) if (lanes * dim >= kParallelWork && lanes > 1)
  for (std::int64_t lane = 0; lane < lanes; ++lane) {
    const std::int64_t base = (lane / inner) * dim * inner + lane % inner;
    float mx = -std::numeric_limits<float>::infinity();
    for (std::int64_t j = 0; j < dim; ++j) {
      const float v = xv[base + j * inner];
      if (v > mx) mx = v;
    }
    float sum = 0.0f;
    for (std::int64_t j = 0; j < dim; ++j) {
      const float e = std::exp(xv[base + j * inner] - mx);
      y[base + j * inner] = e;
      sum += e;
    }
    for (std::int64_t j = 0; j < dim; ++j) y[base + j * inner] /= sum;
  }
  return Tensor::from_values(out.shape, y);
}

Tensor argmax_top1(const Tensor& x) {
  TensorSpec out = detail::checked_output(OpKind::kArgMaxTop1, {}, {&x});
  auto xv = x.values<float>();
  const std::int64_t last = x.shape().back();
  const std::int64_t rows = static_cast<std::int64_t>(xv.size()) / last;
  std::vector<std::int64_t> y(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(static) if (rows * last >= kParallelWork && rows > 1)
  for (std::int64_t r = 0; r < rows; ++r) {
    const float* row = xv.data() + r * last;
    std::int64_t best = 0;
    for (std::int64_t j = 1; j < last; ++j) {
      if (row[j] > row[best]) best = j;
    }
    y[r] = best;
  }
  return Tensor::from_values(out.shape, y);
}

}  // namespace omp
}  // namespace genop::interp
