// SPDX-License-Identifier: Apache-2.0
// Serial reference kernels. Straight loops, one output element at a time.
#include <cmath>
#include <limits>
#include <vector>

#include "genop/interp/kernels.hpp"
#include "kernel_util.hpp"

namespace genop::interp::serial {

using planc::OpKind;

Tensor matmul(const Tensor& a, const Tensor& b) {
  TensorSpec out = detail::checked_output(OpKind::kMatMul, {}, {&a, &b});
  auto av = a.values<float>();
  auto bv = b.values<float>();
  const std::int64_t m = out.shape[0], n = out.shape[1], k = b.shape()[0];
  std::vector<float> c(static_cast<std::size_t>(m * n));
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      float acc = 0.0f;
      for (std::int64_t t = 0; t < k; ++t) acc += av[i * k + t] * bv[t * n + j];
      c[i * n + j] = acc;
    }
  }
  return Tensor::from_values(out.shape, c);
}

Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad) {
  planc::OpAttrs attrs = detail::window_attrs(0, stride, pad);
  TensorSpec out = detail::checked_output(OpKind::kConv2D, attrs, {&x, &k});
  auto xv = x.values<float>();
  auto kv = k.values<float>();
  const std::int64_t batch = x.shape()[0], channels = x.shape()[1];
  const std::int64_t height = x.shape()[2], width = x.shape()[3];
  const std::int64_t out_channels = k.shape()[0], kh = k.shape()[2], kw = k.shape()[3];
  const std::int64_t oh = out.shape[2], ow = out.shape[3];
  std::vector<float> y(static_cast<std::size_t>(num_elements(out.shape)));
  for (std::int64_t n = 0; n < batch; ++n) {
    for (std::int64_t o = 0; o < out_channels; ++o) {
      for (std::int64_t oy = 0; oy < oh; ++oy) {
        for (std::int64_t ox = 0; ox < ow; ++ox) {
          float acc = 0.0f;
          for (std::int64_t c = 0; c < channels; ++c) {
            for (std::int64_t ky = 0; ky < kh; ++ky) {
              const std::int64_t iy = oy * stride - pad + ky;
              if (iy < 0 || iy >= height) continue;
              for (std::int64_t kx = 0; kx < kw; ++kx) {
                const std::int64_t ix = ox * stride - pad + kx;
                if (ix < 0 || ix >= width) continue;
                acc += xv[((n * channels + c) * height + iy) * width + ix] *
                       kv[((o * channels + c) * kh + ky) * kw + kx];
              }
            }
          }
          y[((n * out_channels + o) * oh + oy) * ow + ox] = acc;
        }
      }
    }
  }
  return Tensor::from_values(out.shape, y);
}

Tensor relu(const Tensor& x) {
  TensorSpec out = detail::checked_output(OpKind::kReLU, {}, {&x});
  auto xv = x.values<float>();
  std::vector<float> y(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) y[i] = detail::relu_value(xv[i]);
  return Tensor::from_values(out.shape, y);
}

Tensor add(const Tensor& a, const Tensor& b) {
  TensorSpec out = detail::checked_output(OpKind::kAdd, {}, {&a, &b});
  auto av = a.values<float>();
  auto bv = b.values<float>();
  std::vector<float> y(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) y[i] = av[i] + bv[i];
  return Tensor::from_values(out.shape, y);
}

Tensor maxpool2d(const Tensor& x, int kernel, int stride, int pad) {
  planc::OpAttrs attrs = detail::window_attrs(kernel, stride, pad);
  TensorSpec out = detail::checked_output(OpKind::kMaxPool2D, attrs, {&x});
  auto xv = x.values<float>();
  const std::int64_t planes = x.shape()[0] * x.shape()[1];
  const std::int64_t height = x.shape()[2], width = x.shape()[3];
  const std::int64_t oh = out.shape[2], ow = out.shape[3];
  std::vector<float> y(static_cast<std::size_t>(planes * oh * ow));
  for (std::int64_t p = 0; p < planes; ++p) {
    for (std::int64_t oy = 0; oy < oh; ++oy) {
      for (std::int64_t ox = 0; ox < ow; ++ox) {
        float best = -std::numeric_limits<float>::infinity();
        for (std::int64_t ky = 0; ky < kernel; ++ky) {
          const std::int64_t iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= height) continue;
          for (std::int64_t kx = 0; kx < kernel; ++kx) {
            const std::int64_t ix = ox * stride - pad + kx;
            if (ix < 0 || ix >= width) continue;
            const float v = xv[(p * height + iy) * width + ix];
            if (v > best) best = v;
          }
        }
        y[(p * oh + oy) * ow + ox] = best;
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
  for (std::int64_t p = 0; p < planes; ++p) {
    float sum = 0.0f;
    for (std::int64_t i = 0; i < area; ++i) sum += xv[p * area + i];
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
  auto xv = x.values<float>();
  std::vector<float> y(xv.size());
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t in = 0; in < inner; ++in) {
      const std::int64_t base = o * dim * inner + in;
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
  }
  return Tensor::from_values(out.shape, y);
}

Tensor argmax_top1(const Tensor& x) {
  TensorSpec out = detail::checked_output(OpKind::kArgMaxTop1, {}, {&x});
  auto xv = x.values<float>();
  const std::int64_t last = x.shape().back();
  const std::int64_t rows = static_cast<std::int64_t>(xv.size()) / last;
  std::vector<std::int64_t> y(static_cast<std::size_t>(rows));
  for (std::int64_t r = 0; r < rows; ++r) {
    std::int64_t best = 0;
    for (std::int64_t j = 1; j < last; ++j) {
      if (xv[r * last + j] > xv[r * last + best]) best = j;
    }
    y[r] = best;
  }
  return Tensor::from_values(out.shape, y);
}

Tensor fused_conv2d_relu(const Tensor& x, const Tensor& k, int stride, int pad) {
  return relu(conv2d(x, k, stride, pad));
}

Tensor fused_matmul_relu(const Tensor& a, const Tensor& b) { return relu(matmul(a, b)); }

}  // namespace genop::interp::serial
