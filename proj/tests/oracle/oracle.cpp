// SPDX-License-Identifier: Apache-2.0
#include "oracle.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "genop/planc/parser.hpp"

namespace oracle {
namespace {

using genop::DType;

std::vector<float> f32(const Tensor& t) {
  std::vector<float> v(static_cast<std::size_t>(t.num_elements()));
  std::memcpy(v.data(), t.bytes().data(), v.size() * sizeof(float));
  return v;
}

Tensor make(const Shape& shape, const std::vector<float>& v) {
  return Tensor::from_values<float>(shape, v);
}

std::int64_t prod(const Shape& s, std::size_t from, std::size_t to) {
  std::int64_t p = 1;
  for (std::size_t i = from; i < to; ++i) p *= s[i];
  return p;
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  const auto& as = a.shape();
  const std::int64_t m = as[0];
  const std::int64_t k = prod(as, 1, as.size());
  const std::int64_t n = b.shape()[1];
  const auto av = f32(a), bv = f32(b);
  std::vector<float> out(static_cast<std::size_t>(m * n));
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      float acc = 0.0f;
      for (std::int64_t t = 0; t < k; ++t) acc = acc + av[i * k + t] * bv[t * n + j];
      out[i * n + j] = acc;
    }
  }
  return make({m, n}, out);
}

Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad) {
  const auto& xs = x.shape();
  const auto& ks = k.shape();
  const std::int64_t N = xs[0], C = xs[1], H = xs[2], W = xs[3];
  const std::int64_t O = ks[0], KH = ks[2], KW = ks[3];
  const std::int64_t OH = (H + 2 * pad - KH) / stride + 1;
  const std::int64_t OW = (W + 2 * pad - KW) / stride + 1;
  const auto xv = f32(x), kv = f32(k);
  std::vector<float> out(static_cast<std::size_t>(N * O * OH * OW));
  for (std::int64_t n = 0; n < N; ++n)
    for (std::int64_t o = 0; o < O; ++o)
      for (std::int64_t oy = 0; oy < OH; ++oy)
        for (std::int64_t ox = 0; ox < OW; ++ox) {
          float acc = 0.0f;
          for (std::int64_t c = 0; c < C; ++c)
            for (std::int64_t ky = 0; ky < KH; ++ky)
              for (std::int64_t kx = 0; kx < KW; ++kx) {
                const std::int64_t iy = oy * stride - pad + ky;
                const std::int64_t ix = ox * stride - pad + kx;
                if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
                acc = acc + xv[((n * C + c) * H + iy) * W + ix] * kv[((o * C + c) * KH + ky) * KW + kx];
              }
          out[((n * O + o) * OH + oy) * OW + ox] = acc;
        }
  return make({N, O, OH, OW}, out);
}

Tensor relu(const Tensor& x) {
  auto v = f32(x);
  for (float& e : v) {
    if (e < 0.0f) e = 0.0f;
  }
  return make(x.shape(), v);
}

Tensor add(const Tensor& a, const Tensor& b) {
  auto av = f32(a);
  const auto bv = f32(b);
  for (std::size_t i = 0; i < av.size(); ++i) av[i] = av[i] + bv[i];
  return make(a.shape(), av);
}

Tensor maxpool2d(const Tensor& x, int kernel, int stride, int pad) {
  const auto& xs = x.shape();
  const std::int64_t N = xs[0], C = xs[1], H = xs[2], W = xs[3];
  const std::int64_t OH = (H + 2 * pad - kernel) / stride + 1;
  const std::int64_t OW = (W + 2 * pad - kernel) / stride + 1;
  const auto xv = f32(x);
  std::vector<float> out(static_cast<std::size_t>(N * C * OH * OW));
  for (std::int64_t p = 0; p < N * C; ++p)
    for (std::int64_t oy = 0; oy < OH; ++oy)
      for (std::int64_t ox = 0; ox < OW; ++ox) {
        float best = -std::numeric_limits<float>::infinity();
        for (int ky = 0; ky < kernel; ++ky)
          for (int kx = 0; kx < kernel; ++kx) {
            const std::int64_t iy = oy * stride - pad + ky;
            const std::int64_t ix = ox * stride - pad + kx;
            if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
            const float v = xv[(p * H + iy) * W + ix];
            if (v > best) best = v;
          }
        out[(p * OH + oy) * OW + ox] = best;
      }
  return make({N, C, OH, OW}, out);
}

Tensor global_avg_pool(const Tensor& x) {
  const auto& xs = x.shape();
  const std::int64_t planes = xs[0] * xs[1];
  const std::int64_t area = xs[2] * xs[3];
  const auto xv = f32(x);
  std::vector<float> out(static_cast<std::size_t>(planes));
  for (std::int64_t p = 0; p < planes; ++p) {
    float acc = 0.0f;
    for (std::int64_t i = 0; i < area; ++i) acc = acc + xv[p * area + i];
    out[p] = acc / static_cast<float>(area);
  }
  return make({xs[0], xs[1], 1, 1}, out);
}

Tensor softmax(const Tensor& x, int axis) {
  const auto& s = x.shape();
  const std::size_t ax = static_cast<std::size_t>(axis < 0 ? axis + static_cast<int>(s.size()) : axis);
  const std::int64_t outer = prod(s, 0, ax), len = s[ax], inner = prod(s, ax + 1, s.size());
  auto v = f32(x);
  for (std::int64_t o = 0; o < outer; ++o)
    for (std::int64_t i = 0; i < inner; ++i) {
      auto at = [&](std::int64_t j) -> float& { return v[(o * len + j) * inner + i]; };
      float mx = at(0);
      for (std::int64_t j = 1; j < len; ++j) {
        if (at(j) > mx) mx = at(j);
      }
      float sum = 0.0f;
      for (std::int64_t j = 0; j < len; ++j) {
        at(j) = std::exp(at(j) - mx);
        sum = sum + at(j);
      }
      for (std::int64_t j = 0; j < len; ++j) at(j) = at(j) / sum;
    }
  return make(s, v);
}

Tensor argmax_top1(const Tensor& x) {
  const auto& s = x.shape();
  const std::int64_t len = s.back();
  const std::int64_t rows = prod(s, 0, s.size() - 1);
  const auto v = f32(x);
  std::vector<std::int64_t> out(static_cast<std::size_t>(rows));
  for (std::int64_t r = 0; r < rows; ++r) {
    std::int64_t best = 0;
    for (std::int64_t j = 1; j < len; ++j) {
      if (v[r * len + j] > v[r * len + best]) best = j;
    }
    out[r] = best;
  }
  Shape os(s.begin(), s.end() - 1);
  if (os.empty()) os.push_back(1);
  return Tensor::from_values<std::int64_t>(os, out);
}

std::vector<Tensor> evaluate(const genop::planc::Graph& g, std::span<const Tensor> inputs) {
  using genop::planc::OpKind;
  std::map<std::string, Tensor> memo;
  for (std::size_t i = 0; i < g.inputs.size(); ++i) memo[g.inputs[i]] = inputs[i];
  std::function<Tensor(const std::string&)> value = [&](const std::string& id) -> Tensor {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const auto& node = g.nodes.at(id);
    std::vector<Tensor> in;
    for (const auto& op : node.operands) in.push_back(value(op));
    const auto& at = node.attrs;
    Tensor r;
    switch (node.kind) {
      case OpKind::kConst: r = node.value; break;
      case OpKind::kMatMul: r = matmul(in[0], in[1]); break;
      case OpKind::kConv2D: r = conv2d(in[0], in[1], at.stride, at.pad); break;
      case OpKind::kReLU: r = relu(in[0]); break;
      case OpKind::kAdd: r = add(in[0], in[1]); break;
      case OpKind::kMaxPool2D: r = maxpool2d(in[0], at.kernel, at.stride, at.pad); break;
      case OpKind::kGlobalAvgPool: r = global_avg_pool(in[0]); break;
      case OpKind::kSoftmax: r = softmax(in[0], at.axis); break;
      case OpKind::kArgMaxTop1: r = argmax_top1(in[0]); break;
      case OpKind::kFusedConv2DReLU: r = relu(conv2d(in[0], in[1], at.stride, at.pad)); break;
      case OpKind::kFusedMatMulReLU: r = relu(matmul(in[0], in[1])); break;
      case OpKind::kInput: throw std::logic_error("unbound input " + id);
    }
    memo[id] = r;
    return r;
  };
  std::vector<Tensor> out;
  for (const auto& o : g.outputs) out.push_back(value(o));
  return out;
}

Tensor seeded_tensor(const TensorSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 17);
  const auto n = static_cast<std::size_t>(genop::num_elements(spec.shape));
  switch (spec.dtype) {
    case DType::kF32: {
      std::uniform_int_distribution<int> d(-512, 512);
      std::vector<float> v(n);
      for (auto& e : v) e = static_cast<float>(d(rng)) / 256.0f;
      return Tensor::from_values<float>(spec.shape, v);
    }
    case DType::kI64: {
      std::uniform_int_distribution<std::int64_t> d(-100, 100);
      std::vector<std::int64_t> v(n);
      for (auto& e : v) e = d(rng);
      return Tensor::from_values<std::int64_t>(spec.shape, v);
    }
    case DType::kU8: {
      std::uniform_int_distribution<int> d(0, 255);
      std::vector<std::uint8_t> v(n);
      for (auto& e : v) e = static_cast<std::uint8_t>(d(rng));
      return Tensor::from_values<std::uint8_t>(spec.shape, v);
    }
  }
  throw std::logic_error("dtype");
}

std::string source_dir() { return GENOP_SOURCE_DIR; }
std::string corpus_dir() { return source_dir() + "/corpus"; }
std::string golden_dir() { return source_dir() + "/tests/golden"; }

std::vector<std::string> corpus_names() { return {"tiny-classifier", "tiny-segmenter", "tiny-video"}; }

genop::planc::Graph corpus_graph(const std::string& name) {
  return genop::planc::parse_graph_file(corpus_dir() + "/" + name + ".gph");
}

std::vector<Tensor> read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  auto take = [&](std::size_t n) {
    if (pos + n > b.size()) throw std::runtime_error("truncated " + path);
    const std::size_t at = pos;
    pos += n;
    return at;
  };
  auto le = [&](std::size_t n) {
    const std::size_t at = take(n);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
    return v;
  };
  const auto count = le(4);
  std::vector<Tensor> out;
  for (std::uint64_t t = 0; t < count; ++t) {
    DType dt{};
    if (!genop::dtype_from_code(static_cast<std::uint8_t>(le(1)), &dt)) throw std::runtime_error("dtype");
    const auto ndim = le(1);
    Shape s;
    for (std::uint64_t d = 0; d < ndim; ++d) s.push_back(static_cast<std::int64_t>(le(8)));
    const auto nbytes = static_cast<std::size_t>(genop::num_elements(s)) * genop::dtype_size(dt);
    const std::size_t at = take(nbytes);
    out.push_back(Tensor::create(dt, s, std::as_bytes(std::span(b.data() + at, nbytes))));
  }
  return out;
}

std::uint32_t ulp_distance(float a, float b) {
  auto key = [](float f) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    return (u & 0x80000000u) ? 0x80000000u - (u & 0x7FFFFFFFu) : 0x80000000u + u;
  };
  const auto ka = key(a), kb = key(b);
  return ka > kb ? ka - kb : kb - ka;
}

std::string temp_dir(const std::string& tag) {
  namespace fs = std::filesystem;
  static std::mt19937_64 rng(std::random_device{}());
  const fs::path p = fs::temp_directory_path() / ("genop-" + tag + "-" + std::to_string(rng()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

}  // namespace oracle
