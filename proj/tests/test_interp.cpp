// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <random>

#include "genop/core/error.hpp"
#include "genop/interp/execute.hpp"
#include "genop/interp/kernels.hpp"
#include "genop/planc/parser.hpp"
#include "genop/planc/passes.hpp"
#include "genop/planc/plan.hpp"
#include "oracle.hpp"

using namespace genop;
namespace serial = genop::interp::serial;
namespace par = genop::interp::omp;

namespace {

Tensor f32(Shape s, std::vector<float> v) { return Tensor::from_values<float>(std::move(s), v); }

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a genop::Error");
  return ErrorCode::kBackendFailure;
}

Tensor rnd(Shape s, std::uint64_t seed) { return oracle::seeded_tensor({DType::kF32, std::move(s)}, seed); }

struct ThreadScope {
  explicit ThreadScope(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadScope() { omp_set_num_threads(saved); }
  int saved;
};

planc::ModelPlan corpus_plan(const std::string& name) {
  return planc::compile(oracle::corpus_graph(name), planc::all_passes());
}

}  // namespace

TEST_CASE("matmul examples") {
  Tensor id = f32({2, 2}, {1, 0, 0, 1});
  Tensor m = f32({2, 2}, {5, 6, 7, 8});
  CHECK(tensor_equal_bitwise(serial::matmul(id, m), m));
  Tensor ones_row = f32({1, 4}, {1, 1, 1, 1});
  Tensor ones_col = f32({4, 1}, {1, 1, 1, 1});
  CHECK(serial::matmul(ones_row, ones_col).to_vector<float>() == std::vector<float>{4.0f});
  Tensor a = rnd({8, 8}, 1), b = rnd({8, 8}, 2);
  CHECK(tensor_equal_bitwise(serial::matmul(a, b), oracle::matmul(a, b)));
  CHECK(code_of([&] { serial::matmul(f32({1, 4}, {1, 2, 3, 4}), rnd({3, 2}, 1)); }) == ErrorCode::kInvalidShape);
}

TEST_CASE("conv2d examples") {
  Tensor x = f32({1, 1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  Tensor ones = f32({1, 1, 2, 2}, {1, 1, 1, 1});
  CHECK(serial::conv2d(x, ones, 1, 0).to_vector<float>() == std::vector<float>{12, 16, 24, 28});
  CHECK(serial::conv2d(x, ones, 1, 0).shape() == Shape{1, 1, 2, 2});
  CHECK(tensor_equal_bitwise(serial::conv2d(x, f32({1, 1, 1, 1}, {1}), 1, 0), x));
  Tensor z = serial::conv2d(x, f32({1, 1, 2, 2}, {0, 0, 0, 0}), 1, 0);
  for (float v : z.values<float>()) CHECK(v == 0.0f);
  // Padding and stride.
  Tensor p = serial::conv2d(x, ones, 2, 1);
  CHECK(p.shape() == Shape{1, 1, 2, 2});
  CHECK(p.to_vector<float>() == std::vector<float>{1, 5, 11, 28});
}

TEST_CASE("elementwise, pooling and reduction examples") {
  CHECK(serial::relu(f32({3}, {-1, 0, 2})).to_vector<float>() == std::vector<float>{0, 0, 2});
  CHECK(serial::add(f32({2}, {1, 2}), f32({2}, {3, 4})).to_vector<float>() == std::vector<float>{4, 6});
  CHECK(serial::softmax(f32({4}, {3, 3, 3, 3}), -1).to_vector<float>() ==
        std::vector<float>{0.25f, 0.25f, 0.25f, 0.25f});
  CHECK(serial::argmax_top1(f32({3}, {3, 7, 7})).to_vector<std::int64_t>() == std::vector<std::int64_t>{1});
  CHECK(serial::argmax_top1(f32({3}, {3, 7, 7})).shape() == Shape{1});
  Tensor mp = rnd({1, 1, 4, 4}, 5);
  CHECK(tensor_equal_bitwise(serial::maxpool2d(mp, 2, 2, 0), oracle::maxpool2d(mp, 2, 2, 0)));
  CHECK(serial::maxpool2d(f32({1, 1, 2, 2}, {1, 4, 3, 2}), 2, 2, 0).to_vector<float>() == std::vector<float>{4});
  CHECK(serial::global_avg_pool(f32({1, 2, 1, 2}, {1, 3, 5, 9})).to_vector<float>() ==
        std::vector<float>{2, 7});
  CHECK(code_of([] { serial::add(f32({2}, {1, 2}), f32({1, 2}, {1, 2})); }) == ErrorCode::kInvalidShape);
}

TEST_CASE("kernels agree bitwise with the naive oracle on seeded inputs") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Tensor x = rnd({1, 3, 9, 7}, s), k = rnd({4, 3, 3, 2}, s + 100);
    const int stride = 1 + static_cast<int>(s % 2), pad = static_cast<int>(s % 3);
    CHECK(tensor_equal_bitwise(serial::conv2d(x, k, stride, pad), oracle::conv2d(x, k, stride, pad)));
    CHECK(tensor_equal_bitwise(serial::maxpool2d(x, 3, stride, 1), oracle::maxpool2d(x, 3, stride, 1)));
    CHECK(tensor_equal_bitwise(serial::global_avg_pool(x), oracle::global_avg_pool(x)));
    CHECK(tensor_equal_bitwise(serial::softmax(x, 1), oracle::softmax(x, 1)));
    CHECK(tensor_equal_bitwise(serial::softmax(x, -1), oracle::softmax(x, -1)));
    CHECK(tensor_equal_bitwise(serial::relu(x), oracle::relu(x)));
    CHECK(tensor_equal_bitwise(serial::argmax_top1(x), oracle::argmax_top1(x)));
    Tensor a = rnd({3, 5, 2}, s), b = rnd({10, 4}, s + 1);
    CHECK(tensor_equal_bitwise(serial::matmul(a, b), oracle::matmul(a, b)));
  }
}

TEST_CASE("OpenMP kernels match serial kernels bitwise for any thread count") {
  for (int threads : {1, 2, 3, 4}) {
    ThreadScope scope(threads);
    for (std::uint64_t s = 0; s < 4; ++s) {
      // Large enough to cross the parallel work threshold.
      Tensor x = rnd({2, 8, 32, 32}, s), k = rnd({16, 8, 3, 3}, s + 7);
      CHECK(tensor_equal_bitwise(par::conv2d(x, k, 1, 1), serial::conv2d(x, k, 1, 1)));
      CHECK(tensor_equal_bitwise(par::conv2d(x, k, 2, 0), serial::conv2d(x, k, 2, 0)));
      CHECK(tensor_equal_bitwise(par::fused_conv2d_relu(x, k, 1, 1), serial::fused_conv2d_relu(x, k, 1, 1)));
      CHECK(tensor_equal_bitwise(par::maxpool2d(x, 2, 2, 0), serial::maxpool2d(x, 2, 2, 0)));
      CHECK(tensor_equal_bitwise(par::maxpool2d(x, 3, 1, 1), serial::maxpool2d(x, 3, 1, 1)));
      CHECK(tensor_equal_bitwise(par::global_avg_pool(x), serial::global_avg_pool(x)));
      CHECK(tensor_equal_bitwise(par::relu(x), serial::relu(x)));
      CHECK(tensor_equal_bitwise(par::add(x, x), serial::add(x, x)));
      CHECK(tensor_equal_bitwise(par::softmax(x, 1), serial::softmax(x, 1)));
      CHECK(tensor_equal_bitwise(par::softmax(x, -1), serial::softmax(x, -1)));
      CHECK(tensor_equal_bitwise(par::argmax_top1(x), serial::argmax_top1(x)));
      Tensor a = rnd({64, 96}, s), b = rnd({96, 48}, s + 3);
      CHECK(tensor_equal_bitwise(par::matmul(a, b), serial::matmul(a, b)));
      CHECK(tensor_equal_bitwise(par::fused_matmul_relu(a, b), serial::fused_matmul_relu(a, b)));
    }
  }
}

TEST_CASE("fused kernels equal relu of the unfused kernel") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Tensor x = rnd({1, 2, 6, 6}, s), k = rnd({3, 2, 3, 3}, s + 50);
    CHECK(tensor_equal_bitwise(serial::fused_conv2d_relu(x, k, 1, 1), serial::relu(serial::conv2d(x, k, 1, 1))));
    CHECK(tensor_equal_bitwise(par::fused_conv2d_relu(x, k, 1, 1), par::relu(par::conv2d(x, k, 1, 1))));
    Tensor a = rnd({4, 6}, s), b = rnd({6, 5}, s + 9);
    CHECK(tensor_equal_bitwise(serial::fused_matmul_relu(a, b), serial::relu(serial::matmul(a, b))));
    CHECK(tensor_equal_bitwise(par::fused_matmul_relu(a, b), par::relu(par::matmul(a, b))));
  }
}

TEST_CASE("softmax rows sum to one and stay in [0,1]") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Tensor x = rnd({3, 17}, s);
    Tensor y = serial::softmax(x, -1);
    auto v = y.values<float>();
    for (int r = 0; r < 3; ++r) {
      double sum = 0;
      for (int j = 0; j < 17; ++j) {
        const float e = v[r * 17 + j];
        CHECK(e >= 0.0f);
        CHECK(e <= 1.0f);
        sum += e;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("argmax picks the least index attaining the maximum") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<float> v(n);
    for (auto& e : v) e = static_cast<float>(rng() % 4);  // many ties
    const auto got = serial::argmax_top1(f32({n}, v)).to_vector<std::int64_t>()[0];
    std::int64_t want = -1;
    float best = -1;
    for (int i = 0; i < n; ++i) {
      if (want < 0 || v[i] > best) {
        want = i;
        best = v[i];
      }
    }
    CHECK(got == want);
    CHECK(par::argmax_top1(f32({n}, v)).to_vector<std::int64_t>()[0] == want);
  }
}

TEST_CASE("identity plan returns its input") {
  planc::ModelPlan p = planc::compile(planc::parse_graph("input x f32[2,3]\noutput x\n"), {});
  CHECK(p.ops.empty());
  Tensor t = rnd({2, 3}, 4);
  auto r = interp::execute_plan(p, std::span<const Tensor>(&t, 1));
  REQUIRE(r.outputs.size() == 1);
  CHECK(tensor_equal_bitwise(r.outputs[0], t));
}

TEST_CASE("tiny-classifier on zeros gives a uniform distribution") {
  planc::ModelPlan p = corpus_plan("tiny-classifier");
  Tensor zeros = Tensor::create(DType::kF32, {1, 3, 32, 32}, std::vector<std::byte>(3 * 32 * 32 * 4));
  auto r = interp::execute_plan(p, std::span<const Tensor>(&zeros, 1));
  REQUIRE(r.outputs.size() == 1);
  for (float v : r.outputs[0].values<float>()) CHECK(v == 0.1f);
}

TEST_CASE("corpus plans match the independent golden outputs") {
  for (const auto& name : oracle::corpus_names()) {
    CAPTURE(name);
    const auto inputs = oracle::read_tensor_file(oracle::golden_dir() + "/corpus/" + name + ".inputs.bin");
    const auto golden = oracle::read_tensor_file(oracle::golden_dir() + "/corpus/" + name + ".outputs.bin");
    REQUIRE(inputs.size() == golden.size());
    planc::ModelPlan p = corpus_plan(name);
    const bool has_softmax = name != "tiny-segmenter";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      auto out = interp::execute_plan(p, std::span<const Tensor>(&inputs[i], 1)).outputs;
      REQUIRE(out.size() == 1);
      REQUIRE(out[0].spec() == golden[i].spec());
      auto a = out[0].values<float>();
      auto b = golden[i].values<float>();
      std::uint32_t worst = 0;
      for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, oracle::ulp_distance(a[j], b[j]));
      // Golden softmax uses a different exp implementation; everything
      // before it follows the same operation order and must match exactly.
      CHECK(worst <= (has_softmax ? 4u : 0u));
      CHECK(tensor_equal_bitwise(serial::argmax_top1(out[0]), serial::argmax_top1(golden[i])));
    }
  }
}

TEST_CASE("execution is deterministic across runs, modes and speed factors") {
  for (const auto& name : oracle::corpus_names()) {
    planc::ModelPlan p = corpus_plan(name);
    Tensor x = oracle::seeded_tensor(p.input_specs[0], 9);
    const auto base = interp::execute_plan(p, std::span<const Tensor>(&x, 1)).outputs;
    for (double sf : {0.25, 1.0, 8.0}) {
      for (auto mode : {interp::KernelMode::kSerial, interp::KernelMode::kParallel}) {
        interp::ExecOptions o{sf, mode};
        CHECK(tensors_equal_bitwise(interp::execute_plan(p, std::span<const Tensor>(&x, 1), o).outputs, base));
      }
    }
  }
}

TEST_CASE("speed factor shapes timing only") {
  planc::ModelPlan p = corpus_plan("tiny-classifier");
  Tensor x = oracle::seeded_tensor(p.input_specs[0], 1);
  using Clock = std::chrono::steady_clock;
  interp::execute_plan(p, std::span<const Tensor>(&x, 1));  // warm up
  auto t0 = Clock::now();
  auto fast = interp::execute_plan(p, std::span<const Tensor>(&x, 1), {1.0, interp::KernelMode::kParallel});
  auto t1 = Clock::now();
  auto slow = interp::execute_plan(p, std::span<const Tensor>(&x, 1), {0.25, interp::KernelMode::kParallel});
  auto t2 = Clock::now();
  const auto wall_fast = std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
  const auto wall_slow = std::chrono::duration_cast<std::chrono::microseconds>(t2 - t1).count();
  CHECK(wall_slow > 2 * wall_fast);
  CHECK(slow.total_micros >= 3 * fast.total_micros / 2);

  auto scaled = interp::execute_plan(p, std::span<const Tensor>(&x, 1), {8.0, interp::KernelMode::kParallel});
  for (const auto* r : {&fast, &slow, &scaled}) {
    CHECK(r->per_op_micros.size() == p.ops.size());
    std::int64_t mx = 0;
    for (const auto& [i, us] : r->per_op_micros) mx = std::max(mx, us);
    CHECK(r->total_micros >= mx);
  }
  CHECK(code_of([&] {
    interp::execute_plan(p, std::span<const Tensor>(&x, 1), {0.0, interp::KernelMode::kParallel});
  }) == ErrorCode::kBackendFailure);
}

TEST_CASE("execute_plan validates inputs") {
  planc::ModelPlan p = corpus_plan("tiny-classifier");
  Tensor wrong_shape = rnd({1, 3, 32, 31}, 1);
  CHECK(code_of([&] { interp::execute_plan(p, std::span<const Tensor>(&wrong_shape, 1)); }) ==
        ErrorCode::kInvalidShape);
  Tensor wrong_dtype = oracle::seeded_tensor({DType::kU8, {1, 3, 32, 32}}, 1);
  CHECK(code_of([&] { interp::execute_plan(p, std::span<const Tensor>(&wrong_dtype, 1)); }) ==
        ErrorCode::kDtypeMismatch);
  CHECK(code_of([&] { interp::execute_plan(p, std::span<const Tensor>()); }) == ErrorCode::kInvalidShape);
}

TEST_CASE("run_kernel dispatch") {
  Tensor x = rnd({1, 2, 4, 4}, 1), k = rnd({3, 2, 3, 3}, 2);
  planc::OpAttrs at;
  at.pad = 1;
  const Tensor ops[2] = {x, k};
  CHECK(tensor_equal_bitwise(interp::run_kernel(planc::OpKind::kConv2D, at, ops, interp::KernelMode::kSerial),
                             serial::conv2d(x, k, 1, 1)));
  CHECK(code_of([&] { interp::run_kernel(planc::OpKind::kReLU, at, ops); }) == ErrorCode::kInvalidShape);
  CHECK(interp::kernel_threads() >= 1);
}
