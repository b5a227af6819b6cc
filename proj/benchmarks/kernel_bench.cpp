// SPDX-License-Identifier: Apache-2.0
// Serial reference kernels against their OpenMP variants: wall time per call
// and a bitwise check of the outputs.
#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "genop/interp/kernels.hpp"

using namespace genop;

namespace {

Tensor random_tensor(Shape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::size_t n = 1;
  for (auto d : shape) n *= static_cast<std::size_t>(d);
  std::vector<float> v(n);
  for (auto& x : v) x = dist(rng);
  return Tensor::from_values<float>(std::move(shape), v);
}

struct Case {
  std::string name;
  std::function<Tensor()> serial;
  std::function<Tensor()> parallel;
};

double median_micros(const std::function<Tensor()>& f, int reps) {
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Tensor out = f();
    t.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int reps = 15;
  int threads = 0;
  bool csv = false;
  app.add_option("--reps", reps, "Timed repetitions per kernel")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--csv", csv, "Print CSV instead of a table");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const Tensor img = random_tensor({1, 16, 96, 96}, 1);
  const Tensor k3 = random_tensor({32, 16, 3, 3}, 2);
  const Tensor a = random_tensor({256, 384}, 3);
  const Tensor b = random_tensor({384, 256}, 4);
  const Tensor big = random_tensor({8, 64, 64, 64}, 5);
  const Tensor logits = random_tensor({4, 21, 128, 128}, 6);

  const std::vector<Case> cases = {
      {"conv2d 16->32 96x96 k3", [&] { return interp::serial::conv2d(img, k3, 1, 1); },
       [&] { return interp::omp::conv2d(img, k3, 1, 1); }},
      {"fused_conv2d_relu", [&] { return interp::serial::fused_conv2d_relu(img, k3, 1, 1); },
       [&] { return interp::omp::fused_conv2d_relu(img, k3, 1, 1); }},
      {"matmul 256x384x256", [&] { return interp::serial::matmul(a, b); },
       [&] { return interp::omp::matmul(a, b); }},
      {"maxpool2d k3 s2", [&] { return interp::serial::maxpool2d(big, 3, 2, 1); },
       [&] { return interp::omp::maxpool2d(big, 3, 2, 1); }},
      {"global_avg_pool", [&] { return interp::serial::global_avg_pool(big); },
       [&] { return interp::omp::global_avg_pool(big); }},
      {"relu", [&] { return interp::serial::relu(big); }, [&] { return interp::omp::relu(big); }},
      {"add", [&] { return interp::serial::add(big, big); }, [&] { return interp::omp::add(big, big); }},
      {"softmax axis 1", [&] { return interp::serial::softmax(logits, 1); },
       [&] { return interp::omp::softmax(logits, 1); }},
      {"argmax_top1", [&] { return interp::serial::argmax_top1(logits); },
       [&] { return interp::omp::argmax_top1(logits); }},
  };

  const int nthreads = interp::kernel_threads();
  bool all_equal = true;
  if (csv) {
    std::printf("kernel,threads,serial_us,omp_us,speedup,bitwise_equal\n");
  } else {
    std::printf("threads: %d, reps: %d\n\n%-24s %12s %12s %8s %6s\n", nthreads, reps, "kernel", "serial us",
                "omp us", "speedup", "equal");
  }
  for (const auto& c : cases) {
    const bool equal = tensor_equal_bitwise(c.serial(), c.parallel());
    all_equal = all_equal && equal;
    const double s = median_micros(c.serial, reps);
    const double p = median_micros(c.parallel, reps);
    if (csv) {
      std::printf("%s,%d,%.1f,%.1f,%.3f,%d\n", c.name.c_str(), nthreads, s, p, s / p, equal ? 1 : 0);
    } else {
      std::printf("%-24s %12.1f %12.1f %8.2f %6s\n", c.name.c_str(), s, p, s / p, equal ? "yes" : "NO");
    }
  }
  return all_equal ? 0 : 1;
}
