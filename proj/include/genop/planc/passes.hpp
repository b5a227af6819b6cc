// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "genop/planc/graph.hpp"

namespace genop::planc {

enum class Pass { kDce, kConstFold, kFuse };

// Removes compute and Const nodes not reachable from the outputs. Input
// nodes are kept because they define the plan's calling signature.
Graph pass_dce(const Graph& g);

// Replaces every compute node whose operands are all Const by a Const with
// the same id, evaluated with the runtime kernels. Kernel rejections become
// BACKEND_FAILURE.
Graph pass_const_fold(const Graph& g);

// ReLU(Conv2D) -> FusedConv2DReLU and ReLU(MatMul) -> FusedMatMulReLU when
// the producer has exactly one consumer. The fused node keeps the ReLU id.
Graph pass_fuse(const Graph& g);

Graph apply_pass(const Graph& g, Pass p);

std::string_view pass_name(Pass p);
// "dce", "const_fold", "fuse", or "all" (dce, const_fold, dce, fuse).
// "none" or an empty string yield no passes. Throws MALFORMED_FRAME.
std::vector<Pass> parse_pass_list(std::string_view spec);
std::vector<Pass> all_passes();

}  // namespace genop::planc
