// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "genop/core/tensor.hpp"
#include "genop/planc/op.hpp"

namespace genop::planc {

struct Node {
  std::string id;
  OpKind kind = OpKind::kInput;
  std::vector<std::string> operands;
  OpAttrs attrs;
  TensorSpec input_spec;  // kInput only
  Tensor value;           // kConst only
  int line = 0;           // source line, 0 when synthesized

  // Structural equality; ignores the source line.
  friend bool operator==(const Node& a, const Node& b);
};

// Editable compiler IR. Node ids are unique; `inputs` lists the Input nodes
// in declaration order and defines the plan's input order.
struct Graph {
  std::map<std::string, Node> nodes;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  friend bool operator==(const Graph&, const Graph&) = default;

  const Node& node(const std::string& id) const;
  // Number of operand references to `id` plus its appearances in outputs.
  int consumer_count(const std::string& id) const;
  std::size_t compute_node_count() const;
};

// Checks arity, references, Input bookkeeping and acyclicity. Throws
// MALFORMED_FRAME describing the first violation.
void validate_graph(const Graph& g, bool allow_fused = true);

// Compute nodes reachable from the outputs, in a deterministic post-order
// (outputs left to right, operands left to right).
std::vector<std::string> topological_order(const Graph& g);

}  // namespace genop::planc
