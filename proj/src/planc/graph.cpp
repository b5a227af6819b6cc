// SPDX-License-Identifier: Apache-2.0
#include "genop/planc/graph.hpp"

#include <functional>
#include <set>

namespace genop::planc {

bool operator==(const Node& a, const Node& b) {
  return a.id == b.id && a.kind == b.kind && a.operands == b.operands && a.attrs == b.attrs &&
         a.input_spec == b.input_spec && a.value.valid() == b.value.valid() &&
         (!a.value.valid() || tensor_equal_bitwise(a.value, b.value));
}

const Node& Graph::node(const std::string& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw Error(ErrorCode::kMalformedFrame, "unknown node '" + id + "'");
  return it->second;
}

int Graph::consumer_count(const std::string& id) const {
  int count = 0;
  for (const auto& [_, n] : nodes) {
    for (const auto& op : n.operands) count += op == id;
  }
  for (const auto& out : outputs) count += out == id;
  return count;
}

std::size_t Graph::compute_node_count() const {
  std::size_t n = 0;
  for (const auto& [_, node] : nodes) n += is_compute(node.kind);
  return n;
}

namespace {

[[noreturn]] void fail(const Node& n, const std::string& msg) {
  std::string where = n.line > 0 ? "line " + std::to_string(n.line) + ": " : "";
  throw Error(ErrorCode::kMalformedFrame, where + "node '" + n.id + "': " + msg);
}

}  // namespace

void validate_graph(const Graph& g, bool allow_fused) {
  for (const auto& [id, n] : g.nodes) {
    if (id != n.id) fail(n, "key/id mismatch");
    if (!allow_fused &&
        (n.kind == OpKind::kFusedConv2DReLU || n.kind == OpKind::kFusedMatMulReLU)) {
      fail(n, "fused kinds cannot appear in source graphs");
    }
    if (static_cast<int>(n.operands.size()) != op_arity(n.kind)) {
      fail(n, std::string(op_kind_name(n.kind)) + " takes " + std::to_string(op_arity(n.kind)) +
                  " operand(s), got " + std::to_string(n.operands.size()));
    }
    for (const auto& op : n.operands) {
      if (!g.nodes.count(op)) fail(n, "references undefined node '" + op + "'");
    }
    if (n.kind == OpKind::kConst && !n.value.valid()) fail(n, "const without value");
  }
  std::set<std::string> seen_inputs;
  for (const auto& in : g.inputs) {
    auto it = g.nodes.find(in);
    if (it == g.nodes.end() || it->second.kind != OpKind::kInput) {
      throw Error(ErrorCode::kMalformedFrame, "input '" + in + "' is not an Input node");
    }
    if (!seen_inputs.insert(in).second) {
      throw Error(ErrorCode::kMalformedFrame, "input '" + in + "' declared twice");
    }
  }
  for (const auto& [id, n] : g.nodes) {
    if (n.kind == OpKind::kInput && !seen_inputs.count(id)) fail(n, "Input not listed in inputs");
  }
  if (g.outputs.empty()) throw Error(ErrorCode::kMalformedFrame, "graph has no outputs");
  for (const auto& out : g.outputs) {
    if (!g.nodes.count(out)) {
      throw Error(ErrorCode::kMalformedFrame, "output references undefined node '" + out + "'");
    }
  }

  // Iterative three-colour DFS over every node, so cycles in dead code are
  // reported too.
  enum class Mark { kWhite, kGrey, kBlack };
  std::map<std::string, Mark> mark;
  for (const auto& [id, _] : g.nodes) mark[id] = Mark::kWhite;
  for (const auto& [root, _] : g.nodes) {
    if (mark[root] != Mark::kWhite) continue;
    std::vector<std::pair<const Node*, std::size_t>> stack{{&g.nodes.at(root), 0}};
    mark[root] = Mark::kGrey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == node->operands.size()) {
        mark[node->id] = Mark::kBlack;
        stack.pop_back();
        continue;
      }
      const std::string& op = node->operands[next++];
      if (mark[op] == Mark::kGrey) fail(*node, "cycle through '" + op + "'");
      if (mark[op] == Mark::kWhite) {
        mark[op] = Mark::kGrey;
        stack.emplace_back(&g.nodes.at(op), 0);
      }
    }
  }
}

std::vector<std::string> topological_order(const Graph& g) {
  std::vector<std::string> order;
  std::set<std::string> done;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (done.count(id)) return;
    done.insert(id);
    const Node& n = g.node(id);
    for (const auto& op : n.operands) visit(op);
    if (is_compute(n.kind)) order.push_back(id);
  };
  for (const auto& out : g.outputs) visit(out);
  return order;
}

}  // namespace genop::planc
