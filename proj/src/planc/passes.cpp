// SPDX-License-Identifier: Apache-2.0
#include "genop/planc/passes.hpp"

#include <set>

#include "genop/interp/kernels.hpp"

namespace genop::planc {

Graph pass_dce(const Graph& g) {
  std::set<std::string> live;
  std::vector<std::string> work(g.outputs.begin(), g.outputs.end());
  while (!work.empty()) {
    std::string id = std::move(work.back());
    work.pop_back();
    if (!live.insert(id).second) continue;
    for (const auto& op : g.node(id).operands) work.push_back(op);
  }
  Graph out;
  out.inputs = g.inputs;
  out.outputs = g.outputs;
  for (const auto& [id, n] : g.nodes) {
    if (live.count(id) || n.kind == OpKind::kInput) out.nodes.emplace(id, n);
  }
  return out;
}

Graph pass_const_fold(const Graph& g) {
  Graph out = g;
  // Dead nodes are folded too when possible; ordering covers every node
  // reachable from anywhere, so walk all nodes in dependency order.
  std::set<std::string> visited;
  std::vector<std::string> order;
  for (const auto& [root, _] : out.nodes) {
    std::vector<std::pair<std::string, std::size_t>> stack{{root, 0}};
    if (visited.count(root)) continue;
    visited.insert(root);
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const Node& n = out.nodes.at(id);
      if (next == n.operands.size()) {
        order.push_back(id);
        stack.pop_back();
        continue;
      }
      const std::string& op = n.operands[next++];
      if (visited.insert(op).second) stack.emplace_back(op, 0);
    }
  }

  for (const auto& id : order) {
    Node& n = out.nodes.at(id);
    if (!is_compute(n.kind)) continue;
    std::vector<Tensor> args;
    bool all_const = true;
    for (const auto& op : n.operands) {
      const Node& src = out.nodes.at(op);
      if (src.kind != OpKind::kConst) {
        all_const = false;
        break;
      }
      args.push_back(src.value);
    }
    if (!all_const) continue;
    Tensor folded;
    try {
      folded = interp::run_kernel(n.kind, n.attrs, args);
    } catch (const Error& e) {
      throw Error(ErrorCode::kBackendFailure, "folding '" + id + "': " + e.detail());
    }
    n.kind = OpKind::kConst;
    n.operands.clear();
    n.attrs = OpAttrs{};
    n.value = std::move(folded);
  }
  return out;
}

Graph pass_fuse(const Graph& g) {
  Graph out = g;
  std::vector<std::string> absorbed;
  for (auto& [id, n] : out.nodes) {
    if (n.kind != OpKind::kReLU) continue;
    const Node& producer = g.node(n.operands[0]);
    OpKind fused;
    if (producer.kind == OpKind::kConv2D) {
      fused = OpKind::kFusedConv2DReLU;
    } else if (producer.kind == OpKind::kMatMul) {
      fused = OpKind::kFusedMatMulReLU;
    } else {
      continue;
    }
    if (g.consumer_count(producer.id) != 1) continue;
    n.kind = fused;
    n.operands = producer.operands;
    n.attrs = producer.attrs;
    absorbed.push_back(producer.id);
  }
  for (const auto& id : absorbed) out.nodes.erase(id);
  return out;
}

Graph apply_pass(const Graph& g, Pass p) {
  switch (p) {
    case Pass::kDce: return pass_dce(g);
    case Pass::kConstFold: return pass_const_fold(g);
    case Pass::kFuse: return pass_fuse(g);
  }
  return g;
}

std::string_view pass_name(Pass p) {
  switch (p) {
    case Pass::kDce: return "dce";
    case Pass::kConstFold: return "const_fold";
    case Pass::kFuse: return "fuse";
  }
  return "?";
}

std::vector<Pass> all_passes() {
  return {Pass::kDce, Pass::kConstFold, Pass::kDce, Pass::kFuse};
}

std::vector<Pass> parse_pass_list(std::string_view spec) {
  std::vector<Pass> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view item = spec.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "all") {
      auto all = all_passes();
      out.insert(out.end(), all.begin(), all.end());
    } else if (item == "dce") {
      out.push_back(Pass::kDce);
    } else if (item == "const_fold") {
      out.push_back(Pass::kConstFold);
    } else if (item == "fuse") {
      out.push_back(Pass::kFuse);
    } else if (!item.empty() && item != "none") {
      throw Error(ErrorCode::kMalformedFrame, "unknown pass '" + std::string(item) + "'");
    }
    start = end + 1;
  }
  return out;
}

}  // namespace genop::planc
