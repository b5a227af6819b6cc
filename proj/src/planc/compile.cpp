// SPDX-License-Identifier: Apache-2.0
#include <map>

#include "genop/planc/plan.hpp"

namespace genop::planc {

ModelPlan compile(const Graph& source, std::span<const Pass> passes) {
  validate_graph(source);
  Graph g = source;
  for (Pass p : passes) g = apply_pass(g, p);
  validate_graph(g);

  ModelPlan plan;
  std::map<std::string, std::uint32_t> slot_of;
  std::map<std::string, TensorSpec> spec_of;

  for (const auto& id : g.inputs) {
    const Node& n = g.node(id);
    slot_of[id] = static_cast<std::uint32_t>(plan.input_specs.size());
    spec_of[id] = n.input_spec;
    plan.input_specs.push_back(n.input_spec);
  }

  std::vector<std::string> order = topological_order(g);

  // Constants are pooled in first-use order so the layout is deterministic.
  std::vector<std::string> consts;
  auto note_const = [&](const std::string& id) {
    const Node& n = g.node(id);
    if (n.kind == OpKind::kConst && !spec_of.count(id)) {
      spec_of[id] = n.value.spec();
      consts.push_back(id);
    }
  };
  for (const auto& id : order) {
    for (const auto& op : g.node(id).operands) note_const(op);
  }
  for (const auto& out : g.outputs) note_const(out);

  auto base = static_cast<std::uint32_t>(plan.input_specs.size());
  for (std::size_t i = 0; i < consts.size(); ++i) {
    slot_of[consts[i]] = base + static_cast<std::uint32_t>(i);
    plan.const_pool.push_back(g.node(consts[i]).value);
  }

  std::uint32_t next_slot = base + static_cast<std::uint32_t>(consts.size());
  for (const auto& id : order) {
    const Node& n = g.node(id);
    std::vector<TensorSpec> in;
    Instruction ins;
    ins.kind = n.kind;
    ins.attrs = n.attrs;
    for (const auto& op : n.operands) {
      in.push_back(spec_of.at(op));
      ins.operands.push_back(slot_of.at(op));
    }
    try {
      spec_of[id] = infer_output_spec(n.kind, n.attrs, in);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidShape, "node '" + id + "': " + e.detail());
    }
    ins.output = next_slot;
    slot_of[id] = next_slot++;
    plan.ops.push_back(std::move(ins));
  }

  for (const auto& out : g.outputs) {
    plan.output_slots.push_back(slot_of.at(out));
    plan.output_specs.push_back(spec_of.at(out));
  }

  // The hash is defined over the serialized bytes.
  Bytes bytes = serialize_plan(plan);
  std::copy(bytes.end() - 32, bytes.end(), plan.plan_hash.begin());
  return plan;
}

}  // namespace genop::planc
