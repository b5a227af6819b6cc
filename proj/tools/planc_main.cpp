// SPDX-License-Identifier: Apache-2.0
// planc: compiles textual graphs into model plans and inspects plans.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "genop/core/bytes.hpp"
#include "genop/core/error.hpp"
#include "genop/planc/parser.hpp"
#include "genop/planc/passes.hpp"
#include "genop/planc/plan.hpp"

using namespace genop;

namespace {

void print_plan(const planc::ModelPlan& p) {
  std::cout << "plan_hash " << to_hex(p.plan_hash) << "\n"
            << "version   " << p.plan_version << "\n";
  for (const auto& s : p.input_specs) std::cout << "input     " << s.to_string() << "\n";
  for (const auto& s : p.output_specs) std::cout << "output    " << s.to_string() << "\n";
  std::cout << "consts    " << p.const_pool.size() << "\n"
            << "slots     " << p.slot_count() << "\n"
            << "ops       " << p.ops.size() << "\n";
  for (const auto& op : p.ops) {
    std::cout << "  %" << op.output << " = " << planc::op_kind_name(op.kind) << "(";
    for (std::size_t i = 0; i < op.operands.size(); ++i) std::cout << (i ? ", %" : "%") << op.operands[i];
    std::cout << ")";
    if (op.kind == planc::OpKind::kConv2D || op.kind == planc::OpKind::kFusedConv2DReLU ||
        op.kind == planc::OpKind::kMaxPool2D) {
      std::cout << " stride=" << op.attrs.stride << " pad=" << op.attrs.pad;
      if (op.kind == planc::OpKind::kMaxPool2D) std::cout << " kernel=" << op.attrs.kernel;
    }
    if (op.kind == planc::OpKind::kSoftmax) std::cout << " axis=" << op.attrs.axis;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph compiler for genop model plans"};
  app.require_subcommand(1);

  std::string graph_path, out_path, passes = "all";
  bool quiet = false;
  auto* compile = app.add_subcommand("compile", "Compile a .gph graph into a .gopl plan");
  compile->add_option("graph", graph_path, "Textual graph file")->required()->check(CLI::ExistingFile);
  compile->add_option("-o,--out", out_path, "Output plan file (default: <graph stem>.gopl)");
  compile->add_option("--passes", passes, "all | none | comma list of dce,const_fold,fuse");
  compile->add_flag("-q,--quiet", quiet, "Only print the plan hash");

  std::string plan_path;
  auto* inspect = app.add_subcommand("inspect", "Print a plan's specs and instruction list");
  inspect->add_option("plan", plan_path, "Plan file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile) {
      const planc::Graph g = planc::parse_graph_file(graph_path);
      const auto pass_list = planc::parse_pass_list(passes);
      const planc::ModelPlan plan = planc::compile(g, pass_list);
      if (out_path.empty()) out_path = std::filesystem::path(graph_path).replace_extension(".gopl").string();
      planc::save_plan_file(plan, out_path);
      if (quiet) {
        std::cout << to_hex(plan.plan_hash) << "\n";
      } else {
        std::cout << "wrote " << out_path << "\n";
        print_plan(plan);
      }
    } else if (*inspect) {
      print_plan(planc::load_plan_file(plan_path));
    }
  } catch (const Error& e) {
    std::cerr << "planc: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
