// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "genop/planc/plan.hpp"

namespace genop::planc {
namespace {

constexpr std::uint8_t kMagic[4] = {'G', 'O', 'P', 'L'};

void put_section(ByteWriter& w, ByteWriter&& section) {
  w.u64(section.size());
  w.raw(ByteView(section.buffer()));
}

ByteReader take_section(ByteReader& r, const char* what) {
  std::uint64_t len = r.u64();
  if (len > r.remaining()) {
    throw Error(ErrorCode::kMalformedFrame, std::string(what) + " section length " +
                                                std::to_string(len) + " exceeds file");
  }
  return ByteReader(r.raw(static_cast<std::size_t>(len)));
}

}  // namespace

Bytes serialize_plan(const ModelPlan& p) {
  ByteWriter w;
  w.raw(ByteView(kMagic));
  w.u16(p.plan_version);

  ByteWriter specs;
  specs.u16(static_cast<std::uint16_t>(p.input_specs.size()));
  for (const auto& s : p.input_specs) encode_spec(specs, s);
  specs.u16(static_cast<std::uint16_t>(p.output_specs.size()));
  for (std::size_t i = 0; i < p.output_specs.size(); ++i) {
    encode_spec(specs, p.output_specs[i]);
    specs.u32(p.output_slots[i]);
  }
  put_section(w, std::move(specs));

  ByteWriter consts;
  consts.u32(static_cast<std::uint32_t>(p.const_pool.size()));
  for (const auto& t : p.const_pool) encode_tensor(consts, t);
  put_section(w, std::move(consts));

  ByteWriter instrs;
  instrs.u32(static_cast<std::uint32_t>(p.ops.size()));
  for (const auto& ins : p.ops) {
    instrs.u8(static_cast<std::uint8_t>(ins.kind));
    instrs.u8(static_cast<std::uint8_t>(ins.operands.size()));
    for (auto s : ins.operands) instrs.u32(s);
    instrs.u32(ins.output);
    instrs.i32(ins.attrs.stride);
    instrs.i32(ins.attrs.pad);
    instrs.i32(ins.attrs.kernel);
    instrs.i32(ins.attrs.axis);
  }
  put_section(w, std::move(instrs));

  Digest d = sha256(ByteView(w.buffer()));
  w.raw(ByteView(d));
  return w.take();
}

void validate_plan_slots(const ModelPlan& p) {
  if (p.output_specs.size() != p.output_slots.size() || p.output_slots.empty()) {
    throw Error(ErrorCode::kMalformedFrame, "plan has no outputs");
  }
  std::uint32_t defined = static_cast<std::uint32_t>(p.input_specs.size() + p.const_pool.size());
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    const auto& ins = p.ops[i];
    if (!is_compute(ins.kind) ||
        static_cast<int>(ins.operands.size()) != op_arity(ins.kind)) {
      throw Error(ErrorCode::kMalformedFrame, "instruction " + std::to_string(i) + " malformed");
    }
    for (auto s : ins.operands) {
      if (s >= defined) {
        throw Error(ErrorCode::kMalformedFrame, "instruction " + std::to_string(i) +
                                                    " reads slot " + std::to_string(s) +
                                                    " before it is defined");
      }
    }
    if (ins.output != defined) {
      throw Error(ErrorCode::kMalformedFrame,
                  "instruction " + std::to_string(i) + " writes unexpected slot");
    }
    ++defined;
  }
  for (auto s : p.output_slots) {
    if (s >= defined) throw Error(ErrorCode::kMalformedFrame, "output slot out of range");
  }
}

ModelPlan deserialize_plan(ByteView bytes) {
  constexpr std::size_t kHeader = 6;
  if (bytes.size() < kHeader + 32) {
    throw Error(ErrorCode::kMalformedFrame, "plan truncated (" + std::to_string(bytes.size()) +
                                                " bytes)");
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw Error(ErrorCode::kMalformedFrame, "bad plan magic");
  }
  ByteReader r(bytes.first(bytes.size() - 32));
  r.raw(4);
  ModelPlan p;
  p.plan_version = r.u16();
  if (p.plan_version != kPlanVersion) {
    throw Error(ErrorCode::kMalformedFrame,
                "unsupported plan_version " + std::to_string(p.plan_version));
  }
  Digest stored;
  std::copy(bytes.end() - 32, bytes.end(), stored.begin());
  if (sha256(bytes.first(bytes.size() - 32)) != stored) {
    throw Error(ErrorCode::kMalformedFrame, "plan_hash verification failed");
  }
  p.plan_hash = stored;

  ByteReader specs = take_section(r, "specs");
  std::uint16_t n_in = specs.u16();
  for (std::uint16_t i = 0; i < n_in; ++i) p.input_specs.push_back(decode_spec(specs));
  std::uint16_t n_out = specs.u16();
  for (std::uint16_t i = 0; i < n_out; ++i) {
    p.output_specs.push_back(decode_spec(specs));
    p.output_slots.push_back(specs.u32());
  }
  specs.expect_end("specs section");

  ByteReader consts = take_section(r, "const");
  std::uint32_t n_const = consts.u32();
  for (std::uint32_t i = 0; i < n_const; ++i) p.const_pool.push_back(decode_tensor(consts));
  consts.expect_end("const section");

  ByteReader instrs = take_section(r, "instruction");
  std::uint32_t n_ops = instrs.u32();
  for (std::uint32_t i = 0; i < n_ops; ++i) {
    Instruction ins;
    std::uint8_t kind = instrs.u8();
    if (kind > kMaxOpKind) {
      throw Error(ErrorCode::kMalformedFrame, "unknown op kind " + std::to_string(kind));
    }
    ins.kind = static_cast<OpKind>(kind);
    std::uint8_t n_operands = instrs.u8();
    for (std::uint8_t k = 0; k < n_operands; ++k) ins.operands.push_back(instrs.u32());
    ins.output = instrs.u32();
    ins.attrs.stride = instrs.i32();
    ins.attrs.pad = instrs.i32();
    ins.attrs.kernel = instrs.i32();
    ins.attrs.axis = instrs.i32();
    p.ops.push_back(std::move(ins));
  }
  instrs.expect_end("instruction section");
  r.expect_end("plan");

  validate_plan_slots(p);
  return p;
}

ModelPlan load_plan_file(const std::string& path) {
  Bytes data = read_file(path);
  return deserialize_plan(data);
}

void save_plan_file(const ModelPlan& p, const std::string& path) {
  write_file(path, serialize_plan(p));
}

}  // namespace genop::planc
