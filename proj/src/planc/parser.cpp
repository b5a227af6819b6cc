// SPDX-License-Identifier: Apache-2.0
#include "genop/planc/parser.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "genop/core/bytes.hpp"

namespace genop::planc {
namespace {

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kMalformedFrame, "line " + std::to_string(line_) + ", col " +
                                                std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_space();
    std::size_t start = pos_;
    auto ok_first = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ok_rest = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    };
    if (pos_ >= text_.size() || !ok_first(text_[pos_])) fail("expected identifier");
    while (pos_ < text_.size() && ok_rest(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view token_until(std::string_view stops) {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected value");
    return text_.substr(start, pos_ - start);
  }

  template <typename T>
  T number() {
    std::string_view tok = token_until(",]}");
    T value{};
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      pos_ -= tok.size();
      fail("bad number '" + std::string(tok) + "'");
    }
    return value;
  }

  std::string_view rest() {
    skip_space();
    auto r = text_.substr(pos_);
    pos_ = text_.size();
    return r;
  }

  int line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

TensorSpec parse_spec(LineCursor& c) {
  TensorSpec spec;
  std::string dt = c.ident();
  if (!dtype_from_name(dt, &spec.dtype)) c.fail("unknown dtype '" + dt + "'");
  c.expect('[');
  do {
    auto d = c.number<std::int64_t>();
    if (d < 1) c.fail("dimensions must be >= 1");
    spec.shape.push_back(d);
    if (spec.shape.size() > kMaxRank) c.fail("rank exceeds " + std::to_string(kMaxRank));
  } while (c.accept(','));
  c.expect(']');
  try {
    tensor_num_bytes(spec.dtype, spec.shape);
  } catch (const Error& e) {
    c.fail(e.detail());
  }
  return spec;
}

template <typename T>
Tensor parse_literals(LineCursor& c, const TensorSpec& spec) {
  const std::int64_t count = num_elements(spec.shape);
  std::vector<T> values;
  do {
    if (static_cast<std::int64_t>(values.size()) == count) {
      c.fail("more than " + std::to_string(count) + " literals");
    }
    values.push_back(c.number<T>());
  } while (c.accept(','));
  if (static_cast<std::int64_t>(values.size()) != count) {
    c.fail("expected " + std::to_string(count) + " literals, got " + std::to_string(values.size()));
  }
  return Tensor::from_values(spec.shape, values);
}

Tensor parse_const_value(LineCursor& c, const TensorSpec& spec, const std::string& base_dir) {
  if (c.accept('@')) {
    std::string rel(c.rest());
    if (rel.empty()) c.fail("expected file name after '@'");
    std::filesystem::path path = std::filesystem::path(base_dir) / rel;
    Bytes data;
    try {
      data = read_file(path.string());
    } catch (const std::exception& e) {
      c.fail(e.what());
    }
    if (static_cast<std::int64_t>(data.size()) != tensor_num_bytes(spec.dtype, spec.shape)) {
      c.fail(path.string() + " holds " + std::to_string(data.size()) + " bytes, " +
             spec.to_string() + " needs " +
             std::to_string(tensor_num_bytes(spec.dtype, spec.shape)));
    }
    return Tensor::create(spec.dtype, spec.shape, std::as_bytes(ByteView(data)));
  }
  switch (spec.dtype) {
    case DType::kF32: return parse_literals<float>(c, spec);
    case DType::kI64: return parse_literals<std::int64_t>(c, spec);
    case DType::kU8: return parse_literals<std::uint8_t>(c, spec);
  }
  c.fail("unsupported dtype");
}

void parse_attrs(LineCursor& c, Node& n) {
  if (!c.accept('{')) return;
  if (c.accept('}')) return;
  do {
    std::string key = c.ident();
    c.expect('=');
    auto v = c.number<std::int32_t>();
    if (key == "stride") {
      if (v < 1) c.fail("stride must be >= 1");
      n.attrs.stride = v;
    } else if (key == "pad") {
      if (v < 0) c.fail("pad must be >= 0");
      n.attrs.pad = v;
    } else if (key == "kernel") {
      if (v < 1) c.fail("kernel must be >= 1");
      n.attrs.kernel = v;
    } else if (key == "axis") {
      n.attrs.axis = v;
    } else {
      c.fail("unknown attribute '" + key + "'");
    }
  } while (c.accept(','));
  c.expect('}');
}

void add_node(Graph& g, Node n, LineCursor& c) {
  if (g.nodes.count(n.id)) c.fail("duplicate id '" + n.id + "'");
  std::string id = n.id;
  g.nodes.emplace(std::move(id), std::move(n));
}

void parse_line(Graph& g, std::string_view line_text, int line_no, const std::string& base_dir) {
  LineCursor c(line_text, line_no);
  if (c.done()) return;
  std::string first = c.ident();

  if (c.peek('=')) {
    c.expect('=');
    Node n;
    n.id = first;
    n.line = line_no;
    std::string kind_name = c.ident();
    auto kind = parse_op_kind(kind_name);
    if (!kind) c.fail("unknown op kind '" + kind_name + "'");
    n.kind = *kind;
    c.expect('(');
    if (!c.accept(')')) {
      do {
        n.operands.push_back(c.ident());
      } while (c.accept(','));
      c.expect(')');
    }
    if (static_cast<int>(n.operands.size()) != op_arity(n.kind)) {
      c.fail(kind_name + " takes " + std::to_string(op_arity(n.kind)) + " operand(s), got " +
             std::to_string(n.operands.size()));
    }
    parse_attrs(c, n);
    if (n.kind == OpKind::kMaxPool2D && n.attrs.kernel < 1) c.fail("maxpool2d needs kernel=");
    if (!c.done()) c.fail("unexpected trailing text");
    add_node(g, std::move(n), c);
    return;
  }

  if (first == "input") {
    Node n;
    n.id = c.ident();
    n.kind = OpKind::kInput;
    n.line = line_no;
    n.input_spec = parse_spec(c);
    if (!c.done()) c.fail("unexpected trailing text");
    g.inputs.push_back(n.id);
    add_node(g, std::move(n), c);
  } else if (first == "const") {
    Node n;
    n.id = c.ident();
    n.kind = OpKind::kConst;
    n.line = line_no;
    TensorSpec spec = parse_spec(c);
    c.expect('=');
    n.value = parse_const_value(c, spec, base_dir);
    if (!c.done()) c.fail("unexpected trailing text");
    add_node(g, std::move(n), c);
  } else if (first == "output") {
    g.outputs.push_back(c.ident());
    if (!c.done()) c.fail("unexpected trailing text");
  } else {
    c.fail("unknown statement '" + first + "'");
  }
}

}  // namespace

Graph parse_graph(std::string_view text, const std::string& base_dir) {
  Graph g;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    try {
      parse_line(g, line, line_no, base_dir);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kMalformedFrame, "line " + std::to_string(line_no) + ": " + e.what());
    }
    start = end + 1;
  }
  validate_graph(g, /*allow_fused=*/false);
  return g;
}

Graph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformedFrame, "cannot open graph source " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_graph(ss.str(), dir.empty() ? "." : dir);
}

}  // namespace genop::planc
