// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "genop/planc/graph.hpp"

namespace genop::planc {

// Textual graph format, one statement per line, `#` starts a comment:
//
//   input <id> <dtype>[d0,d1,...]
//   const <id> <dtype>[dims] = <literal>,<literal>,...
//   const <id> <dtype>[dims] = @relative/path.bin
//   <id> = <kind>(<operand>,...) {stride=1,pad=0,kernel=2,axis=-1}
//   output <id>
//
// `@file` payloads are raw little-endian element bytes resolved against
// `base_dir`. Operands may reference nodes defined further down.
//
// Any failure throws MALFORMED_FRAME with "line L, col C: ...". Never
// crashes on arbitrary input.
Graph parse_graph(std::string_view text, const std::string& base_dir = ".");

Graph parse_graph_file(const std::string& path);

}  // namespace genop::planc
