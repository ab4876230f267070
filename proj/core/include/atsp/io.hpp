#pragma once

#include <string>
#include <string_view>

#include "atsp/graph.hpp"

namespace atsp {

enum class InstanceFormat { kJson, kTsplib };

struct NamedInstance {
  std::string name;
  Digraph graph;
};

// JSON edge list {"n": 3, "edges": [[0, 1, "2/3"], ...]} or TSPLIB ATSP with
// EDGE_WEIGHT_FORMAT FULL_MATRIX; the format is detected from the first
// non-blank character. Throws InputError on malformed data, negative costs
// and graphs that are not strongly connected.
NamedInstance parse_instance(std::string_view text);
NamedInstance parse_instance(std::string_view text, InstanceFormat format);
NamedInstance read_instance_file(const std::string& path);

std::string write_json(const NamedInstance& inst);
// Missing arcs are written with their shortest-path cost, which changes
// neither the optimum tour nor the LP value.
std::string write_tsplib(const NamedInstance& inst);

}  // namespace atsp
