// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <string>
#include <vector>

#include "edaflow/codebleu/command_db.hpp"
#include "edaflow/codebleu/tokenizer.hpp"

namespace edaflow::cb {

// One dataflow fact. `set X <value>` yields (X, idx, computedFrom, sources);
// a known EDA command yields (command, idx, comesFrom, {}). idx is the node's
// position in script order. A source name carries its defining node index
// when the script assigned it earlier; otherwise the index list skips it.
struct DfgNode {
  std::string target;
  int index = 0;
  std::string relation;  // "computedFrom" | "comesFrom"
  std::vector<std::string> source_names;
  std::vector<int> source_indices;

  bool operator==(const DfgNode&) const = default;
};

struct DataFlowGraph {
  std::vector<DfgNode> nodes;
  int diagnostics = 0;  // malformed constructs skipped
};

// Walks top-level commands and descends into proc/if/while/for/foreach
// bodies. Variable references inside nested [...] substitutions count as
// sources of the enclosing assignment.
DataFlowGraph extract_dfg(const std::string& script, const EdaCommandDb& db);

// Index-free edge key used by the dataflow metric: target, relation, and the
// sorted source names, joined with unit separators.
std::vector<std::string> edge_multiset(const DataFlowGraph& g);

}  // namespace edaflow::cb
