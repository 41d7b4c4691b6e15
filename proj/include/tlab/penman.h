// Copyright 2026 The Translationese Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AMR graphs in PENMAN notation: reading, validation, canonical writing,
// isomorphism, inverse-role normalization and summary statistics.

#ifndef TLAB_PENMAN_H_
#define TLAB_PENMAN_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tlab {

enum class TargetKind {
  kVariable,
  kSymbol,  // unquoted constant: numbers, "-", "imperative", ...
  kString,  // quoted constant, stored unescaped
};

struct AmrNode {
  std::string variable;
  std::string concept_label;

  friend bool operator==(const AmrNode&, const AmrNode&) = default;
};

struct AmrEdge {
  std::string source;
  std::string role;  // includes the leading ':'
  std::string target;
  TargetKind kind = TargetKind::kVariable;

  bool is_constant() const { return kind != TargetKind::kVariable; }
  friend bool operator==(const AmrEdge&, const AmrEdge&) = default;
};

// A rooted, directed, labeled graph. Nodes and edges keep insertion order,
// which fixes the serialization order.
struct AmrGraph {
  std::string root;
  std::vector<AmrNode> nodes;
  std::vector<AmrEdge> edges;
  // Comment lines ("# ::id ...") preceding the graph, kept verbatim.
  std::vector<std::string> metadata;

  const AmrNode* FindNode(std::string_view variable) const;
  // Constant values in edge order.
  std::vector<std::string> Constants() const;
};

// Throws InvalidGraph describing the first violated invariant: root
// defined, unique variables, edge endpoints defined, well-formed roles,
// undirected connectivity.
void ValidateGraph(const AmrGraph& graph);

// True for ":" followed by an identifier, optionally "-of" suffixed.
bool IsValidRole(std::string_view role);

// Throws PenmanError with kind EmptyInput, UnbalancedParens,
// DuplicateVariable, UndefinedVariable or MalformedPenman. A bare symbol in
// target position is an edge to that variable when the graph defines it;
// otherwise a single lowercase letter with optional digits ("b", "p2") is
// an UndefinedVariable and anything else is a constant.
AmrGraph ParsePenman(std::string_view text);

// Depth-first from the root, edges in insertion order, four spaces of
// indentation per level, metadata lines first. Edges pointing against the
// traversal are written with the inverse role. Throws InvalidGraph.
std::string SerializePenman(const AmrGraph& graph);

// Exact structural equality up to renaming of variables.
bool IsIsomorphic(const AmrGraph& a, const AmrGraph& b);

// Rewrites every "X-of" edge between variables as the base role "X" with
// endpoints swapped. ":consist-of" is a primitive role and is left alone.
// Idempotent.
AmrGraph NormalizeInverseRoles(const AmrGraph& graph);

struct GraphStats {
  size_t node_count = 0;
  size_t edge_count = 0;       // variable-to-variable edges
  size_t attribute_count = 0;  // edges to constants
  size_t reentrancy_count = 0; // edge_count - (node_count - 1)
  size_t max_depth = 0;        // furthest undirected hop distance from root

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

GraphStats ComputeGraphStats(const AmrGraph& graph);

// One block of a multi-graph file: either a graph or the reason it failed.
struct AmrFileEntry {
  size_t first_line = 0;  // 1-based
  std::vector<std::string> metadata;
  std::string text;
  std::optional<AmrGraph> graph;
  std::string error;
};

// Blocks are separated by blank lines; leading "#" lines are metadata.
std::vector<AmrFileEntry> ParseAmrFile(std::string_view contents);

}  // namespace tlab

#endif  // TLAB_PENMAN_H_
