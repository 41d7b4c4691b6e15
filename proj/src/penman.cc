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

#include "tlab/penman.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "tlab/error.h"

namespace tlab {
namespace {

constexpr size_t kMaxNesting = 1000;
constexpr std::string_view kConsistOf = ":consist-of";

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool IsDelimiter(char c) {
  return IsSpace(c) || c == '(' || c == ')' || c == '"' || c == '/';
}

bool IsLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAlpha(char c) { return IsLower(c) || (c >= 'A' && c <= 'Z'); }

// Single lowercase letter followed by optional digits.
bool LooksLikeVariable(std::string_view symbol) {
  if (symbol.empty() || !IsLower(symbol[0])) return false;
  return std::all_of(symbol.begin() + 1, symbol.end(), IsDigit);
}

bool IsInverseRole(std::string_view role) {
  return role.size() > 4 && role.ends_with("-of") && role != kConsistOf;
}

std::string InvertRole(std::string_view role) {
  if (IsInverseRole(role)) return std::string(role.substr(0, role.size() - 3));
  return std::string(role) + "-of";
}

enum class TokenType { kLParen, kRParen, kSlash, kRole, kString, kSymbol, kEnd };

struct LexToken {
  TokenType type;
  std::string text;
  size_t position;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  LexToken Next() {
    while (pos_ < text_.size() && IsSpace(text_[pos_])) ++pos_;
    size_t start = pos_;
    if (pos_ == text_.size()) return {TokenType::kEnd, "", start};
    char c = text_[pos_];
    if (c == '(') return ++pos_, LexToken{TokenType::kLParen, "(", start};
    if (c == ')') return ++pos_, LexToken{TokenType::kRParen, ")", start};
    if (c == '/') return ++pos_, LexToken{TokenType::kSlash, "/", start};
    if (c == '"') {
      std::string value;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        value.push_back(text_[pos_++]);
      }
      if (pos_ == text_.size()) {
        throw PenmanError(ErrorKind::kMalformedPenman, start,
                          "unterminated string");
      }
      ++pos_;
      return {TokenType::kString, std::move(value), start};
    }
    while (pos_ < text_.size() && !IsDelimiter(text_[pos_])) ++pos_;
    std::string word(text_.substr(start, pos_ - start));
    TokenType type = word[0] == ':' ? TokenType::kRole : TokenType::kSymbol;
    return {type, std::move(word), start};
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

void CheckBalance(std::string_view text) {
  std::vector<size_t> open;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '"') {
      size_t start = i++;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\') ++i;
        ++i;
      }
      if (i >= text.size()) {
        // A string running to the end swallows any closing parens.
        throw PenmanError(open.empty() ? ErrorKind::kMalformedPenman
                                       : ErrorKind::kUnbalancedParens,
                          start, "unterminated string");
      }
    } else if (c == '(') {
      open.push_back(i);
    } else if (c == ')') {
      if (open.empty()) {
        throw PenmanError(ErrorKind::kUnbalancedParens, i, "unmatched ')'");
      }
      open.pop_back();
    }
  }
  if (!open.empty()) {
    throw PenmanError(ErrorKind::kUnbalancedParens, open.back(),
                      "unclosed '('");
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { Advance(); }

  AmrGraph Parse() {
    if (current_.type == TokenType::kEnd) {
      throw PenmanError(ErrorKind::kEmptyInput, 0, "no graph");
    }
    graph_.root = ParseNode(0);
    if (current_.type != TokenType::kEnd) {
      Fail("trailing content '" + current_.text + "'");
    }
    ResolveSymbols();
    return std::move(graph_);
  }

 private:
  void Advance() { current_ = lexer_.Next(); }

  [[noreturn]] void Fail(const std::string& why) const {
    throw PenmanError(ErrorKind::kMalformedPenman, current_.position, why);
  }

  std::string Expect(TokenType type, std::string_view what) {
    if (current_.type != type) {
      Fail("expected " + std::string(what) + ", found '" + current_.text +
           "'");
    }
    std::string text = std::move(current_.text);
    Advance();
    return text;
  }

  std::string ParseNode(size_t depth) {
    if (depth > kMaxNesting) Fail("nesting too deep");
    Expect(TokenType::kLParen, "'('");
    size_t var_position = current_.position;
    std::string variable = Expect(TokenType::kSymbol, "variable");
    Expect(TokenType::kSlash, "'/'");
    std::string concept_label = Expect(TokenType::kSymbol, "concept");
    if (!defined_.emplace(variable, graph_.nodes.size()).second) {
      throw PenmanError(ErrorKind::kDuplicateVariable, var_position,
                        "variable '" + variable + "'");
    }
    graph_.nodes.push_back({variable, std::move(concept_label)});

    while (current_.type == TokenType::kRole) {
      if (!IsValidRole(current_.text)) Fail("bad role '" + current_.text + "'");
      std::string role = std::move(current_.text);
      Advance();
      AmrEdge edge{variable, std::move(role), "", TargetKind::kVariable};
      size_t index = graph_.edges.size();
      graph_.edges.push_back(edge);
      switch (current_.type) {
        case TokenType::kLParen:
          graph_.edges[index].target = ParseNode(depth + 1);
          break;
        case TokenType::kString:
          graph_.edges[index].target = std::move(current_.text);
          graph_.edges[index].kind = TargetKind::kString;
          Advance();
          break;
        case TokenType::kSymbol:
          graph_.edges[index].target = std::move(current_.text);
          graph_.edges[index].kind = TargetKind::kSymbol;
          symbol_positions_.emplace(index, current_.position);
          Advance();
          break;
        default:
          Fail("expected role target, found '" + current_.text + "'");
      }
    }
    Expect(TokenType::kRParen, "')' or role");
    return variable;
  }

  void ResolveSymbols() {
    for (const auto& [index, position] : symbol_positions_) {
      AmrEdge& edge = graph_.edges[index];
      if (defined_.contains(edge.target)) {
        edge.kind = TargetKind::kVariable;
      } else if (LooksLikeVariable(edge.target)) {
        throw PenmanError(ErrorKind::kUndefinedVariable, position,
                          "variable '" + edge.target + "'");
      }
    }
  }

  Lexer lexer_;
  LexToken current_;
  AmrGraph graph_;
  std::unordered_map<std::string, size_t> defined_;
  std::map<size_t, size_t> symbol_positions_;  // edge index -> offset
};

std::string QuoteString(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::unordered_map<std::string, size_t> IndexNodes(const AmrGraph& graph) {
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    index.emplace(graph.nodes[i].variable, i);
  }
  return index;
}

class Writer {
 public:
  explicit Writer(const AmrGraph& graph)
      : graph_(graph),
        index_(IndexNodes(graph)),
        incident_(graph.nodes.size()),
        expanded_(graph.nodes.size(), false),
        emitted_(graph.edges.size(), false),
        forward_(graph.nodes.size(), false) {
    for (size_t e = 0; e < graph.edges.size(); ++e) {
      const AmrEdge& edge = graph.edges[e];
      size_t source = index_.at(edge.source);
      incident_[source].push_back(e);
      if (!edge.is_constant()) {
        size_t target = index_.at(edge.target);
        if (target != source) incident_[target].push_back(e);
      }
    }
    for (auto& list : incident_) std::sort(list.begin(), list.end());

    // Nodes reachable from the root along edge direction.
    std::vector<size_t> stack = {index_.at(graph.root)};
    forward_[stack.back()] = true;
    while (!stack.empty()) {
      size_t node = stack.back();
      stack.pop_back();
      for (size_t e : incident_[node]) {
        const AmrEdge& edge = graph.edges[e];
        if (edge.is_constant() || edge.source != graph.nodes[node].variable) {
          continue;
        }
        size_t target = index_.at(edge.target);
        if (!forward_[target]) {
          forward_[target] = true;
          stack.push_back(target);
        }
      }
    }
  }

  std::string Write() {
    std::string out;
    for (const std::string& line : graph_.metadata) {
      out += line;
      out += '\n';
    }
    Expand(index_.at(graph_.root), 0, out);
    return out;
  }

 private:
  void Expand(size_t node, size_t depth, std::string& out) {
    expanded_[node] = true;
    const AmrNode& n = graph_.nodes[node];
    out += "(" + n.variable + " / " + n.concept_label;
    for (size_t e : incident_[node]) {
      if (emitted_[e]) continue;
      const AmrEdge& edge = graph_.edges[e];
      std::string role;
      size_t other;
      if (edge.source == n.variable) {
        role = edge.role;
        if (edge.is_constant()) {
          emitted_[e] = true;
          NewLine(depth + 1, out);
          out += role + " " +
                 (edge.kind == TargetKind::kString ? QuoteString(edge.target)
                                                   : edge.target);
          continue;
        }
        other = index_.at(edge.target);
      } else {
        other = index_.at(edge.source);
        if (forward_[other]) continue;  // written from its source
        role = InvertRole(edge.role);
      }
      emitted_[e] = true;
      NewLine(depth + 1, out);
      out += role + " ";
      if (expanded_[other]) {
        out += graph_.nodes[other].variable;
      } else {
        Expand(other, depth + 1, out);
      }
    }
    out += ")";
  }

  static void NewLine(size_t depth, std::string& out) {
    out += '\n';
    out.append(4 * depth, ' ');
  }

  const AmrGraph& graph_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<std::vector<size_t>> incident_;
  std::vector<bool> expanded_;
  std::vector<bool> emitted_;
  std::vector<bool> forward_;
};

// Integer-indexed view used by the isomorphism search.
struct IndexedGraph {
  size_t root = 0;
  std::vector<std::string> concepts;
  std::vector<std::vector<std::string>> constants;  // per node, sorted
  std::map<std::pair<size_t, size_t>, std::vector<std::string>> roles;
  std::vector<std::vector<std::pair<std::string, size_t>>> out, in;
  std::vector<std::vector<size_t>> neighbors;
  size_t variable_edges = 0;
  size_t constant_edges = 0;

  explicit IndexedGraph(const AmrGraph& graph) {
    auto index = IndexNodes(graph);
    size_t n = graph.nodes.size();
    root = index.at(graph.root);
    constants.resize(n);
    out.resize(n);
    in.resize(n);
    neighbors.resize(n);
    for (const AmrNode& node : graph.nodes) concepts.push_back(node.concept_label);
    for (const AmrEdge& edge : graph.edges) {
      size_t s = index.at(edge.source);
      if (edge.is_constant()) {
        ++constant_edges;
        constants[s].push_back(edge.role + '\x1f' +
                               (edge.kind == TargetKind::kString ? "s" : "y") +
                               '\x1f' + edge.target);
        continue;
      }
      ++variable_edges;
      size_t t = index.at(edge.target);
      roles[{s, t}].push_back(edge.role);
      out[s].emplace_back(edge.role, t);
      in[t].emplace_back(edge.role, s);
      neighbors[s].push_back(t);
      neighbors[t].push_back(s);
    }
    for (auto& list : constants) std::sort(list.begin(), list.end());
    for (auto& [pair, list] : roles) std::sort(list.begin(), list.end());
    for (auto& list : neighbors) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  const std::vector<std::string>* Roles(size_t s, size_t t) const {
    auto it = roles.find({s, t});
    return it == roles.end() ? nullptr : &it->second;
  }
};

void AppendField(std::string& sig, std::string_view field) {
  sig += std::to_string(field.size());
  sig += ':';
  sig += field;
}

// Colour refinement over both graphs with a shared palette, so equal
// colours mean equal local structure.
std::pair<std::vector<int>, std::vector<int>> RefineColours(
    const IndexedGraph& a, const IndexedGraph& b) {
  auto initial = [](const IndexedGraph& g) {
    std::vector<std::string> sigs(g.concepts.size());
    for (size_t v = 0; v < sigs.size(); ++v) {
      AppendField(sigs[v], v == g.root ? "R" : "-");
      AppendField(sigs[v], g.concepts[v]);
      for (const std::string& c : g.constants[v]) AppendField(sigs[v], c);
    }
    return sigs;
  };
  auto paint = [](const std::vector<std::string>& sa,
                  const std::vector<std::string>& sb) {
    std::map<std::string, int> palette;
    for (const auto& s : sa) palette.emplace(s, 0);
    for (const auto& s : sb) palette.emplace(s, 0);
    int next = 0;
    for (auto& [sig, colour] : palette) colour = next++;
    std::vector<int> ca, cb;
    for (const auto& s : sa) ca.push_back(palette.at(s));
    for (const auto& s : sb) cb.push_back(palette.at(s));
    return std::make_tuple(std::move(ca), std::move(cb), palette.size());
  };
  auto refine = [](const IndexedGraph& g, const std::vector<int>& colour) {
    std::vector<std::string> sigs(colour.size());
    for (size_t v = 0; v < colour.size(); ++v) {
      std::vector<std::string> parts;
      for (const auto& [role, t] : g.out[v]) {
        parts.push_back(">" + role + "#" + std::to_string(colour[t]));
      }
      for (const auto& [role, s] : g.in[v]) {
        parts.push_back("<" + role + "#" + std::to_string(colour[s]));
      }
      std::sort(parts.begin(), parts.end());
      AppendField(sigs[v], std::to_string(colour[v]));
      for (const auto& p : parts) AppendField(sigs[v], p);
    }
    return sigs;
  };

  auto [ca, cb, count] = paint(initial(a), initial(b));
  while (true) {
    auto [na, nb, next_count] = paint(refine(a, ca), refine(b, cb));
    ca = std::move(na);
    cb = std::move(nb);
    if (next_count == count) break;
    count = next_count;
  }
  return {ca, cb};
}

class IsomorphismSearch {
 public:
  IsomorphismSearch(const IndexedGraph& a, const IndexedGraph& b,
                    std::vector<int> colour_a, std::vector<int> colour_b)
      : a_(a),
        b_(b),
        colour_a_(std::move(colour_a)),
        colour_b_(std::move(colour_b)),
        forward_(a.concepts.size(), kUnset),
        backward_(b.concepts.size(), kUnset) {
    // Breadth-first order from the root keeps each step adjacent to an
    // already mapped node.
    std::vector<bool> seen(a.concepts.size(), false);
    std::deque<size_t> queue = {a.root};
    seen[a.root] = true;
    while (!queue.empty()) {
      size_t v = queue.front();
      queue.pop_front();
      order_.push_back(v);
      for (size_t w : a.neighbors[v]) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    for (size_t v = 0; v < seen.size(); ++v) {
      if (!seen[v]) order_.push_back(v);
    }
  }

  bool Run() { return Extend(0); }

 private:
  static constexpr size_t kUnset = static_cast<size_t>(-1);

  bool SameRoles(size_t u1, size_t w1, size_t u2, size_t w2) const {
    const auto* ra = a_.Roles(u1, w1);
    const auto* rb = b_.Roles(u2, w2);
    if (!ra || !rb) return !ra && !rb;
    return *ra == *rb;
  }

  bool Consistent(size_t u, size_t v) const {
    if (!SameRoles(u, u, v, v)) return false;
    for (size_t w : a_.neighbors[u]) {
      size_t mapped = forward_[w];
      if (w == u || mapped == kUnset) continue;
      if (!SameRoles(u, w, v, mapped) || !SameRoles(w, u, mapped, v)) {
        return false;
      }
    }
    for (size_t x : b_.neighbors[v]) {
      if (x == v) continue;
      size_t mapped = backward_[x];
      if (mapped == kUnset) continue;
      if (!SameRoles(u, mapped, v, x) || !SameRoles(mapped, u, x, v)) {
        return false;
      }
    }
    return true;
  }

  bool Extend(size_t step) {
    if (step == order_.size()) return true;
    size_t u = order_[step];
    for (size_t v = 0; v < colour_b_.size(); ++v) {
      if (backward_[v] != kUnset || colour_b_[v] != colour_a_[u]) continue;
      if (!Consistent(u, v)) continue;
      forward_[u] = v;
      backward_[v] = u;
      if (Extend(step + 1)) return true;
      forward_[u] = kUnset;
      backward_[v] = kUnset;
    }
    return false;
  }

  const IndexedGraph& a_;
  const IndexedGraph& b_;
  std::vector<int> colour_a_, colour_b_;
  std::vector<size_t> forward_, backward_;
  std::vector<size_t> order_;
};

}  // namespace

const AmrNode* AmrGraph::FindNode(std::string_view variable) const {
  for (const AmrNode& node : nodes) {
    if (node.variable == variable) return &node;
  }
  return nullptr;
}

std::vector<std::string> AmrGraph::Constants() const {
  std::vector<std::string> values;
  for (const AmrEdge& edge : edges) {
    if (edge.is_constant()) values.push_back(edge.target);
  }
  return values;
}

bool IsValidRole(std::string_view role) {
  if (role.size() < 2 || role[0] != ':' || !IsAlpha(role[1])) return false;
  return std::all_of(role.begin() + 2, role.end(), [](char c) {
    return IsAlpha(c) || IsDigit(c) || c == '-' || c == '_';
  });
}

void ValidateGraph(const AmrGraph& graph) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorKind::kInvalidGraph, why);
  };
  if (graph.nodes.empty()) fail("graph has no nodes");
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    const AmrNode& node = graph.nodes[i];
    if (node.variable.empty() || node.concept_label.empty()) {
      fail("node " + std::to_string(i) + " lacks a variable or concept");
    }
    if (!index.emplace(node.variable, i).second) {
      fail("variable '" + node.variable + "' defined twice");
    }
  }
  if (!index.contains(graph.root)) fail("root '" + graph.root + "' undefined");

  std::vector<std::vector<size_t>> adjacency(graph.nodes.size());
  for (const AmrEdge& edge : graph.edges) {
    if (!IsValidRole(edge.role)) fail("bad role '" + edge.role + "'");
    auto source = index.find(edge.source);
    if (source == index.end()) {
      fail("edge source '" + edge.source + "' undefined");
    }
    if (edge.is_constant()) continue;
    auto target = index.find(edge.target);
    if (target == index.end()) {
      fail("edge target '" + edge.target + "' undefined");
    }
    adjacency[source->second].push_back(target->second);
    adjacency[target->second].push_back(source->second);
  }

  std::vector<bool> seen(graph.nodes.size(), false);
  std::vector<size_t> stack = {index.at(graph.root)};
  seen[stack.back()] = true;
  size_t reached = 1;
  while (!stack.empty()) {
    size_t v = stack.back();
    stack.pop_back();
    for (size_t w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != graph.nodes.size()) fail("graph is disconnected");
}

AmrGraph ParsePenman(std::string_view text) {
  std::vector<std::string> metadata;
  // Leading comment lines are metadata.
  while (true) {
    size_t first = text.find_first_not_of(" \t\r\n\v\f");
    if (first == std::string_view::npos || text[first] != '#') break;
    size_t end = text.find('\n', first);
    std::string_view line = text.substr(
        first, end == std::string_view::npos ? std::string_view::npos
                                             : end - first);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    metadata.emplace_back(line);
    text = end == std::string_view::npos ? std::string_view{}
                                         : text.substr(end + 1);
  }
  if (text.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos) {
    throw PenmanError(ErrorKind::kEmptyInput, 0, "no graph");
  }
  CheckBalance(text);
  AmrGraph graph = Parser(text).Parse();
  graph.metadata = std::move(metadata);
  return graph;
}

std::string SerializePenman(const AmrGraph& graph) {
  ValidateGraph(graph);
  return Writer(graph).Write();
}

bool IsIsomorphic(const AmrGraph& a, const AmrGraph& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) {
    return false;
  }
  IndexedGraph ia(a), ib(b);
  if (ia.variable_edges != ib.variable_edges) return false;
  auto [ca, cb] = RefineColours(ia, ib);
  std::vector<int> ha = ca, hb = cb;
  std::sort(ha.begin(), ha.end());
  std::sort(hb.begin(), hb.end());
  if (ha != hb) return false;
  return IsomorphismSearch(ia, ib, std::move(ca), std::move(cb)).Run();
}

AmrGraph NormalizeInverseRoles(const AmrGraph& graph) {
  AmrGraph normalized = graph;
  for (AmrEdge& edge : normalized.edges) {
    if (edge.is_constant() || !IsInverseRole(edge.role)) continue;
    std::string base = edge.role.substr(0, edge.role.size() - 3);
    if (IsInverseRole(base)) continue;  // "-of-of" has no unambiguous base
    edge.role = std::move(base);
    std::swap(edge.source, edge.target);
  }
  return normalized;
}

GraphStats ComputeGraphStats(const AmrGraph& graph) {
  GraphStats stats;
  stats.node_count = graph.nodes.size();
  auto index = IndexNodes(graph);
  std::vector<std::vector<size_t>> adjacency(graph.nodes.size());
  for (const AmrEdge& edge : graph.edges) {
    if (edge.is_constant()) {
      ++stats.attribute_count;
      continue;
    }
    ++stats.edge_count;
    size_t s = index.at(edge.source), t = index.at(edge.target);
    adjacency[s].push_back(t);
    adjacency[t].push_back(s);
  }
  if (stats.node_count > 0 && stats.edge_count + 1 > stats.node_count) {
    stats.reentrancy_count = stats.edge_count + 1 - stats.node_count;
  }
  std::vector<size_t> distance(graph.nodes.size(), SIZE_MAX);
  std::deque<size_t> queue;
  if (auto root = index.find(graph.root); root != index.end()) {
    distance[root->second] = 0;
    queue.push_back(root->second);
  }
  while (!queue.empty()) {
    size_t v = queue.front();
    queue.pop_front();
    stats.max_depth = std::max(stats.max_depth, distance[v]);
    for (size_t w : adjacency[v]) {
      if (distance[w] == SIZE_MAX) {
        distance[w] = distance[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return stats;
}

std::vector<AmrFileEntry> ParseAmrFile(std::string_view contents) {
  std::vector<AmrFileEntry> entries;
  AmrFileEntry block;
  bool in_block = false;
  auto finish = [&] {
    if (in_block && !block.text.empty()) {
      try {
        block.graph = ParsePenman(block.text);
        block.graph->metadata = block.metadata;
      } catch (const Error& e) {
        block.error = e.what();
      }
      entries.push_back(std::move(block));
    }
    block = AmrFileEntry{};
    in_block = false;
  };

  size_t start = 0, line_number = 0;
  while (start <= contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    size_t first = line.find_first_not_of(" \t\v\f");
    if (first == std::string_view::npos) {
      finish();
      if (end == contents.size()) break;
      continue;
    }
    if (!in_block) {
      in_block = true;
      block.first_line = line_number;
    }
    if (line[first] == '#' && block.text.empty()) {
      block.metadata.emplace_back(line.substr(first));
    } else {
      if (!block.text.empty()) block.text += '\n';
      block.text.append(line);
    }
    if (end == contents.size()) break;
  }
  finish();
  return entries;
}

}  // namespace tlab
