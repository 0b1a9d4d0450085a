#pragma once

#include <string>
#include <vector>

#include "gnpbench/rng.hpp"

namespace gnp {

// Node types as stored in the genotype: 0 start, 1 judgment, 2 processing.
enum class NodeType : int { Start = 0, Judgment = 1, Processing = 2 };

// One outgoing edge. The target is the evolvable unit; the transition delay
// is carried in the genotype but fixed to zero in this project.
struct Branch {
  int target = 0;
  int transition_delay = 0;

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct NodeGene {
  NodeType type = NodeType::Start;
  int function_id = -1;  // -1 on the start node
  int node_delay = 0;
  std::vector<Branch> branches;

  friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

// A directed-graph program: one start node plus a fixed set of judgment and
// processing node instances. Only branch targets change under evolution.
struct Individual {
  std::vector<NodeGene> nodes;

  friend bool operator==(const Individual&, const Individual&) = default;
};

// Names the j-th branch of node i.
struct BranchId {
  int node = 0;
  int branch = 0;

  friend bool operator==(const BranchId&, const BranchId&) = default;
  friend auto operator<=>(const BranchId&, const BranchId&) = default;
};

struct JudgmentFunction {
  int id = 0;
  int outputs = 2;
  std::string name;
};

struct ProcessingFunction {
  int id = 0;
  std::string name;
};

// The fixed function set plus the per-function instance count (program size).
// `idle_function` is the processing function executed when a graph walk hits
// the judgment-visit cap without reaching a processing node.
struct NodeLibrary {
  std::vector<JudgmentFunction> judgments;
  std::vector<ProcessingFunction> processings;
  int program_size = 1;
  int idle_function = -1;
};

// Empty result means the library is usable.
std::vector<std::string> check_library(const NodeLibrary& lib);

// Canonical node layout shared by every individual built from one library:
// start at index 0, then program_size consecutive instances of each judgment
// function in library order, then processing functions likewise. Also
// provides a dense index over all branches for transit bookkeeping.
class GraphShape {
 public:
  explicit GraphShape(const NodeLibrary& lib);

  int node_count() const { return static_cast<int>(type_.size()); }
  NodeType type_of(int node) const { return type_[node]; }
  int function_of(int node) const { return function_[node]; }
  int branch_count(int node) const { return branch_count_[node]; }
  int idle_function() const { return idle_function_; }

  int total_branches() const { return total_branches_; }
  int flat_branch(BranchId id) const { return first_branch_[id.node] + id.branch; }
  BranchId branch_at(int flat) const;

 private:
  std::vector<NodeType> type_;
  std::vector<int> function_;
  std::vector<int> branch_count_;
  std::vector<int> first_branch_;
  int total_branches_ = 0;
  int idle_function_ = -1;
};

// Fresh individual with every branch target (including the start node's)
// drawn uniformly from all non-start nodes.
Individual random_individual(const NodeLibrary& lib, Rng& rng);

// Every deviation from the canonical layout and branch invariants, as
// human-readable messages. Empty means structurally valid.
std::vector<std::string> validate(const Individual& ind, const NodeLibrary& lib);

// Plain-text genotype, one line per node:
//   index NT NF d | target:dij target:dij ...
// NF is `-` on the start node. Round-trips bit-exactly.
std::string to_text(const Individual& ind);
Individual individual_from_text(const std::string& text);

}  // namespace gnp
