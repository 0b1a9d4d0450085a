#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gnpbench/genotype.hpp"

namespace gnp {

// Execution position inside one individual. Persists across agent steps.
struct Cursor {
  int node = 0;  // the start node
};

// The set of branches traversed so far, as a bitset over the dense branch
// index of a GraphShape. This is the eligible set of the simplified
// operators.
class TransitRecord {
 public:
  TransitRecord() = default;
  explicit TransitRecord(int total_branches)
      : bits_(total_branches), words_((total_branches + 63) / 64, 0) {}

  static TransitRecord full(int total_branches) {
    TransitRecord r(total_branches);
    for (int i = 0; i < total_branches; ++i) r.add(i);
    return r;
  }

  int capacity() const { return bits_; }

  void add(int flat) { words_[flat >> 6] |= std::uint64_t{1} << (flat & 63); }

  bool contains(int flat) const {
    return (words_[flat >> 6] >> (flat & 63)) & 1u;
  }

  void merge(const TransitRecord& other) {
    if (other.bits_ > bits_) {
      bits_ = other.bits_;
      words_.resize(other.words_.size(), 0);
    }
    for (size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
  }

  static TransitRecord merged(const TransitRecord& a, const TransitRecord& b) {
    TransitRecord r = a;
    r.merge(b);
    return r;
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += __builtin_popcountll(w);
    return c;
  }

  bool empty() const { return count() == 0; }

  std::vector<int> to_flat() const {
    std::vector<int> out;
    out.reserve(count());
    for (int i = 0; i < bits_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const TransitRecord&, const TransitRecord&) = default;

 private:
  int bits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Walks from the cursor through judgment nodes until a processing node is
// reached, recording every branch followed (the start node's branch and the
// processing node's outgoing branch included). Returns the processing
// function to execute and leaves the cursor at the processing node's branch
// target.
//
// Judgment outcomes depend on the environment, so a walk can cycle forever;
// after more judgment visits than the individual has nodes, the walk gives up
// and returns the library's idle function with the cursor left where it
// stopped.
//
// `judge` is called as judge(function_id) and must return a branch index
// below that function's output count; anything else is a programming error.
template <class Judge>
int advance(const Individual& ind, const GraphShape& shape, Cursor& cursor, Judge&& judge,
            TransitRecord& record) {
  const int node_count = static_cast<int>(ind.nodes.size());
  int node = cursor.node;

  if (ind.nodes[node].type == NodeType::Start) {
    record.add(shape.flat_branch({node, 0}));
    node = ind.nodes[node].branches[0].target;
  }

  int judgment_visits = 0;
  while (ind.nodes[node].type == NodeType::Judgment) {
    if (judgment_visits >= node_count) {
      cursor.node = node;
      return shape.idle_function();
    }
    ++judgment_visits;
    const NodeGene& gene = ind.nodes[node];
    const int pick = judge(gene.function_id);
    if (pick < 0 || pick >= static_cast<int>(gene.branches.size()))
      throw std::logic_error("judge returned branch index " + std::to_string(pick) + " for function " +
                             std::to_string(gene.function_id));
    record.add(shape.flat_branch({node, pick}));
    node = gene.branches[pick].target;
  }

  const NodeGene& proc = ind.nodes[node];
  record.add(shape.flat_branch({node, 0}));
  cursor.node = proc.branches[0].target;
  return proc.function_id;
}

}  // namespace gnp
