#include "gnpbench/genotype.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gnp {

std::vector<std::string> check_library(const NodeLibrary& lib) {
  std::vector<std::string> problems;
  if (lib.program_size < 1) problems.push_back("program_size must be >= 1");
  if (lib.judgments.empty() && lib.processings.empty())
    problems.push_back("library declares no functions");
  if (lib.processings.empty()) problems.push_back("library declares no processing functions");

  std::set<int> ids;
  for (const auto& j : lib.judgments) {
    if (j.outputs < 2)
      problems.push_back("judgment function " + std::to_string(j.id) + " has fewer than 2 outputs");
    if (!ids.insert(j.id).second)
      problems.push_back("duplicate function id " + std::to_string(j.id));
  }
  bool idle_found = false;
  for (const auto& p : lib.processings) {
    if (!ids.insert(p.id).second)
      problems.push_back("duplicate function id " + std::to_string(p.id));
    if (p.id == lib.idle_function) idle_found = true;
  }
  if (!lib.processings.empty() && !idle_found)
    problems.push_back("idle_function does not name a processing function");
  return problems;
}

GraphShape::GraphShape(const NodeLibrary& lib) {
  if (auto problems = check_library(lib); !problems.empty())
    throw std::invalid_argument("invalid node library: " + problems.front());

  const int ps = lib.program_size;
  type_.push_back(NodeType::Start);
  function_.push_back(-1);
  branch_count_.push_back(1);
  for (const auto& j : lib.judgments) {
    for (int k = 0; k < ps; ++k) {
      type_.push_back(NodeType::Judgment);
      function_.push_back(j.id);
      branch_count_.push_back(j.outputs);
    }
  }
  for (const auto& p : lib.processings) {
    for (int k = 0; k < ps; ++k) {
      type_.push_back(NodeType::Processing);
      function_.push_back(p.id);
      branch_count_.push_back(1);
    }
  }
  first_branch_.resize(type_.size());
  int acc = 0;
  for (size_t i = 0; i < type_.size(); ++i) {
    first_branch_[i] = acc;
    acc += branch_count_[i];
  }
  total_branches_ = acc;
  idle_function_ = lib.idle_function;
}

BranchId GraphShape::branch_at(int flat) const {
  // binary search over the prefix sums
  int lo = 0, hi = node_count() - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (first_branch_[mid] <= flat)
      lo = mid;
    else
      hi = mid - 1;
  }
  return BranchId{lo, flat - first_branch_[lo]};
}

Individual random_individual(const NodeLibrary& lib, Rng& rng) {
  const GraphShape shape(lib);
  const int n = shape.node_count();
  Individual ind;
  ind.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    NodeGene& g = ind.nodes[i];
    g.type = shape.type_of(i);
    g.function_id = shape.function_of(i);
    g.node_delay = 0;
    g.branches.resize(shape.branch_count(i));
    for (auto& b : g.branches) {
      b.target = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(n - 1)));
      b.transition_delay = 0;
    }
  }
  return ind;
}

std::vector<std::string> validate(const Individual& ind, const NodeLibrary& lib) {
  std::vector<std::string> violations;
  GraphShape shape(lib);
  const int n = shape.node_count();
  if (static_cast<int>(ind.nodes.size()) != n) {
    violations.push_back("node count " + std::to_string(ind.nodes.size()) + " differs from expected " +
                         std::to_string(n));
  }
  const int limit = std::min<int>(n, static_cast<int>(ind.nodes.size()));
  for (int i = 0; i < limit; ++i) {
    const NodeGene& g = ind.nodes[i];
    if (g.type != shape.type_of(i))
      violations.push_back("node " + std::to_string(i) + " has wrong type for its position");
    if (g.function_id != shape.function_of(i))
      violations.push_back("node " + std::to_string(i) + " has function " + std::to_string(g.function_id) +
                           ", expected " + std::to_string(shape.function_of(i)));
    if (static_cast<int>(g.branches.size()) != shape.branch_count(i))
      violations.push_back("node " + std::to_string(i) + " has " + std::to_string(g.branches.size()) +
                           " branches, expected " + std::to_string(shape.branch_count(i)));
    for (size_t j = 0; j < g.branches.size(); ++j) {
      const int t = g.branches[j].target;
      if (t == 0)
        violations.push_back("branch (" + std::to_string(i) + "," + std::to_string(j) +
                             ") targets the start node");
      else if (t < 0 || t >= static_cast<int>(ind.nodes.size()))
        violations.push_back("branch (" + std::to_string(i) + "," + std::to_string(j) +
                             ") targets out-of-range node " + std::to_string(t));
      if (g.branches[j].transition_delay < 0)
        violations.push_back("branch (" + std::to_string(i) + "," + std::to_string(j) +
                             ") has negative transition delay");
    }
    if (g.node_delay < 0)
      violations.push_back("node " + std::to_string(i) + " has negative delay");
  }
  return violations;
}

std::string to_text(const Individual& ind) {
  std::string out;
  for (size_t i = 0; i < ind.nodes.size(); ++i) {
    const NodeGene& g = ind.nodes[i];
    out += std::to_string(i);
    out += ' ';
    out += std::to_string(static_cast<int>(g.type));
    out += ' ';
    out += g.type == NodeType::Start ? std::string("-") : std::to_string(g.function_id);
    out += ' ';
    out += std::to_string(g.node_delay);
    out += " |";
    for (const Branch& b : g.branches) {
      out += ' ';
      out += std::to_string(b.target);
      out += ':';
      out += std::to_string(b.transition_delay);
    }
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void bad_genotype(size_t line, const std::string& what) {
  throw std::runtime_error("genotype line " + std::to_string(line) + ": " + what);
}

int parse_int(const std::string& tok, size_t line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) bad_genotype(line, "bad integer '" + tok + "'");
  return value;
}

}  // namespace

Individual individual_from_text(const std::string& text) {
  Individual ind;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) bad_genotype(lineno, "empty line");
    std::istringstream ls(line);
    std::string idx_tok, nt_tok, nf_tok, d_tok, bar;
    if (!(ls >> idx_tok >> nt_tok >> nf_tok >> d_tok >> bar) || bar != "|")
      bad_genotype(lineno, "expected 'index NT NF d |'");
    if (parse_int(idx_tok, lineno) != static_cast<int>(ind.nodes.size()))
      bad_genotype(lineno, "node index out of order");
    NodeGene g;
    const int nt = parse_int(nt_tok, lineno);
    if (nt < 0 || nt > 2) bad_genotype(lineno, "node type must be 0, 1 or 2");
    g.type = static_cast<NodeType>(nt);
    if (nf_tok == "-") {
      if (g.type != NodeType::Start) bad_genotype(lineno, "only the start node may omit its function");
      g.function_id = -1;
    } else {
      g.function_id = parse_int(nf_tok, lineno);
    }
    g.node_delay = parse_int(d_tok, lineno);
    std::string btok;
    while (ls >> btok) {
      const auto colon = btok.find(':');
      if (colon == std::string::npos) bad_genotype(lineno, "branch must be target:delay");
      Branch b;
      b.target = parse_int(btok.substr(0, colon), lineno);
      b.transition_delay = parse_int(btok.substr(colon + 1), lineno);
      g.branches.push_back(b);
    }
    if (g.branches.empty()) bad_genotype(lineno, "node has no branches");
    ind.nodes.push_back(std::move(g));
  }
  if (ind.nodes.empty()) throw std::runtime_error("genotype text is empty");
  return ind;
}

}  // namespace gnp
