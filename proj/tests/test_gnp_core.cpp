#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "gnpbench/executor.hpp"
#include "gnpbench/genotype.hpp"
#include "gnpbench/tileworld.hpp"

using namespace gnp;

namespace {

NodeLibrary toy_library() {
  NodeLibrary lib;
  lib.judgments = {{0, 2, "J"}};
  lib.processings = {{1, "P"}};
  lib.program_size = 1;
  lib.idle_function = 1;
  return lib;
}

NodeLibrary random_library(Rng& rng) {
  NodeLibrary lib;
  const int nj = static_cast<int>(rng.below(5));  // 0..4 judgment functions
  const int np = 1 + static_cast<int>(rng.below(4));
  int id = 0;
  for (int j = 0; j < nj; ++j)
    lib.judgments.push_back({id++, 2 + static_cast<int>(rng.below(5)), "J" + std::to_string(j)});
  for (int p = 0; p < np; ++p) lib.processings.push_back({id++, "P" + std::to_string(p)});
  lib.program_size = 1 + static_cast<int>(rng.below(4));
  lib.idle_function = lib.processings[rng.below(static_cast<std::uint32_t>(np))].id;
  return lib;
}

}  // namespace

TEST_CASE("tileworld library with program size 3 yields the expected node layout") {
  const NodeLibrary lib = tileworld_library(3);
  Rng rng(42);
  const Individual ind = random_individual(lib, rng);

  CHECK(ind.nodes.size() == 34);  // 1 + 3 * (7 + 4)
  int judgments = 0, processings = 0;
  for (const NodeGene& g : ind.nodes) {
    if (g.type == NodeType::Judgment) ++judgments;
    if (g.type == NodeType::Processing) ++processings;
  }
  CHECK(judgments == 21);
  CHECK(processings == 12);
  CHECK(ind.nodes[0].type == NodeType::Start);
  CHECK(ind.nodes[0].branches.size() == 1);
  CHECK(validate(ind, lib).empty());

  const GraphShape shape(lib);
  CHECK(shape.total_branches() == 109);  // 1 + 3*(4*5 + 3*4) + 12
}

TEST_CASE("program size 1 with one judgment and one processing gives 3 nodes") {
  const NodeLibrary lib = toy_library();
  Rng rng(1);
  const Individual ind = random_individual(lib, rng);
  REQUIRE(ind.nodes.size() == 3);
  CHECK(ind.nodes[0].branches.size() == 1);
  CHECK(ind.nodes[1].branches.size() == 2);
  CHECK(ind.nodes[2].branches.size() == 1);
}

TEST_CASE("random individuals are deterministic in the rng stream") {
  const NodeLibrary lib = tileworld_library(3);
  Rng a(7), b(7), c(8);
  const Individual ia = random_individual(lib, a);
  const Individual ib = random_individual(lib, b);
  const Individual ic = random_individual(lib, c);
  CHECK(ia == ib);
  CHECK(ia != ic);
}

TEST_CASE("random individuals never target the start node") {
  const NodeLibrary lib = tileworld_library(2);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Individual ind = random_individual(lib, rng);
    for (const NodeGene& g : ind.nodes)
      for (const Branch& b : g.branches) {
        CHECK(b.target >= 1);
        CHECK(b.target < static_cast<int>(ind.nodes.size()));
      }
  }
}

TEST_CASE("validate flags branches targeting the start node") {
  const NodeLibrary lib = tileworld_library(1);
  Rng rng(5);
  Individual ind = random_individual(lib, rng);
  ind.nodes[3].branches[2].target = 0;
  const auto violations = validate(ind, lib);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("(3,2)") != std::string::npos);
  CHECK(violations[0].find("start") != std::string::npos);
}

TEST_CASE("validate flags wrong judgment arity") {
  const NodeLibrary lib = tileworld_library(1);
  Rng rng(5);
  Individual ind = random_individual(lib, rng);
  ind.nodes[1].branches.resize(3);  // WEF declares 5 outputs
  const auto violations = validate(ind, lib);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("3 branches") != std::string::npos);
  CHECK(violations[0].find("expected 5") != std::string::npos);
}

TEST_CASE("validate flags out-of-range targets and node count mismatches") {
  const NodeLibrary lib = tileworld_library(1);
  Rng rng(6);
  Individual ind = random_individual(lib, rng);
  ind.nodes[2].branches[0].target = 99;
  CHECK(validate(ind, lib).size() == 1);

  ind = random_individual(lib, rng);
  ind.nodes.pop_back();
  CHECK(!validate(ind, lib).empty());
}

TEST_CASE("validate accepts random individuals over 1000 random libraries") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const NodeLibrary lib = random_library(rng);
    const Individual ind = random_individual(lib, rng);
    CHECK(validate(ind, lib).empty());
  }
}

TEST_CASE("advance from a processing node returns its action and records its branch") {
  const NodeLibrary lib = tileworld_library(1);
  const GraphShape shape(lib);
  Rng rng(9);
  Individual ind = random_individual(lib, rng);
  // node 8 is the MF instance; send it to node 4
  ind.nodes[8].branches[0].target = 4;

  Cursor cursor{8};
  TransitRecord record(shape.total_branches());
  const int action = advance(
      ind, shape, cursor, [](int) -> int { FAIL("no judgment expected"); return 0; }, record);
  CHECK(action == kMoveForward);
  CHECK(cursor.node == 4);
  CHECK(record.count() == 1);
  CHECK(record.contains(shape.flat_branch({8, 0})));
}

TEST_CASE("advance walks judgments, records picked branches and stops at a processing node") {
  const NodeLibrary lib = tileworld_library(1);
  const GraphShape shape(lib);
  Rng rng(10);
  Individual ind = random_individual(lib, rng);
  // WEF instance is node 1, TR instance is node 9
  ind.nodes[1].branches[1].target = 9;
  ind.nodes[9].branches[0].target = 5;

  Cursor cursor{1};
  TransitRecord record(shape.total_branches());
  const int action = advance(
      ind, shape, cursor,
      [](int function_id) {
        CHECK(function_id == kWhatExistFront);
        return static_cast<int>(Occupancy::Tile);
      },
      record);
  CHECK(action == kTurnRight);
  CHECK(cursor.node == 5);
  CHECK(record.count() == 2);
  CHECK(record.contains(shape.flat_branch({1, 1})));
  CHECK(record.contains(shape.flat_branch({9, 0})));
}

TEST_CASE("advance entered at the start node records the start branch first") {
  const NodeLibrary lib = tileworld_library(1);
  const GraphShape shape(lib);
  Rng rng(11);
  Individual ind = random_individual(lib, rng);
  ind.nodes[0].branches[0].target = 10;  // straight to the TL instance
  ind.nodes[10].branches[0].target = 8;

  Cursor cursor;
  TransitRecord record(shape.total_branches());
  const int action = advance(ind, shape, cursor, [](int) { return 0; }, record);
  CHECK(action == kTurnLeft);
  CHECK(cursor.node == 8);
  CHECK(record.contains(shape.flat_branch({0, 0})));
  CHECK(record.contains(shape.flat_branch({10, 0})));
}

TEST_CASE("a judgment cycle hits the visit cap and falls back to the idle action") {
  const NodeLibrary lib = tileworld_library(3);
  const GraphShape shape(lib);
  Rng rng(12);
  Individual ind = random_individual(lib, rng);
  REQUIRE(ind.nodes.size() == 34);
  // nodes 1 and 2 are WEF instances; wire branch 0 into a 2-cycle
  ind.nodes[1].branches[0].target = 2;
  ind.nodes[2].branches[0].target = 1;

  Cursor cursor{1};
  TransitRecord record(shape.total_branches());
  int judge_calls = 0;
  const int action = advance(
      ind, shape, cursor,
      [&judge_calls](int) {
        ++judge_calls;
        return 0;
      },
      record);
  CHECK(action == kStay);
  CHECK(judge_calls == 34);
  CHECK(cursor.node == 1);  // left where the walk gave up
  CHECK(record.count() == 2);
  CHECK(record.contains(shape.flat_branch({1, 0})));
  CHECK(record.contains(shape.flat_branch({2, 0})));
}

TEST_CASE("advance faults when the judge picks a branch out of range") {
  const NodeLibrary lib = tileworld_library(1);
  const GraphShape shape(lib);
  Rng rng(13);
  Individual ind = random_individual(lib, rng);
  Cursor cursor{1};
  TransitRecord record(shape.total_branches());
  CHECK_THROWS_AS(advance(ind, shape, cursor, [](int) { return 5; }, record), std::logic_error);
}

namespace {

// Deterministic judge answers taken from a fixed script.
struct ScriptedJudge {
  const std::vector<int>* script;
  size_t calls = 0;

  int operator()(int function_id) {
    const int outputs = function_id <= kWhatExistBack ? 5 : 4;
    return (*script)[calls++ % script->size()] % outputs;
  }
};

}  // namespace

TEST_CASE("advance is pure and its record replays the walk") {
  const NodeLibrary lib = tileworld_library(2);
  const GraphShape shape(lib);
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Individual ind = random_individual(lib, rng);
    std::vector<int> script;
    for (int i = 0; i < 64; ++i) script.push_back(static_cast<int>(rng.below(4)));

    ScriptedJudge judge1{&script}, judge2{&script};
    Cursor c1, c2;
    TransitRecord r1(shape.total_branches()), r2(shape.total_branches());
    const int a1 = advance(ind, shape, c1, judge1, r1);
    const int a2 = advance(ind, shape, c2, judge2, r2);
    CHECK(a1 == a2);
    CHECK(c1.node == c2.node);
    CHECK(r1 == r2);

    // every recorded branch lies on the walk that the script reproduces
    std::set<int> walked;
    ScriptedJudge judge{&script};
    walked.insert(shape.flat_branch({0, 0}));
    int node = ind.nodes[0].branches[0].target;
    int visits = 0;
    while (ind.nodes[node].type == NodeType::Judgment && visits < static_cast<int>(ind.nodes.size())) {
      ++visits;
      const int pick = judge(ind.nodes[node].function_id);
      walked.insert(shape.flat_branch({node, pick}));
      node = ind.nodes[node].branches[pick].target;
    }
    if (ind.nodes[node].type == NodeType::Processing) walked.insert(shape.flat_branch({node, 0}));
    const std::vector<int> recorded = r1.to_flat();
    CHECK(std::set<int>(recorded.begin(), recorded.end()) == walked);
  }
}

TEST_CASE("genotype text round-trips bit-exactly") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const NodeLibrary lib = random_library(rng);
    const Individual ind = random_individual(lib, rng);
    const std::string text = to_text(ind);
    const Individual parsed = individual_from_text(text);
    CHECK(parsed == ind);
    CHECK(to_text(parsed) == text);
  }
}

TEST_CASE("genotype text layout is the documented one") {
  Individual ind;
  ind.nodes.push_back({NodeType::Start, -1, 0, {{2, 0}}});
  ind.nodes.push_back({NodeType::Judgment, 4, 0, {{2, 0}, {1, 0}}});
  ind.nodes.push_back({NodeType::Processing, 7, 0, {{1, 0}}});
  CHECK(to_text(ind) == "0 0 - 0 | 2:0\n1 1 4 0 | 2:0 1:0\n2 2 7 0 | 1:0\n");
}

TEST_CASE("malformed genotype text is rejected") {
  CHECK_THROWS(individual_from_text(""));
  CHECK_THROWS(individual_from_text("0 0 - 0\n"));            // missing separator
  CHECK_THROWS(individual_from_text("1 0 - 0 | 2:0\n"));      // index out of order
  CHECK_THROWS(individual_from_text("0 7 - 0 | 2:0\n"));      // bad node type
  CHECK_THROWS(individual_from_text("0 1 - 0 | 2:0\n"));      // '-' off the start node
  CHECK_THROWS(individual_from_text("0 0 - 0 | 2\n"));        // branch without delay
  CHECK_THROWS(individual_from_text("0 0 - 0 | two:0\n"));    // non-numeric target
  CHECK_THROWS(individual_from_text("0 0 - 0 |\n"));          // no branches
}

TEST_CASE("transit records merge as set union") {
  TransitRecord a(10), b(10);
  a.add(1);
  a.add(3);
  b.add(3);
  b.add(7);
  const TransitRecord u = TransitRecord::merged(a, b);
  CHECK(u.count() == 3);
  CHECK(u.contains(1));
  CHECK(u.contains(3));
  CHECK(u.contains(7));
  CHECK(!u.contains(0));
  CHECK(TransitRecord::full(10).count() == 10);
  CHECK(TransitRecord(10).empty());
}
