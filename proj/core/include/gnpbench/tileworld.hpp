#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gnpbench/executor.hpp"
#include "gnpbench/genotype.hpp"

namespace gnp {

// Function ids of the Tileworld node set.
enum TileworldFunction : int {
  kWhatExistFront = 0,
  kWhatExistRight = 1,
  kWhatExistLeft = 2,
  kWhatExistBack = 3,
  kNearestTileDirection = 4,
  kSecondNearestTileDirection = 5,
  kNearestHoleDirection = 6,
  kMoveForward = 7,
  kTurnRight = 8,
  kTurnLeft = 9,
  kStay = 10,
};

// Output order of the what-exist judgments.
enum class Occupancy : int { Agent = 0, Tile = 1, Hole = 2, Obstacle = 3, Nothing = 4 };

// Output order of the direction judgments, relative to the agent's heading.
enum class RelativeDirection : int { Forward = 0, Backward = 1, Right = 2, Left = 3 };

// The standard seven-judgment / four-processing Tileworld node set.
NodeLibrary tileworld_library(int program_size);
const char* tileworld_function_name(int function_id);

enum class Heading : int { North = 0, East = 1, South = 2, West = 3 };

struct Pos {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pos&, const Pos&) = default;
};

inline int manhattan(Pos a, Pos b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

// Unit offset of a heading; y grows downwards, so North is (0,-1).
Pos heading_step(Heading h);
Heading rotate_right(Heading h);
Heading rotate_left(Heading h);
Heading opposite(Heading h);

struct AgentState {
  Pos pos;
  Heading heading = Heading::North;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

enum class Cell : char { Floor, Obstacle, Tile, Hole };

// A parsed map. Agent cells are floor underneath; agents are listed in
// row-major scan order.
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;  // row-major
  std::vector<AgentState> agents;

  Cell at(int x, int y) const { return cells[static_cast<size_t>(y) * width + x]; }
  int tile_count() const;
  int hole_count() const;
};

struct MapParseError : std::runtime_error {
  MapParseError(int line, int column, const std::string& what)
      : std::runtime_error("map line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

// Characters: '.' floor, '#' obstacle, 'T' tile, 'H' hole, '^v<>' agents
// facing north/south/west/east. Any other byte is an error. Rows must be
// rectangular; at least one agent, tile and hole are required.
GridMap parse_map(const std::string& text);
GridMap load_map(const std::string& path);

// Mutable episode state. Obstacles and dimensions never change; tiles keep
// their identity while being pushed so per-tile distances can be tracked.
struct WorldState {
  explicit WorldState(const GridMap& map);

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> obstacles;  // row-major flags

  struct TrackedTile {
    Pos pos;
    bool dropped = false;

    friend bool operator==(const TrackedTile&, const TrackedTile&) = default;
  };
  std::vector<TrackedTile> tiles;
  std::vector<Pos> holes;
  std::vector<AgentState> agents;

  int steps_taken = 0;  // full rounds completed or in progress at episode end
  int dropped = 0;

  bool in_bounds(Pos p) const { return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height; }
  bool obstacle_at(Pos p) const { return obstacles[static_cast<size_t>(p.y) * width + p.x] != 0; }
  int tile_index_at(Pos p) const;   // -1 when empty
  int hole_index_at(Pos p) const;   // -1 when empty
  int agent_index_at(Pos p) const;  // -1 when empty
  // Out-of-bounds reads as Obstacle.
  Occupancy occupancy(Pos p) const;

  int live_tile_count() const;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

// Evaluates one judgment function for one agent and returns the branch index
// in the declared output order. Passing a processing function is a
// programming error.
int judge(const WorldState& world, int agent_index, int function_id);

// Executes one processing function for one agent, in place. Move-forward
// physics: floor ahead moves the agent; a tile ahead is pushed when the cell
// beyond it is floor, dropped when the cell beyond is a hole (tile and hole
// both disappear), and blocks otherwise; obstacles, holes, other agents and
// the map edge block. Blocked moves change nothing but still consume the
// agent's turn.
void apply_action(WorldState& world, int agent_index, int function_id);

struct TileDistances {
  int initial = 0;  // to the nearest hole at episode start
  int final = 0;    // to the nearest remaining hole at episode end; 0 once dropped

  friend bool operator==(const TileDistances&, const TileDistances&) = default;
};

struct EpisodeResult {
  int dropped = 0;        // DT
  int steps_taken = 0;    // TS, in full rounds
  int initial_steps = 0;  // IS
  std::vector<TileDistances> per_tile;
  std::vector<TransitRecord> transits;  // aligned with the group's members

  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

struct FitnessWeights {
  double w1 = 100.0;
  double w2 = 1.0;
  double w3 = 20.0;
};

// f = w1*DT + w2*(IS - TS) + w3 * sum_t (ID_t - FD_t)
double fitness(const EpisodeResult& result, const FitnessWeights& weights);

enum class GraphAssignment { Shared, PerAgent };

// Runs one deterministic episode. Agents act once each, in index order, per
// round; the episode ends when every tile is dropped (recording the round in
// progress) or after initial_steps rounds. Shared assignment runs every agent
// on group[0] with its own cursor and a single merged transit record;
// per-agent assignment pairs agent i with group[i].
EpisodeResult run_episode(const std::vector<Individual>& group, GraphAssignment assignment,
                          const GridMap& map, int initial_steps, const GraphShape& shape);

}  // namespace gnp
