#include "gnpbench/tileworld.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace gnp {

NodeLibrary tileworld_library(int program_size) {
  NodeLibrary lib;
  lib.judgments = {
      {kWhatExistFront, 5, "WEF"},
      {kWhatExistRight, 5, "WER"},
      {kWhatExistLeft, 5, "WEL"},
      {kWhatExistBack, 5, "WEB"},
      {kNearestTileDirection, 4, "NTD"},
      {kSecondNearestTileDirection, 4, "SNTD"},
      {kNearestHoleDirection, 4, "NHD"},
  };
  lib.processings = {
      {kMoveForward, "MF"},
      {kTurnRight, "TR"},
      {kTurnLeft, "TL"},
      {kStay, "ST"},
  };
  lib.program_size = program_size;
  lib.idle_function = kStay;
  return lib;
}

const char* tileworld_function_name(int function_id) {
  switch (function_id) {
    case kWhatExistFront: return "WEF";
    case kWhatExistRight: return "WER";
    case kWhatExistLeft: return "WEL";
    case kWhatExistBack: return "WEB";
    case kNearestTileDirection: return "NTD";
    case kSecondNearestTileDirection: return "SNTD";
    case kNearestHoleDirection: return "NHD";
    case kMoveForward: return "MF";
    case kTurnRight: return "TR";
    case kTurnLeft: return "TL";
    case kStay: return "ST";
    default: return "?";
  }
}

Pos heading_step(Heading h) {
  switch (h) {
    case Heading::North: return {0, -1};
    case Heading::East: return {1, 0};
    case Heading::South: return {0, 1};
    case Heading::West: return {-1, 0};
  }
  return {0, 0};
}

Heading rotate_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }
Heading rotate_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
Heading opposite(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 2) % 4); }

int GridMap::tile_count() const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), Cell::Tile));
}

int GridMap::hole_count() const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), Cell::Hole));
}

GridMap parse_map(const std::string& text) {
  std::vector<std::string> rows;
  {
    std::string row;
    for (char c : text) {
      if (c == '\n') {
        rows.push_back(row);
        row.clear();
      } else {
        row.push_back(c);
      }
    }
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) throw MapParseError(1, 1, "empty map");

  GridMap map;
  map.height = static_cast<int>(rows.size());
  map.width = static_cast<int>(rows[0].size());
  if (map.width == 0) throw MapParseError(1, 1, "empty row");
  map.cells.assign(static_cast<size_t>(map.width) * map.height, Cell::Floor);

  for (int y = 0; y < map.height; ++y) {
    const std::string& row = rows[y];
    if (static_cast<int>(row.size()) != map.width)
      throw MapParseError(y + 1, static_cast<int>(row.size()) + 1,
                          "row length " + std::to_string(row.size()) + " differs from row 1 length " +
                              std::to_string(map.width));
    for (int x = 0; x < map.width; ++x) {
      Cell cell = Cell::Floor;
      switch (row[x]) {
        case '.': cell = Cell::Floor; break;
        case '#': cell = Cell::Obstacle; break;
        case 'T': cell = Cell::Tile; break;
        case 'H': cell = Cell::Hole; break;
        case '^': map.agents.push_back({{x, y}, Heading::North}); break;
        case 'v': map.agents.push_back({{x, y}, Heading::South}); break;
        case '<': map.agents.push_back({{x, y}, Heading::West}); break;
        case '>': map.agents.push_back({{x, y}, Heading::East}); break;
        default:
          throw MapParseError(y + 1, x + 1, std::string("unknown character '") + row[x] + "'");
      }
      map.cells[static_cast<size_t>(y) * map.width + x] = cell;
    }
  }
  if (map.agents.empty()) throw MapParseError(map.height, 1, "no agents");
  if (map.tile_count() == 0) throw MapParseError(map.height, 1, "no tiles");
  if (map.hole_count() == 0) throw MapParseError(map.height, 1, "no holes");
  return map;
}

GridMap load_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map(buf.str());
}

WorldState::WorldState(const GridMap& map) : width(map.width), height(map.height) {
  obstacles.assign(static_cast<size_t>(width) * height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      switch (map.at(x, y)) {
        case Cell::Obstacle: obstacles[static_cast<size_t>(y) * width + x] = 1; break;
        case Cell::Tile: tiles.push_back({{x, y}, false}); break;
        case Cell::Hole: holes.push_back({x, y}); break;
        case Cell::Floor: break;
      }
    }
  }
  agents = map.agents;
}

int WorldState::tile_index_at(Pos p) const {
  for (size_t i = 0; i < tiles.size(); ++i)
    if (!tiles[i].dropped && tiles[i].pos == p) return static_cast<int>(i);
  return -1;
}

int WorldState::hole_index_at(Pos p) const {
  for (size_t i = 0; i < holes.size(); ++i)
    if (holes[i] == p) return static_cast<int>(i);
  return -1;
}

int WorldState::agent_index_at(Pos p) const {
  for (size_t i = 0; i < agents.size(); ++i)
    if (agents[i].pos == p) return static_cast<int>(i);
  return -1;
}

Occupancy WorldState::occupancy(Pos p) const {
  if (!in_bounds(p) || obstacle_at(p)) return Occupancy::Obstacle;
  if (agent_index_at(p) >= 0) return Occupancy::Agent;
  if (tile_index_at(p) >= 0) return Occupancy::Tile;
  if (hole_index_at(p) >= 0) return Occupancy::Hole;
  return Occupancy::Nothing;
}

int WorldState::live_tile_count() const {
  int n = 0;
  for (const auto& t : tiles)
    if (!t.dropped) ++n;
  return n;
}

namespace {

// Scan-order comparison for distance ties: topmost first, then leftmost.
bool scan_before(Pos a, Pos b) { return a.y != b.y ? a.y < b.y : a.x < b.x; }

// Heading-relative direction of a nonzero offset: the dominant axis wins,
// with the axial component winning ties.
RelativeDirection direction_of_offset(Pos offset, Heading heading) {
  const Pos fwd = heading_step(heading);
  const Pos right = heading_step(rotate_right(heading));
  const int axial = offset.x * fwd.x + offset.y * fwd.y;
  const int lateral = offset.x * right.x + offset.y * right.y;
  if (std::abs(axial) >= std::abs(lateral))
    return axial > 0 ? RelativeDirection::Forward : RelativeDirection::Backward;
  return lateral > 0 ? RelativeDirection::Right : RelativeDirection::Left;
}

struct NearestPick {
  bool found = false;
  Pos pos;
  int dist = 0;
};

// k = 0 nearest, k = 1 second nearest; falls back to the nearest when fewer
// than k+1 candidates exist.
template <class Iter, class GetPos, class Alive>
NearestPick nearest_kth(Iter begin, Iter end, GetPos get_pos, Alive alive, Pos from, int k) {
  NearestPick best, second;
  for (Iter it = begin; it != end; ++it) {
    if (!alive(*it)) continue;
    const Pos p = get_pos(*it);
    const int d = manhattan(from, p);
    const auto before = [&](const NearestPick& other) {
      return !other.found || d < other.dist || (d == other.dist && scan_before(p, other.pos));
    };
    if (before(best)) {
      second = best;
      best = {true, p, d};
    } else if (before(second)) {
      second = {true, p, d};
    }
  }
  if (k == 1 && second.found) return second;
  return best;
}

}  // namespace

int judge(const WorldState& world, int agent_index, int function_id) {
  const AgentState& agent = world.agents[agent_index];
  switch (function_id) {
    case kWhatExistFront:
    case kWhatExistRight:
    case kWhatExistLeft:
    case kWhatExistBack: {
      Heading dir = agent.heading;
      if (function_id == kWhatExistRight) dir = rotate_right(dir);
      if (function_id == kWhatExistLeft) dir = rotate_left(dir);
      if (function_id == kWhatExistBack) dir = opposite(dir);
      const Pos step = heading_step(dir);
      return static_cast<int>(world.occupancy({agent.pos.x + step.x, agent.pos.y + step.y}));
    }
    case kNearestTileDirection:
    case kSecondNearestTileDirection: {
      const int k = function_id == kSecondNearestTileDirection ? 1 : 0;
      const auto pick = nearest_kth(
          world.tiles.begin(), world.tiles.end(), [](const WorldState::TrackedTile& t) { return t.pos; },
          [](const WorldState::TrackedTile& t) { return !t.dropped; }, agent.pos, k);
      if (!pick.found) return static_cast<int>(RelativeDirection::Forward);
      return static_cast<int>(
          direction_of_offset({pick.pos.x - agent.pos.x, pick.pos.y - agent.pos.y}, agent.heading));
    }
    case kNearestHoleDirection: {
      const auto pick = nearest_kth(
          world.holes.begin(), world.holes.end(), [](Pos p) { return p; }, [](Pos) { return true; },
          agent.pos, 0);
      if (!pick.found) return static_cast<int>(RelativeDirection::Forward);
      return static_cast<int>(
          direction_of_offset({pick.pos.x - agent.pos.x, pick.pos.y - agent.pos.y}, agent.heading));
    }
    default:
      throw std::logic_error(std::string("judge called with non-judgment function ") +
                             tileworld_function_name(function_id));
  }
}

void apply_action(WorldState& world, int agent_index, int function_id) {
  AgentState& agent = world.agents[agent_index];
  switch (function_id) {
    case kStay:
      return;
    case kTurnRight:
      agent.heading = rotate_right(agent.heading);
      return;
    case kTurnLeft:
      agent.heading = rotate_left(agent.heading);
      return;
    case kMoveForward: {
      const Pos step = heading_step(agent.heading);
      const Pos ahead{agent.pos.x + step.x, agent.pos.y + step.y};
      if (!world.in_bounds(ahead) || world.obstacle_at(ahead)) return;
      if (world.agent_index_at(ahead) >= 0 || world.hole_index_at(ahead) >= 0) return;
      const int tile = world.tile_index_at(ahead);
      if (tile < 0) {
        agent.pos = ahead;
        return;
      }
      const Pos beyond{ahead.x + step.x, ahead.y + step.y};
      if (!world.in_bounds(beyond) || world.obstacle_at(beyond)) return;
      if (world.agent_index_at(beyond) >= 0 || world.tile_index_at(beyond) >= 0) return;
      const int hole = world.hole_index_at(beyond);
      if (hole >= 0) {
        world.tiles[tile].dropped = true;
        world.holes.erase(world.holes.begin() + hole);
        ++world.dropped;
        agent.pos = ahead;
        return;
      }
      world.tiles[tile].pos = beyond;
      agent.pos = ahead;
      return;
    }
    default:
      throw std::logic_error(std::string("apply_action called with non-processing function ") +
                             tileworld_function_name(function_id));
  }
}

double fitness(const EpisodeResult& result, const FitnessWeights& weights) {
  double distance_gain = 0.0;
  for (const auto& t : result.per_tile) distance_gain += t.initial - t.final;
  return weights.w1 * result.dropped + weights.w2 * (result.initial_steps - result.steps_taken) +
         weights.w3 * distance_gain;
}

namespace {

int nearest_hole_distance(Pos from, const std::vector<Pos>& holes) {
  int best = std::numeric_limits<int>::max();
  for (Pos h : holes) best = std::min(best, manhattan(from, h));
  return best;
}

}  // namespace

EpisodeResult run_episode(const std::vector<Individual>& group, GraphAssignment assignment,
                          const GridMap& map, int initial_steps, const GraphShape& shape) {
  const int num_agents = static_cast<int>(map.agents.size());
  if (assignment == GraphAssignment::Shared && group.size() != 1)
    throw std::invalid_argument("shared assignment requires exactly one individual");
  if (assignment == GraphAssignment::PerAgent && static_cast<int>(group.size()) != num_agents)
    throw std::invalid_argument("per-agent assignment requires one individual per agent, got " +
                                std::to_string(group.size()) + " for " + std::to_string(num_agents) +
                                " agents");
  if (initial_steps < 1) throw std::invalid_argument("initial_steps must be >= 1");

  WorldState world(map);
  const int total_tiles = static_cast<int>(world.tiles.size());

  EpisodeResult result;
  result.initial_steps = initial_steps;
  result.per_tile.resize(total_tiles);
  for (int t = 0; t < total_tiles; ++t)
    result.per_tile[t].initial = nearest_hole_distance(world.tiles[t].pos, world.holes);

  result.transits.assign(group.size(), TransitRecord(shape.total_branches()));
  std::vector<Cursor> cursors(num_agents);

  bool all_dropped = false;
  int rounds = 0;
  for (int round = 1; round <= initial_steps && !all_dropped; ++round) {
    rounds = round;
    for (int a = 0; a < num_agents && !all_dropped; ++a) {
      const int member = assignment == GraphAssignment::Shared ? 0 : a;
      const int action = advance(
          group[member], shape, cursors[a],
          [&world, a](int function_id) { return judge(world, a, function_id); }, result.transits[member]);
      apply_action(world, a, action);
      if (world.dropped == total_tiles) all_dropped = true;
    }
  }
  world.steps_taken = rounds;

  result.dropped = world.dropped;
  result.steps_taken = rounds;
  for (int t = 0; t < total_tiles; ++t) {
    if (world.tiles[t].dropped)
      result.per_tile[t].final = 0;
    else if (world.holes.empty())
      result.per_tile[t].final = result.per_tile[t].initial;
    else
      result.per_tile[t].final = nearest_hole_distance(world.tiles[t].pos, world.holes);
  }
  return result;
}

}  // namespace gnp
