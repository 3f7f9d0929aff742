#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ktk/rng.hpp"
#include "ktk/types.hpp"

namespace ktk {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// MovingAI ASCII map: "type octile" / "height H" / "width W" / "map" then H rows.
// '.', 'G', 'S' are Floor; '@', 'O', 'T', 'W' are Blocked.
Grid load_map(const std::string& text);

// Placement lines "<player> <TypeName> <x> <y>". A leading "map <path>" line,
// if present, is skipped (the harness resolves it).
GameState load_level(const std::string& text, std::shared_ptr<const Grid> grid,
                     std::shared_ptr<const GameConfig> cfg);

// Every (move option) x (target option) pair for one unit. Move options are
// "stay" plus every Floor, unoccupied tile reachable within move_range
// (4-neighbor steps, Blocked cells impassable); targets by Manhattan distance
// from the post-move position. DoNothing is always first.
std::vector<UnitAction> legal_unit_actions(const GameState& s, int unit_id);

Outcome outcome(const GameState& s);

// Forward model with a per-context call counter; the unit of search budget.
class ForwardModel {
public:
    GameState apply(const GameState& s, const UnitAction& a);
    std::uint64_t calls() const { return calls_; }

private:
    std::uint64_t calls_ = 0;
};

// BFS distances over Floor cells (4-neighbor, Blocked impassable, units
// ignored). Unreachable cells get -1.
std::vector<int> bfs_distances(const Grid& g, int from_x, int from_y);

// Uniform-random legal action for the active player's first unacted unit.
UnitAction random_unit_action(const GameState& s, Rng& rng);

}  // namespace ktk
