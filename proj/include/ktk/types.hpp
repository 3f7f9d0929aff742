#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ktk {

enum class TileKind : std::uint8_t { Floor, Blocked };

struct Grid {
    int width = 0;
    int height = 0;
    std::vector<TileKind> cells;  // row-major, cells[y * width + x]

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    TileKind at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
    bool is_floor(int x, int y) const { return in_bounds(x, y) && at(x, y) == TileKind::Floor; }
    int floor_count() const;
};

enum class UnitClass : std::uint8_t { King, Warrior, Archer, Healer };

std::string unit_class_name(UnitClass c);
std::optional<UnitClass> unit_class_from_name(const std::string& name);

struct UnitTypeSpec {
    UnitClass cls = UnitClass::King;
    int max_health = 0;
    int move_range = 0;
    int attack_range = 0;   // 0 for Healer
    int attack_damage = 0;  // 0 for Healer
    int heal_range = 0;     // 0 for non-Healer
    int heal_strength = 0;  // 0 for non-Healer
};

// Per-type attribute table. King move/attack range 2 follow the game's fixed
// design; the rest are project defaults, overridable from a game-config file.
struct GameConfig {
    std::array<UnitTypeSpec, 4> types;
    int max_turns = 100;
    int isolation_radius = 2;  // combat agent's "nearby" radius

    static GameConfig defaults();
    const UnitTypeSpec& spec(UnitClass c) const { return types[static_cast<int>(c)]; }
};

GameConfig load_game_config(const std::string& text);
std::string save_game_config(const GameConfig& cfg);

struct Unit {
    int id = 0;
    int owner = 0;  // player index 0 or 1
    UnitClass cls = UnitClass::King;
    int x = 0;
    int y = 0;
    int health = 0;
    bool acted = false;  // meaningful only for the active player's units
};

// One unit's composite decision: optional move then optional attack/heal.
// (move_to = none, target_id = none) encodes DoNothing.
struct UnitAction {
    int unit_id = -1;
    std::optional<std::pair<int, int>> move_to;
    std::optional<int> target_id;

    bool is_noop() const { return !move_to && !target_id; }
    bool operator==(const UnitAction&) const = default;
};

struct GameState {
    std::shared_ptr<const Grid> grid;
    std::shared_ptr<const GameConfig> rules;
    std::vector<Unit> units;  // living units only; dead units are removed
    int turn = 0;
    int active_player = 0;

    const Unit* find_unit(int id) const;
    Unit* find_unit(int id);
    const Unit* king_of(int player) const;
    const Unit* unit_at(int x, int y) const;
    bool all_acted(int player) const;
};

struct Outcome {
    enum class Kind { Ongoing, Win, Draw };
    Kind kind = Kind::Ongoing;
    int winner = -1;  // valid when kind == Win

    bool ongoing() const { return kind == Kind::Ongoing; }
    bool operator==(const Outcome&) const = default;
};

inline int manhattan(int ax, int ay, int bx, int by) {
    return std::abs(ax - bx) + std::abs(ay - by);
}

// Canonical text form; equality of serializations is the determinism oracle.
std::string serialize(const GameState& s);
std::string to_string(const UnitAction& a);
std::string to_string(const Outcome& o);

}  // namespace ktk
