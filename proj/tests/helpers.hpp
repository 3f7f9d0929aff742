#pragma once

#include <memory>
#include <string>

#include "ktk/engine.hpp"

namespace ktk::test {

inline std::shared_ptr<const Grid> open_grid(int w, int h) {
    auto g = std::make_shared<Grid>();
    g->width = w;
    g->height = h;
    g->cells.assign(static_cast<std::size_t>(w) * h, TileKind::Floor);
    return g;
}

inline std::shared_ptr<const Grid> grid_from_rows(const std::vector<std::string>& rows) {
    auto g = std::make_shared<Grid>();
    g->height = static_cast<int>(rows.size());
    g->width = static_cast<int>(rows[0].size());
    for (const auto& row : rows)
        for (char c : row)
            g->cells.push_back(c == '.' ? TileKind::Floor : TileKind::Blocked);
    return g;
}

inline std::shared_ptr<const GameConfig> default_rules() {
    static auto rules = std::make_shared<GameConfig>(GameConfig::defaults());
    return rules;
}

struct Placement {
    int owner;
    UnitClass cls;
    int x, y;
    int health = -1;  // -1: full
};

inline GameState make_state(std::shared_ptr<const Grid> grid,
                            const std::vector<Placement>& placements,
                            std::shared_ptr<const GameConfig> rules = default_rules()) {
    GameState s;
    s.grid = std::move(grid);
    s.rules = std::move(rules);
    int id = 0;
    for (const auto& p : placements) {
        Unit u;
        u.id = id++;
        u.owner = p.owner;
        u.cls = p.cls;
        u.x = p.x;
        u.y = p.y;
        u.health = p.health < 0 ? s.rules->spec(p.cls).max_health : p.health;
        s.units.push_back(u);
    }
    return s;
}

// Two kings in opposite corners; the minimal well-formed state.
inline GameState two_kings(int w = 5, int h = 5) {
    return make_state(open_grid(w, h), {{0, UnitClass::King, 0, 0},
                                        {1, UnitClass::King, w - 1, h - 1}});
}

}  // namespace ktk::test
