#include "ktk/engine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace ktk {

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

bool tile_floor_char(char c) { return c == '.' || c == 'G' || c == 'S'; }
bool tile_blocked_char(char c) { return c == '@' || c == 'O' || c == 'T' || c == 'W'; }

}  // namespace

Grid load_map(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&]() {
        if (!std::getline(in, line)) throw EngineError("map: unexpected end of header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    std::istringstream l1(next_line());
    std::string word, value;
    if (!(l1 >> word >> value) || word != "type")
        throw EngineError("map: malformed 'type' line");
    Grid g;
    std::istringstream l2(next_line());
    if (!(l2 >> word >> g.height) || word != "height" || g.height < 1)
        throw EngineError("map: malformed 'height' line");
    std::istringstream l3(next_line());
    if (!(l3 >> word >> g.width) || word != "width" || g.width < 1)
        throw EngineError("map: malformed 'width' line");
    if (next_line() != "map") throw EngineError("map: missing 'map' line");

    g.cells.reserve(static_cast<std::size_t>(g.width) * g.height);
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) != g.width)
            throw EngineError("map: row length " + std::to_string(line.size()) +
                              " does not match width " + std::to_string(g.width));
        for (char c : line) {
            if (tile_floor_char(c)) g.cells.push_back(TileKind::Floor);
            else if (tile_blocked_char(c)) g.cells.push_back(TileKind::Blocked);
            else throw EngineError(std::string("map: unknown tile character '") + c + "'");
        }
        ++rows;
    }
    if (rows != g.height)
        throw EngineError("map: row count " + std::to_string(rows) + " does not match height " +
                          std::to_string(g.height));
    return g;
}

GameState load_level(const std::string& text, std::shared_ptr<const Grid> grid,
                     std::shared_ptr<const GameConfig> cfg) {
    GameState s;
    s.grid = std::move(grid);
    s.rules = std::move(cfg);
    std::istringstream in(text);
    std::string line;
    int next_id = 0;
    int kings[2] = {0, 0};
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("map ", 0) == 0) continue;
        std::istringstream ls(line);
        int player, x, y;
        std::string type_name;
        if (!(ls >> player >> type_name >> x >> y))
            throw EngineError("level: malformed placement line: " + line);
        if (player != 0 && player != 1) throw EngineError("level: bad player index: " + line);
        auto cls = unit_class_from_name(type_name);
        if (!cls) throw EngineError("level: unknown unit type: " + type_name);
        if (!s.grid->is_floor(x, y))
            throw EngineError("level: placement not on a Floor cell: " + line);
        if (s.unit_at(x, y)) throw EngineError("level: two placements on one cell: " + line);
        Unit u;
        u.id = next_id++;
        u.owner = player;
        u.cls = *cls;
        u.x = x;
        u.y = y;
        u.health = s.rules->spec(*cls).max_health;
        s.units.push_back(u);
        if (*cls == UnitClass::King) ++kings[player];
    }
    if (kings[0] != 1 || kings[1] != 1)
        throw EngineError("level: each player needs exactly one King");
    return s;
}

std::vector<int> bfs_distances(const Grid& g, int from_x, int from_y) {
    std::vector<int> dist(static_cast<std::size_t>(g.width) * g.height, -1);
    std::deque<int> queue;
    dist[static_cast<std::size_t>(from_y) * g.width + from_x] = 0;
    queue.push_back(from_y * g.width + from_x);
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        int cx = cur % g.width, cy = cur / g.width;
        for (int d = 0; d < 4; ++d) {
            int nx = cx + kDx[d], ny = cy + kDy[d];
            if (!g.is_floor(nx, ny)) continue;
            int ni = ny * g.width + nx;
            if (dist[ni] >= 0) continue;
            dist[ni] = dist[cur] + 1;
            queue.push_back(ni);
        }
    }
    return dist;
}

namespace {

// Move destinations in deterministic order: stay first, then BFS pop order.
// Paths respect Blocked cells only; occupied tiles are forbidden as
// destinations but may be moved through.
void move_options(const GameState& s, const Unit& u, int move_range,
                  std::vector<std::pair<int, int>>& out) {
    out.clear();
    out.emplace_back(u.x, u.y);  // stay
    if (move_range <= 0) return;
    const Grid& g = *s.grid;
    thread_local std::vector<int> dist;
    dist.assign(static_cast<std::size_t>(g.width) * g.height, -1);
    thread_local std::vector<int> queue;
    queue.clear();
    dist[static_cast<std::size_t>(u.y) * g.width + u.x] = 0;
    queue.push_back(u.y * g.width + u.x);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int cur = queue[head];
        int cx = cur % g.width, cy = cur / g.width;
        if (dist[cur] > 0 && !s.unit_at(cx, cy)) out.emplace_back(cx, cy);
        if (dist[cur] == move_range) continue;
        for (int d = 0; d < 4; ++d) {
            int nx = cx + kDx[d], ny = cy + kDy[d];
            if (!g.is_floor(nx, ny)) continue;
            int ni = ny * g.width + nx;
            if (dist[ni] >= 0) continue;
            dist[ni] = dist[cur] + 1;
            queue.push_back(ni);
        }
    }
}

// Valid targets from (x, y): enemies for attackers, other allies for healers.
void target_options(const GameState& s, const Unit& u, const UnitTypeSpec& spec, int x, int y,
                    std::vector<int>& out) {
    out.clear();
    const bool healer = spec.heal_range > 0;
    const int range = healer ? spec.heal_range : spec.attack_range;
    if (range <= 0) return;
    for (const auto& t : s.units) {
        if (t.id == u.id) continue;
        if (healer ? (t.owner != u.owner) : (t.owner == u.owner)) continue;
        if (manhattan(x, y, t.x, t.y) <= range) out.push_back(t.id);
    }
}

}  // namespace

std::vector<UnitAction> legal_unit_actions(const GameState& s, int unit_id) {
    const Unit* u = s.find_unit(unit_id);
    if (!u) throw EngineError("legal_unit_actions: unknown unit " + std::to_string(unit_id));
    if (u->owner != s.active_player)
        throw EngineError("legal_unit_actions: unit not owned by active player");
    if (u->acted) throw EngineError("legal_unit_actions: unit already acted");

    thread_local std::vector<std::pair<int, int>> moves;
    thread_local std::vector<int> targets;
    std::vector<UnitAction> actions;
    const UnitTypeSpec& spec = s.rules->spec(u->cls);
    move_options(s, *u, spec.move_range, moves);
    for (const auto& [mx, my] : moves) {
        UnitAction a;
        a.unit_id = unit_id;
        if (mx != u->x || my != u->y) a.move_to = std::make_pair(mx, my);
        actions.push_back(a);  // target "none" first
        target_options(s, *u, spec, mx, my, targets);
        for (int tid : targets) {
            a.target_id = tid;
            actions.push_back(a);
            a.target_id.reset();
        }
    }
    return actions;
}

Outcome outcome(const GameState& s) {
    const bool king0 = s.king_of(0) != nullptr;
    const bool king1 = s.king_of(1) != nullptr;
    if (!king1) return {Outcome::Kind::Win, 0};
    if (!king0) return {Outcome::Kind::Win, 1};
    if (s.turn >= s.rules->max_turns) return {Outcome::Kind::Draw, -1};
    return {Outcome::Kind::Ongoing, -1};
}

GameState ForwardModel::apply(const GameState& s, const UnitAction& a) {
    ++calls_;
    const Unit* u = s.find_unit(a.unit_id);
    if (!u) throw EngineError("apply: unknown unit " + std::to_string(a.unit_id));
    if (u->owner != s.active_player || u->acted)
        throw EngineError("apply: unit cannot act: " + to_string(a));
    const UnitTypeSpec& spec = s.rules->spec(u->cls);

    int px = u->x, py = u->y;
    if (a.move_to) {
        thread_local std::vector<std::pair<int, int>> moves;
        move_options(s, *u, spec.move_range, moves);
        if (std::find(moves.begin() + 1, moves.end(), *a.move_to) == moves.end())
            throw EngineError("apply: illegal move: " + to_string(a));
        px = a.move_to->first;
        py = a.move_to->second;
    }
    if (a.target_id) {
        const Unit* t = s.find_unit(*a.target_id);
        const bool healer = spec.heal_range > 0;
        const int range = healer ? spec.heal_range : spec.attack_range;
        if (!t || t->id == u->id || (healer ? t->owner != u->owner : t->owner == u->owner) ||
            range <= 0 || manhattan(px, py, t->x, t->y) > range)
            throw EngineError("apply: illegal target: " + to_string(a));
    }

    GameState next = s;
    Unit* actor = next.find_unit(a.unit_id);
    actor->x = px;
    actor->y = py;
    actor->acted = true;
    if (a.target_id) {
        Unit* t = next.find_unit(*a.target_id);
        if (spec.heal_range > 0) {
            t->health = std::min(s.rules->spec(t->cls).max_health, t->health + spec.heal_strength);
        } else {
            t->health -= spec.attack_damage;
            if (t->health <= 0)
                next.units.erase(next.units.begin() + (t - next.units.data()));
        }
    }
    if (next.all_acted(next.active_player)) {
        const int finished = next.active_player;
        next.active_player = 1 - finished;
        for (auto& w : next.units) w.acted = false;
        if (finished == 1) ++next.turn;
    }
    return next;
}

UnitAction random_unit_action(const GameState& s, Rng& rng) {
    for (const auto& u : s.units) {
        if (u.owner != s.active_player || u.acted) continue;
        auto actions = legal_unit_actions(s, u.id);
        return actions[rng.below(static_cast<int>(actions.size()))];
    }
    throw EngineError("random_unit_action: no unacted unit for the active player");
}

}  // namespace ktk
