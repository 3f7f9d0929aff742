#include "ktk/agents.hpp"

#include <algorithm>
#include <limits>

namespace ktk {

double isolation_score(const GameState& s, int perspective, const Unit& enemy, int radius) {
    int mine = 0, theirs = 0;
    for (const auto& u : s.units) {
        if (u.id == enemy.id) continue;
        if (manhattan(u.x, u.y, enemy.x, enemy.y) > radius) continue;
        if (u.owner == perspective) ++mine;
        else ++theirs;
    }
    return static_cast<double>(mine - theirs);
}

int pick_focus_target(const GameState& s, int perspective, int radius) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const auto& u : s.units) {
        if (u.owner == perspective) continue;
        const double score = isolation_score(s, perspective, u, radius);
        if (score > best_score || (score == best_score && (best < 0 || u.id < best))) {
            best = u.id;
            best_score = score;
        }
    }
    return best;
}

namespace {

const Unit* first_unacted(const GameState& s) {
    for (const auto& u : s.units)
        if (u.owner == s.active_player && !u.acted) return &u;
    return nullptr;
}

// Reachable move option (stay included) minimizing grid distance to the goal
// tile; ties go to the earliest option in enumeration order.
UnitAction step_toward(const GameState& s, const std::vector<UnitAction>& legal, int goal_x,
                       int goal_y) {
    const auto dist = bfs_distances(*s.grid, goal_x, goal_y);
    UnitAction best = legal.front();  // DoNothing: stay, no target
    int best_d = std::numeric_limits<int>::max();
    for (const auto& a : legal) {
        if (a.target_id) continue;
        const Unit* u = s.find_unit(a.unit_id);
        const int x = a.move_to ? a.move_to->first : u->x;
        const int y = a.move_to ? a.move_to->second : u->y;
        const int d = dist[static_cast<std::size_t>(y) * s.grid->width + x];
        if (d >= 0 && d < best_d) {
            best_d = d;
            best = a;
        }
    }
    return best;
}

}  // namespace

UnitAction CombatAgent::act(const GameState& s, Rng&) {
    const Unit* u = first_unacted(s);
    if (!u) throw EngineError("combat agent: no unit to act");
    const auto legal = legal_unit_actions(s, u->id);
    const UnitTypeSpec& spec = s.rules->spec(u->cls);

    if (spec.heal_range > 0) {
        // Strongest ally: highest attack damage, ties by health then lowest id.
        auto stronger = [&](const Unit& a, const Unit& b) {
            const int da = s.rules->spec(a.cls).attack_damage;
            const int db = s.rules->spec(b.cls).attack_damage;
            if (da != db) return da > db;
            if (a.health != b.health) return a.health > b.health;
            return a.id < b.id;
        };
        const Unit* wounded = nullptr;
        const Unit* strongest = nullptr;
        for (const auto& ally : s.units) {
            if (ally.owner != u->owner || ally.id == u->id) continue;
            if (!strongest || stronger(ally, *strongest)) strongest = &ally;
            if (ally.health < s.rules->spec(ally.cls).max_health)
                if (!wounded || stronger(ally, *wounded)) wounded = &ally;
        }
        const Unit* goal = wounded ? wounded : strongest;
        if (!goal) return legal.front();
        UnitAction a = step_toward(s, legal, goal->x, goal->y);
        if (wounded) {
            const int x = a.move_to ? a.move_to->first : u->x;
            const int y = a.move_to ? a.move_to->second : u->y;
            if (manhattan(x, y, wounded->x, wounded->y) <= spec.heal_range)
                a.target_id = wounded->id;
        }
        return a;
    }

    const int target_id = pick_focus_target(s, u->owner, s.rules->isolation_radius);
    if (target_id < 0) return legal.front();
    const Unit* target = s.find_unit(target_id);
    UnitAction a = step_toward(s, legal, target->x, target->y);
    if (spec.attack_range > 0) {
        const int x = a.move_to ? a.move_to->first : u->x;
        const int y = a.move_to ? a.move_to->second : u->y;
        if (manhattan(x, y, target->x, target->y) <= spec.attack_range) a.target_id = target_id;
    }
    return a;
}

std::string MctsAgent::name() const {
    switch (variant_) {
        case SearchVariant::Plain: return "mcts";
        case SearchVariant::UnitOrdered: return "mcts_u";
        case SearchVariant::Elastic: return "elastic_mcts_u";
    }
    return "?";
}

void MctsAgent::start_game(const GameState& initial, int player, Rng& rng) {
    unit_order_ = draw_unit_order(initial, player, rng);
}

UnitAction MctsAgent::act(const GameState& s, Rng& rng) {
    ForwardModel search_fm;
    stats_ = SearchStats{};
    return run_search(s, variant_, params_, unit_order_, search_fm, rng, &stats_);
}

namespace {

class DoNothingAgent : public Agent {
public:
    std::string name() const override { return "do_nothing"; }
    UnitAction act(const GameState& s, Rng&) override {
        const Unit* u = first_unacted(s);
        if (!u) throw EngineError("do_nothing agent: no unit to act");
        UnitAction a;
        a.unit_id = u->id;
        return a;
    }
};

}  // namespace

std::unique_ptr<Agent> make_agent(const std::string& name, const SearchParams& params) {
    if (name == "random") return std::make_unique<RandomAgent>();
    if (name == "combat") return std::make_unique<CombatAgent>();
    if (name == "do_nothing") return std::make_unique<DoNothingAgent>();
    if (name == "mcts") return std::make_unique<MctsAgent>(SearchVariant::Plain, params);
    if (name == "mcts_u") return std::make_unique<MctsAgent>(SearchVariant::UnitOrdered, params);
    if (name == "elastic_mcts_u")
        return std::make_unique<MctsAgent>(SearchVariant::Elastic, params);
    throw std::invalid_argument("unknown agent: " + name);
}

PlayedGame play_game(const GameState& initial, Agent& player0, Agent& player1,
                     std::uint64_t seed) {
    PlayedGame result;
    Rng rngs[2] = {Rng(derive_seed(seed, 0)), Rng(derive_seed(seed, 1))};
    Agent* agents[2] = {&player0, &player1};
    GameState s = initial;
    ForwardModel real_fm;
    agents[0]->start_game(s, 0, rngs[0]);
    agents[1]->start_game(s, 1, rngs[1]);
    try {
        Outcome o;
        while ((o = outcome(s)).ongoing()) {
            const int p = s.active_player;
            const UnitAction a = agents[p]->act(s, rngs[p]);
            s = real_fm.apply(s, a);
            if (const SearchStats* st = agents[p]->last_stats()) {
                DecisionRow row;
                row.player = p;
                row.turn = s.turn;
                row.iterations = st->iterations;
                row.fm_calls = st->fm_used;
                row.wall_ms = st->wall_ms;
                row.tree_nodes = st->tree_nodes;
                row.groups = st->groups;
                row.compression = st->compression;
                result.decisions.push_back(std::move(row));
            }
        }
        result.outcome = o;
    } catch (const std::exception& e) {
        result.failed = true;
        result.error = e.what();
    }
    result.turns = s.turn;
    return result;
}

}  // namespace ktk
