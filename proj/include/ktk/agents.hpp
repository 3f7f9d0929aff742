#pragma once

#include <memory>
#include <string>

#include "ktk/search.hpp"

namespace ktk {

// One owned, unacted unit's decision per call; the match loop drives turns.
class Agent {
public:
    virtual ~Agent() = default;
    virtual std::string name() const = 0;
    virtual void start_game(const GameState&, int /*player*/, Rng&) {}
    virtual UnitAction act(const GameState& s, Rng& rng) = 0;
    // Per-decision diagnostics from the previous act() call, when available.
    virtual const SearchStats* last_stats() const { return nullptr; }
};

class RandomAgent : public Agent {
public:
    std::string name() const override { return "random"; }
    UnitAction act(const GameState& s, Rng& rng) override { return random_unit_action(s, rng); }
};

// Rule-based baseline: concentrates attacks on the most isolated enemy and
// sends healers after the strongest wounded ally.
class CombatAgent : public Agent {
public:
    std::string name() const override { return "combat"; }
    UnitAction act(const GameState& s, Rng& rng) override;
};

// Enemy isolation: own units within radius minus the enemy's own nearby
// allies; the attack focus is the highest-scoring enemy, ties by lowest id.
double isolation_score(const GameState& s, int perspective, const Unit& enemy, int radius);
int pick_focus_target(const GameState& s, int perspective, int radius);

class MctsAgent : public Agent {
public:
    MctsAgent(SearchVariant variant, SearchParams params)
        : variant_(variant), params_(params) {}

    std::string name() const override;
    void start_game(const GameState& initial, int player, Rng& rng) override;
    UnitAction act(const GameState& s, Rng& rng) override;
    const SearchStats* last_stats() const override { return &stats_; }
    const SearchParams& params() const { return params_; }

private:
    SearchVariant variant_;
    SearchParams params_;
    std::vector<int> unit_order_;
    SearchStats stats_;
};

// Names: random, combat, mcts, mcts_u, elastic_mcts_u. Search agents get
// `params`; `do_nothing` is a harness-test stub that always passes.
std::unique_ptr<Agent> make_agent(const std::string& name, const SearchParams& params);

struct DecisionRow {
    int player = 0;
    int turn = 0;
    int iterations = 0;
    std::uint64_t fm_calls = 0;
    double wall_ms = 0.0;
    int tree_nodes = 0;
    int groups = 0;
    std::vector<std::pair<int, double>> compression;
};

struct PlayedGame {
    Outcome outcome;
    int turns = 0;
    bool failed = false;
    std::string error;
    std::vector<DecisionRow> decisions;  // search agents only
};

// One full game to Win/Draw; all randomness derives from `seed`. An illegal
// agent action aborts with a failure record instead of propagating.
PlayedGame play_game(const GameState& initial, Agent& player0, Agent& player1,
                     std::uint64_t seed);

}  // namespace ktk
