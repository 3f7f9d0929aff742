#pragma once

#include <limits>
#include <vector>

#include "ktk/abstraction.hpp"
#include "ktk/engine.hpp"
#include "ktk/tree.hpp"

namespace ktk {

enum class SearchVariant { Plain, UnitOrdered, Elastic };

struct SearchParams {
    double exploration_c = 1.0;  // C
    int rollout_length = 20;     // L, in unit-actions (forward-model calls)
    std::uint64_t fm_budget = 30000;
    int batch_size = 20;       // B
    double alpha_abs = 240.0;  // iterations, or a proportion of fm_budget
    bool alpha_is_proportion = false;
    AbstractionParams abstraction;
};

struct SearchStats {
    int iterations = 0;
    std::uint64_t fm_used = 0;
    std::uint64_t overshoot = 0;  // forward-model calls past fm_budget
    double wall_ms = 0.0;
    int tree_nodes = 0;
    int groups = 0;
    bool split_happened = false;
    int split_iteration = -1;
    // (iteration, compression rate) after each batch construction.
    std::vector<std::pair<int, double>> compression;
};

// Terminal: 1 / -1 / 0 for win / loss / draw from `perspective`. Non-terminal:
// 1 - (d*h)/(D*H), d = min Manhattan distance from perspective's units to the
// opponent King, h = that King's health, D = width + height, H = King max HP.
double evaluate_state(const GameState& s, int perspective);

inline double ucb1(double x, double n, double parent_n, double c) {
    if (n <= 0) return std::numeric_limits<double>::infinity();
    return x / n + c * std::sqrt(std::log(parent_n) / n);
}

// One full search for the acting unit's decision. `unit_order` is the
// searcher's fixed unit-id order (ignored for Plain). All randomness comes
// from `rng`; `fm` accumulates the budget.
UnitAction run_search(const GameState& root, SearchVariant variant, const SearchParams& params,
                      const std::vector<int>& unit_order, ForwardModel& fm, Rng& rng,
                      SearchStats* stats = nullptr);

// One run_search per living unit in order, applying each chosen action to the
// real state. Returns the chosen actions; `state` ends at the opponent's turn
// or a terminal state.
std::vector<UnitAction> build_turn(GameState& state, SearchVariant variant,
                                   const SearchParams& params, const std::vector<int>& unit_order,
                                   ForwardModel& real_fm, Rng& rng,
                                   std::vector<SearchStats>* stats = nullptr);

std::vector<int> draw_unit_order(const GameState& s, int player, Rng& rng);

}  // namespace ktk
