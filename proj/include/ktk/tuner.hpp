#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ktk/agents.hpp"

namespace ktk {

// Discrete parameter grid; a candidate is one value index per dimension.
struct ParamSpace {
    struct Dimension {
        std::string name;
        std::vector<double> values;
    };
    std::vector<Dimension> dims;

    std::size_t size() const;
    std::vector<int> random_candidate(Rng& rng) const;

    // C in {0.1, 1, 10, 100}, L in {20, 40, 60, 80, 100}: 20 points.
    static ParamSpace mcts_space();
    // Adds B in {20, 40, 60} and alpha in {4B, 8B, 12B, 16B} batches: 240 points.
    static ParamSpace elastic_space();
};

struct NtbeaOptions {
    int iterations = 50;
    int neighbors = 50;
    double bandit_k = 2.0;
    double epsilon = 1e-6;
};

struct NtbeaLogEntry {
    int iteration;
    std::vector<int> candidate;
    double fitness;
    double modeled_mean;
};

// N-tuple bandit optimizer over the grid: all 1-tuples, all 2-tuples and the
// full tuple. Returns the evaluated candidate with the highest modeled mean.
std::vector<int> ntbea_run(const ParamSpace& space,
                           const std::function<double(const std::vector<int>&)>& fitness,
                           const NtbeaOptions& opts, Rng& rng,
                           std::vector<NtbeaLogEntry>* log = nullptr);

// Win rate of `candidate` (as `agent_name` parameters) against the Combat
// Agent over `games` matches with alternating starting sides; draws count 0.5.
double fitness_vs_combat(const ParamSpace& space, const std::vector<int>& candidate,
                         const std::string& agent_name, const SearchParams& base,
                         const std::vector<GameState>& levels, int games, Rng& rng);

SearchParams apply_candidate(const ParamSpace& space, const std::vector<int>& candidate,
                             SearchParams base);

// Parameter sets reported as found by tuning at full scale; usable without
// re-running the tuner.
SearchParams preset_params(const std::string& name);

}  // namespace ktk
