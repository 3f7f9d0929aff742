#pragma once

#include <string>
#include <vector>

#include "ktk/agents.hpp"
#include "ktk/tuner.hpp"

namespace ktk {

// Army composition string: digits then a type letter, count defaulting to 1,
// e.g. "K1W1A1H", "K10W", "K5W5A". Exactly one King required.
std::vector<std::pair<UnitClass, int>> parse_composition(const std::string& text);

struct ExperimentConfig {
    std::string agent1 = "mcts_u";
    std::string agent2 = "mcts";
    SearchParams params1;
    SearchParams params2;
    std::string game_config_path;
    std::vector<std::string> level_paths;
    std::string gen_map;  // generator spec alternative to explicit levels
    std::string gen_composition = "K1W1A1H";
    int gen_count = 0;
    std::uint64_t gen_seed = 1;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::string out_path;
    int jobs = 1;
};

ExperimentConfig load_experiment_config(const std::string& text, const std::string& base_dir);
ExperimentConfig load_experiment_config_file(const std::string& path);

struct Levels {
    std::vector<GameState> states;
    std::vector<std::string> ids;
};

// Loads every referenced level (or generates them) before any game starts;
// a missing map or level file is a pre-flight error.
Levels resolve_levels(const ExperimentConfig& cfg);

std::vector<GameState> generate_levels(std::shared_ptr<const Grid> grid,
                                       std::shared_ptr<const GameConfig> rules,
                                       const std::string& composition, int count,
                                       std::uint64_t seed);

struct MatchRecord {
    int level = 0;
    std::uint64_t seed = 0;
    int side = 0;  // 0: agent1 is player 0; 1: swapped
    Outcome outcome;
    int winner_agent = 0;  // 1/2, 0 draw, -1 failed
    int turns = 0;
    bool failed = false;
    std::string error;
    int decisions[2] = {0, 0};             // indexed by agent (1-based minus 1)
    std::uint64_t fm_calls[2] = {0, 0};
    double wall_ms[2] = {0.0, 0.0};
    std::vector<DecisionRow> rows;
};

struct WinRateSummary {
    double mean[2] = {0.0, 0.0};  // per-agent mean win rate across seeds
    double stddev[2] = {0.0, 0.0};
    double draw_rate = 0.0;
    int games = 0;
    int failures = 0;
};

struct ExperimentResult {
    std::vector<MatchRecord> matches;
    WinRateSummary summary;
};

MatchRecord run_match(const GameState& level, int level_idx, const ExperimentConfig& cfg,
                      std::uint64_t seed, int side);

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Levels& levels);

// One run_experiment per abstraction proportion over shared levels and seeds.
std::vector<std::pair<double, ExperimentResult>> sweep_threshold(
    const ExperimentConfig& cfg, const Levels& levels,
    const std::vector<double>& proportions = {0.0, 0.25, 0.5, 0.75, 1.0});

struct CompressionPoint {
    int iteration;
    double mean;
    double stddev;
    int samples;
};

struct CompressionReport {
    std::vector<CompressionPoint> curve;
    double mean_decision_ms[2] = {0.0, 0.0};
    int decisions[2] = {0, 0};
};

CompressionReport measure_compression(const ExperimentResult& result);

// Seeded level files: "map <path>" then one placement line per unit, players
// on opposite map halves.
void write_level_files(const std::string& map_path, const std::string& composition, int count,
                       std::uint64_t seed, const std::string& out_dir);

std::string match_csv(const ExperimentConfig& cfg, const ExperimentResult& result,
                      const Levels& levels);
std::string summary_table(const ExperimentConfig& cfg, const WinRateSummary& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ktk
