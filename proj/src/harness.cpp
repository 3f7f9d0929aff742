#include "ktk/harness.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace ktk {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty())
        fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::vector<std::pair<UnitClass, int>> parse_composition(const std::string& text) {
    std::vector<std::pair<UnitClass, int>> out;
    int kings = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        int count = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            count = count * 10 + (text[i++] - '0');
        if (i >= text.size()) throw std::invalid_argument("bad composition: " + text);
        if (count == 0) count = 1;
        UnitClass cls;
        switch (text[i]) {
            case 'K': cls = UnitClass::King; break;
            case 'W': cls = UnitClass::Warrior; break;
            case 'A': cls = UnitClass::Archer; break;
            case 'H': cls = UnitClass::Healer; break;
            default: throw std::invalid_argument("bad composition letter: " + text);
        }
        ++i;
        out.emplace_back(cls, count);
        if (cls == UnitClass::King) kings += count;
    }
    if (kings != 1) throw std::invalid_argument("composition needs exactly one King: " + text);
    return out;
}

namespace {

void apply_param_override(SearchParams& p, const std::string& key, const std::string& value) {
    if (key == "C") p.exploration_c = std::stod(value);
    else if (key == "L") p.rollout_length = std::stoi(value);
    else if (key == "B") p.batch_size = std::stoi(value);
    else if (key == "alpha") { p.alpha_abs = std::stod(value); p.alpha_is_proportion = false; }
    else if (key == "alpha_proportion") {
        p.alpha_abs = std::stod(value);
        p.alpha_is_proportion = true;
    } else if (key == "eta_r") p.abstraction.eta_reward = std::stod(value);
    else if (key == "eta_t") p.abstraction.eta_transition = std::stod(value);
    else if (key == "transition_error_mode") {
        if (value == "raw") p.abstraction.mode = TransitionErrorMode::Raw;
        else if (value == "normalized") p.abstraction.mode = TransitionErrorMode::Normalized;
        else throw std::invalid_argument("bad transition_error_mode: " + value);
    } else if (key == "fm_budget") p.fm_budget = std::stoull(value);
    else if (key == "preset") p = preset_params(value);
    else throw std::invalid_argument("unknown agent parameter: " + key);
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (fs::path(base_dir) / p).string();
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& text, const std::string& base_dir) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key, value;
        ls >> key;
        std::getline(ls, value);
        const auto first = value.find_first_not_of(" \t");
        value = first == std::string::npos ? "" : value.substr(first);
        if (value.empty()) throw std::invalid_argument("config line missing value: " + line);

        if (key == "agent1") cfg.agent1 = value;
        else if (key == "agent2") cfg.agent2 = value;
        else if (key == "game_config") cfg.game_config_path = resolve_path(base_dir, value);
        else if (key == "level") cfg.level_paths.push_back(resolve_path(base_dir, value));
        else if (key == "gen_map") cfg.gen_map = resolve_path(base_dir, value);
        else if (key == "gen_composition") cfg.gen_composition = value;
        else if (key == "gen_count") cfg.gen_count = std::stoi(value);
        else if (key == "gen_seed") cfg.gen_seed = std::stoull(value);
        else if (key == "out") cfg.out_path = value;
        else if (key == "jobs") cfg.jobs = std::stoi(value);
        else if (key == "fm_budget") {
            cfg.params1.fm_budget = std::stoull(value);
            cfg.params2.fm_budget = std::stoull(value);
        } else if (key == "seeds") {
            cfg.seeds.clear();
            std::istringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.seeds.push_back(std::stoull(tok));
            if (cfg.seeds.empty()) throw std::invalid_argument("seeds list is empty");
        } else if (key.rfind("agent1.", 0) == 0) {
            const std::uint64_t budget = cfg.params1.fm_budget;
            apply_param_override(cfg.params1, key.substr(7), value);
            if (key == "agent1.preset") cfg.params1.fm_budget = budget;
        } else if (key.rfind("agent2.", 0) == 0) {
            const std::uint64_t budget = cfg.params2.fm_budget;
            apply_param_override(cfg.params2, key.substr(7), value);
            if (key == "agent2.preset") cfg.params2.fm_budget = budget;
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    return cfg;
}

ExperimentConfig load_experiment_config_file(const std::string& path) {
    return load_experiment_config(read_file(path), fs::path(path).parent_path().string());
}

std::vector<GameState> generate_levels(std::shared_ptr<const Grid> grid,
                                       std::shared_ptr<const GameConfig> rules,
                                       const std::string& composition, int count,
                                       std::uint64_t seed) {
    const auto comp = parse_composition(composition);
    int per_player = 0;
    for (const auto& [cls, n] : comp) per_player += n;

    // Opposite halves: player 0 on the left, player 1 on the right.
    std::vector<std::pair<int, int>> half[2];
    for (int y = 0; y < grid->height; ++y)
        for (int x = 0; x < grid->width; ++x) {
            if (!grid->is_floor(x, y)) continue;
            if (x < grid->width / 2) half[0].emplace_back(x, y);
            else if (x >= grid->width - grid->width / 2) half[1].emplace_back(x, y);
        }
    for (int p = 0; p < 2; ++p)
        if (static_cast<int>(half[p].size()) < per_player)
            throw std::runtime_error("not enough Floor cells on half " + std::to_string(p));

    std::vector<GameState> levels;
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        GameState s;
        s.grid = grid;
        s.rules = rules;
        int next_id = 0;
        for (int p = 0; p < 2; ++p) {
            for (const auto& [cls, n] : comp) {
                for (int k = 0; k < n; ++k) {
                    for (;;) {
                        const auto& cell = half[p][rng.below(static_cast<int>(half[p].size()))];
                        if (s.unit_at(cell.first, cell.second)) continue;
                        Unit u;
                        u.id = next_id++;
                        u.owner = p;
                        u.cls = cls;
                        u.x = cell.first;
                        u.y = cell.second;
                        u.health = rules->spec(cls).max_health;
                        s.units.push_back(u);
                        break;
                    }
                }
            }
        }
        levels.push_back(std::move(s));
    }
    return levels;
}

Levels resolve_levels(const ExperimentConfig& cfg) {
    auto rules = std::make_shared<GameConfig>(
        cfg.game_config_path.empty() ? GameConfig::defaults()
                                     : load_game_config(read_file(cfg.game_config_path)));
    Levels out;
    if (!cfg.level_paths.empty()) {
        for (const auto& path : cfg.level_paths) {
            const std::string text = read_file(path);
            std::string map_path;
            std::istringstream in(text);
            std::string line;
            while (std::getline(in, line)) {
                if (line.rfind("map ", 0) == 0) {
                    map_path = resolve_path(fs::path(path).parent_path().string(),
                                            line.substr(4));
                    break;
                }
            }
            if (map_path.empty()) throw std::runtime_error("level missing 'map' line: " + path);
            auto grid = std::make_shared<Grid>(load_map(read_file(map_path)));
            out.states.push_back(load_level(text, grid, rules));
            out.ids.push_back(fs::path(path).filename().string());
        }
    } else if (cfg.gen_count > 0) {
        if (cfg.gen_map.empty()) throw std::runtime_error("gen_count set but gen_map missing");
        auto grid = std::make_shared<Grid>(load_map(read_file(cfg.gen_map)));
        out.states = generate_levels(grid, rules, cfg.gen_composition, cfg.gen_count,
                                     cfg.gen_seed);
        for (int i = 0; i < cfg.gen_count; ++i)
            out.ids.push_back("gen" + std::to_string(i));
    } else {
        throw std::runtime_error("config declares no levels (level/gen_* keys)");
    }
    return out;
}

MatchRecord run_match(const GameState& level, int level_idx, const ExperimentConfig& cfg,
                      std::uint64_t seed, int side) {
    MatchRecord rec;
    rec.level = level_idx;
    rec.seed = seed;
    rec.side = side;

    auto a1 = make_agent(cfg.agent1, cfg.params1);
    auto a2 = make_agent(cfg.agent2, cfg.params2);
    Agent* p0 = side == 0 ? a1.get() : a2.get();
    Agent* p1 = side == 0 ? a2.get() : a1.get();

    const PlayedGame game =
        play_game(level, *p0, *p1, derive_seed(seed, level_idx, side));
    rec.outcome = game.outcome;
    rec.turns = game.turns;
    rec.failed = game.failed;
    rec.error = game.error;
    if (game.failed) rec.winner_agent = -1;
    else if (game.outcome.kind == Outcome::Kind::Draw) rec.winner_agent = 0;
    else rec.winner_agent = (game.outcome.winner == side) ? 1 : 2;
    for (const auto& row : game.decisions) {
        const int agent = (row.player == side) ? 0 : 1;  // 0 -> agent1
        ++rec.decisions[agent];
        rec.fm_calls[agent] += row.fm_calls;
        rec.wall_ms[agent] += row.wall_ms;
    }
    rec.rows = game.decisions;
    return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Levels& levels) {
    struct Spec {
        int level;
        std::uint64_t seed;
        int side;
    };
    std::vector<Spec> specs;
    for (std::uint64_t seed : cfg.seeds)
        for (int l = 0; l < static_cast<int>(levels.states.size()); ++l)
            for (int side = 0; side < 2; ++side) specs.push_back({l, seed, side});

    ExperimentResult result;
    result.matches.resize(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            const Spec& sp = specs[i];
            result.matches[i] =
                run_match(levels.states[sp.level], sp.level, cfg, sp.seed, sp.side);
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Win rates per seed, then mean and population stddev across seeds.
    WinRateSummary& s = result.summary;
    std::vector<double> rate1, rate2;
    int draws = 0;
    for (std::uint64_t seed : cfg.seeds) {
        int games = 0, w1 = 0, w2 = 0;
        for (const auto& m : result.matches) {
            if (m.seed != seed) continue;
            if (m.failed) continue;
            ++games;
            if (m.winner_agent == 1) ++w1;
            else if (m.winner_agent == 2) ++w2;
        }
        if (games > 0) {
            rate1.push_back(static_cast<double>(w1) / games);
            rate2.push_back(static_cast<double>(w2) / games);
        }
    }
    for (const auto& m : result.matches) {
        ++s.games;
        if (m.failed) ++s.failures;
        else if (m.winner_agent == 0) ++draws;
    }
    auto mean_std = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= v.empty() ? 1 : v.size();
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= v.empty() ? 1 : v.size();
        return std::make_pair(mean, std::sqrt(var));
    };
    std::tie(s.mean[0], s.stddev[0]) = mean_std(rate1);
    std::tie(s.mean[1], s.stddev[1]) = mean_std(rate2);
    s.draw_rate = s.games > s.failures
                      ? static_cast<double>(draws) / (s.games - s.failures)
                      : 0.0;
    return result;
}

std::vector<std::pair<double, ExperimentResult>> sweep_threshold(
    const ExperimentConfig& cfg, const Levels& levels, const std::vector<double>& proportions) {
    std::vector<std::pair<double, ExperimentResult>> out;
    for (double p : proportions) {
        ExperimentConfig c = cfg;
        SearchParams* elastic = nullptr;
        if (c.agent1 == "elastic_mcts_u") elastic = &c.params1;
        else if (c.agent2 == "elastic_mcts_u") elastic = &c.params2;
        else throw std::runtime_error("sweep requires an elastic_mcts_u agent");
        elastic->alpha_is_proportion = true;
        elastic->alpha_abs = p;
        out.emplace_back(p, run_experiment(c, levels));
    }
    return out;
}

CompressionReport measure_compression(const ExperimentResult& result) {
    CompressionReport report;
    std::map<int, std::vector<double>> by_iteration;
    for (const auto& m : result.matches) {
        for (const auto& row : m.rows) {
            const int agent = (row.player == m.side) ? 0 : 1;
            report.mean_decision_ms[agent] += row.wall_ms;
            ++report.decisions[agent];
            for (const auto& [iter, rate] : row.compression) by_iteration[iter].push_back(rate);
        }
    }
    for (int a = 0; a < 2; ++a)
        if (report.decisions[a] > 0) report.mean_decision_ms[a] /= report.decisions[a];
    for (const auto& [iter, rates] : by_iteration) {
        double mean = 0.0;
        for (double r : rates) mean += r;
        mean /= rates.size();
        double var = 0.0;
        for (double r : rates) var += (r - mean) * (r - mean);
        var /= rates.size();
        report.curve.push_back({iter, mean, std::sqrt(var), static_cast<int>(rates.size())});
    }
    return report;
}

void write_level_files(const std::string& map_path, const std::string& composition, int count,
                       std::uint64_t seed, const std::string& out_dir) {
    auto grid = std::make_shared<Grid>(load_map(read_file(map_path)));
    auto rules = std::make_shared<GameConfig>(GameConfig::defaults());
    const auto levels = generate_levels(grid, rules, composition, count, seed);
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        std::ostringstream out;
        out << "map " << fs::absolute(map_path).string() << "\n";
        for (const auto& u : levels[i].units)
            out << u.owner << " " << unit_class_name(u.cls) << " " << u.x << " " << u.y << "\n";
        std::ostringstream name;
        name << "level_" << std::setw(3) << std::setfill('0') << i << ".txt";
        write_file((fs::path(out_dir) / name.str()).string(), out.str());
    }
}

std::string match_csv(const ExperimentConfig& cfg, const ExperimentResult& result,
                      const Levels& levels) {
    std::ostringstream out;
    out << "level,seed,side,agent1,agent2,outcome,winner_agent,turns,"
           "decisions1,decisions2,fm_calls1,fm_calls2\n";
    for (const auto& m : result.matches) {
        out << levels.ids[m.level] << "," << m.seed << "," << m.side << "," << cfg.agent1 << ","
            << cfg.agent2 << "," << (m.failed ? "failed" : to_string(m.outcome)) << ","
            << m.winner_agent << "," << m.turns << "," << m.decisions[0] << "," << m.decisions[1]
            << "," << m.fm_calls[0] << "," << m.fm_calls[1] << "\n";
    }
    return out.str();
}

std::string summary_table(const ExperimentConfig& cfg, const WinRateSummary& s) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1);
    out << std::setw(18) << "Agent 1" << std::setw(18) << "Agent 2" << std::setw(16) << "Agent 1"
        << std::setw(16) << "Agent 2" << "\n";
    out << std::setw(18) << cfg.agent1 << std::setw(18) << cfg.agent2 << std::setw(9)
        << s.mean[0] * 100 << "+-" << s.stddev[0] * 100 << "%" << std::setw(9) << s.mean[1] * 100
        << "+-" << s.stddev[1] * 100 << "%"
        << "\n";
    out << "games " << s.games << ", draws " << std::setprecision(3) << s.draw_rate * 100
        << "%, failures " << s.failures << "\n";
    return out.str();
}

}  // namespace ktk
