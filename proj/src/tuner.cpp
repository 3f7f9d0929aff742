#include "ktk/tuner.hpp"

#include <algorithm>
#include <cmath>

namespace ktk {

std::size_t ParamSpace::size() const {
    std::size_t n = 1;
    for (const auto& d : dims) n *= d.values.size();
    return n;
}

std::vector<int> ParamSpace::random_candidate(Rng& rng) const {
    std::vector<int> c(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i)
        c[i] = rng.below(static_cast<int>(dims[i].values.size()));
    return c;
}

ParamSpace ParamSpace::mcts_space() {
    ParamSpace s;
    s.dims.push_back({"C", {0.1, 1.0, 10.0, 100.0}});
    s.dims.push_back({"L", {20, 40, 60, 80, 100}});
    return s;
}

ParamSpace ParamSpace::elastic_space() {
    ParamSpace s = mcts_space();
    s.dims.push_back({"B", {20, 40, 60}});
    s.dims.push_back({"alpha_batches", {4, 8, 12, 16}});
    return s;
}

namespace {

struct TupleTable {
    std::vector<int> dims;  // dimension indices this tuple projects onto
    std::map<std::vector<int>, std::pair<double, int>> cells;  // sum, count
    long long total = 0;

    std::vector<int> project(const std::vector<int>& c) const {
        std::vector<int> key(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i) key[i] = c[dims[i]];
        return key;
    }
};

std::vector<TupleTable> make_tuples(std::size_t n_dims) {
    std::vector<TupleTable> tuples;
    for (std::size_t i = 0; i < n_dims; ++i) tuples.push_back({{static_cast<int>(i)}, {}, 0});
    for (std::size_t i = 0; i < n_dims; ++i)
        for (std::size_t j = i + 1; j < n_dims; ++j)
            tuples.push_back({{static_cast<int>(i), static_cast<int>(j)}, {}, 0});
    if (n_dims > 2) {
        std::vector<int> all(n_dims);
        for (std::size_t i = 0; i < n_dims; ++i) all[i] = static_cast<int>(i);
        tuples.push_back({all, {}, 0});
    }
    return tuples;
}

double model_score(const std::vector<TupleTable>& tuples, const std::vector<int>& c, double k,
                   double eps) {
    double sum = 0.0;
    for (const auto& t : tuples) {
        auto it = t.cells.find(t.project(c));
        double mean = 0.0;
        int count = 0;
        if (it != t.cells.end()) {
            mean = it->second.first / it->second.second;
            count = it->second.second;
        }
        const double total = static_cast<double>(std::max<long long>(t.total, 1));
        sum += mean + k * std::sqrt(std::log(total + 1.0) / (count + eps));
    }
    return sum / tuples.size();
}

double model_mean(const std::vector<TupleTable>& tuples, const std::vector<int>& c) {
    double sum = 0.0;
    for (const auto& t : tuples) {
        auto it = t.cells.find(t.project(c));
        if (it != t.cells.end()) sum += it->second.first / it->second.second;
    }
    return sum / tuples.size();
}

}  // namespace

std::vector<int> ntbea_run(const ParamSpace& space,
                           const std::function<double(const std::vector<int>&)>& fitness,
                           const NtbeaOptions& opts, Rng& rng, std::vector<NtbeaLogEntry>* log) {
    if (space.dims.empty() || space.size() == 0) throw std::invalid_argument("empty param space");
    const std::size_t n = space.dims.size();
    auto tuples = make_tuples(n);
    const TupleTable& full = tuples.back();

    std::vector<std::vector<int>> evaluated;
    std::vector<int> current = space.random_candidate(rng);

    auto mutate = [&](const std::vector<int>& base) {
        std::vector<int> c = base;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.below(static_cast<int>(n)) == 0)
                c[i] = rng.below(static_cast<int>(space.dims[i].values.size()));
        if (c == base) {
            const int dim = rng.below(static_cast<int>(n));
            const int options = static_cast<int>(space.dims[dim].values.size());
            if (options > 1) c[dim] = (c[dim] + 1 + rng.below(options - 1)) % options;
        }
        return c;
    };

    for (int iter = 0; iter < opts.iterations; ++iter) {
        const double f = fitness(current);
        for (auto& t : tuples) {
            auto& cell = t.cells[t.project(current)];
            cell.first += f;
            cell.second += 1;
            ++t.total;
        }
        if (std::find(evaluated.begin(), evaluated.end(), current) == evaluated.end())
            evaluated.push_back(current);
        if (log)
            log->push_back({iter, current, f, model_mean(tuples, current)});

        std::vector<int> best = mutate(current);
        double best_score = model_score(tuples, best, opts.bandit_k, opts.epsilon);
        for (int i = 1; i < opts.neighbors; ++i) {
            std::vector<int> cand = mutate(current);
            const double score = model_score(tuples, cand, opts.bandit_k, opts.epsilon);
            if (score > best_score) {
                best_score = score;
                best = std::move(cand);
            }
        }
        current = std::move(best);
    }

    // Winner: highest modeled mean among evaluated candidates; ties go to the
    // most-visited, then the earliest evaluated.
    std::vector<int> winner = evaluated.front();
    double winner_mean = model_mean(tuples, winner);
    auto visits = [&](const std::vector<int>& c) {
        auto it = full.cells.find(full.project(c));
        return it == full.cells.end() ? 0 : it->second.second;
    };
    for (const auto& c : evaluated) {
        const double m = model_mean(tuples, c);
        if (m > winner_mean || (m == winner_mean && visits(c) > visits(winner))) {
            winner = c;
            winner_mean = m;
        }
    }
    return winner;
}

SearchParams apply_candidate(const ParamSpace& space, const std::vector<int>& candidate,
                             SearchParams base) {
    double batch = base.batch_size;
    double alpha_batches = -1;
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const double v = space.dims[i].values[candidate[i]];
        const std::string& name = space.dims[i].name;
        if (name == "C") base.exploration_c = v;
        else if (name == "L") base.rollout_length = static_cast<int>(v);
        else if (name == "B") { base.batch_size = static_cast<int>(v); batch = v; }
        else if (name == "alpha_batches") alpha_batches = v;
        else throw std::invalid_argument("unknown tuning dimension: " + name);
    }
    if (alpha_batches > 0) {
        base.alpha_abs = alpha_batches * batch;
        base.alpha_is_proportion = false;
    }
    return base;
}

double fitness_vs_combat(const ParamSpace& space, const std::vector<int>& candidate,
                         const std::string& agent_name, const SearchParams& base,
                         const std::vector<GameState>& levels, int games, Rng& rng) {
    const SearchParams params = apply_candidate(space, candidate, base);
    double score = 0.0;
    for (int g = 0; g < games; ++g) {
        auto tuned = make_agent(agent_name, params);
        auto combat = make_agent("combat", params);
        const GameState& level = levels[g % levels.size()];
        const int side = g % 2;  // which player the tuned agent is
        Agent* p0 = side == 0 ? tuned.get() : combat.get();
        Agent* p1 = side == 0 ? combat.get() : tuned.get();
        const PlayedGame played = play_game(level, *p0, *p1, rng.next());
        if (played.failed) continue;
        if (played.outcome.kind == Outcome::Kind::Draw) score += 0.5;
        else if (played.outcome.winner == side) score += 1.0;
    }
    return score / games;
}

SearchParams preset_params(const std::string& name) {
    SearchParams p;
    if (name == "paper_mcts") {
        p.exploration_c = 0.1;
        p.rollout_length = 20;
    } else if (name == "paper_mcts_u") {
        p.exploration_c = 10.0;
        p.rollout_length = 100;
    } else if (name == "paper_elastic") {
        p.exploration_c = 0.1;
        p.rollout_length = 40;
        p.batch_size = 20;
        p.alpha_abs = 240;  // 12 batches of 20
        p.alpha_is_proportion = false;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return p;
}

}  // namespace ktk
