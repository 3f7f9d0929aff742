#include "ktk/search.hpp"

#include <chrono>
#include <cmath>

namespace ktk {

double evaluate_state(const GameState& s, int perspective) {
    const Outcome o = outcome(s);
    if (o.kind == Outcome::Kind::Win) return o.winner == perspective ? 1.0 : -1.0;
    if (o.kind == Outcome::Kind::Draw) return 0.0;
    const Unit* opp_king = s.king_of(1 - perspective);
    int d = s.grid->width + s.grid->height;
    for (const auto& u : s.units)
        if (u.owner == perspective)
            d = std::min(d, manhattan(u.x, u.y, opp_king->x, opp_king->y));
    const int max_d = s.grid->width + s.grid->height;
    const int max_h = s.rules->spec(UnitClass::King).max_health;
    return 1.0 - static_cast<double>(d) * opp_king->health / (static_cast<double>(max_d) * max_h);
}

std::vector<int> draw_unit_order(const GameState& s, int player, Rng& rng) {
    std::vector<int> ids;
    for (const auto& u : s.units)
        if (u.owner == player) ids.push_back(u.id);
    rng.shuffle(ids);
    return ids;
}

namespace {

struct Searcher {
    const SearchParams& p;
    SearchVariant variant;
    const std::vector<int>& order;
    ForwardModel& fm;
    Rng& rng;
    int me;  // searching player
    std::uint64_t start_calls;
    Tree tree;
    Abstraction abs;
    std::vector<int> path;

    std::uint64_t used() const { return fm.calls() - start_calls; }

    SearchNode make_node(GameState&& st, int parent, int depth, const UnitAction& from,
                         const Signature& sig) {
        SearchNode n;
        n.parent = parent;
        n.depth = depth;
        n.from_action = from;
        n.signature = sig;
        n.terminal = !outcome(st).ongoing();
        if (!n.terminal) {
            if (variant == SearchVariant::Plain) {
                n.slot = -2;
                for (const auto& u : st.units) {
                    if (u.owner != me || u.acted) continue;
                    auto acts = legal_unit_actions(st, u.id);
                    n.actions.insert(n.actions.end(), acts.begin(), acts.end());
                }
            } else {
                for (int i = 0; i < static_cast<int>(order.size()); ++i) {
                    const Unit* u = st.find_unit(order[i]);
                    if (u && !u->acted) {
                        n.slot = i;
                        n.actions = legal_unit_actions(st, u->id);
                        break;
                    }
                }
            }
        }
        n.state = std::move(st);
        return n;
    }

    // Apply the edge action, then fold in the opponent's full random turn so
    // every non-terminal node is a searcher-to-act state.
    GameState transition(const GameState& s, const UnitAction& a, Signature& sig) {
        GameState c = fm.apply(s, a);
        const Unit* actor = c.find_unit(a.unit_id);
        sig.x = actor->x;
        sig.y = actor->y;
        sig.health = actor->health;
        if (a.target_id) {
            sig.has_target = true;
            sig.target_id = *a.target_id;
            const Unit* t = c.find_unit(*a.target_id);
            sig.target_health = t ? t->health : 0;
        }
        while (outcome(c).ongoing() && c.active_player != me)
            c = fm.apply(c, random_unit_action(c, rng));
        return c;
    }

    double rollout(GameState st) {
        for (int i = 0; i < p.rollout_length; ++i) {
            if (!outcome(st).ongoing()) break;
            if (used() >= p.fm_budget) break;  // clean abort, evaluate what we have
            st = fm.apply(st, random_unit_action(st, rng));
        }
        return evaluate_state(st, me);
    }

    int select_child(int node) {
        const SearchNode& n = tree[node];
        int best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n.expanded(); ++i) {
            const SearchNode& c = tree[n.children[i]];
            double x, cnt;
            if (c.group >= 0) {
                x = abs.groups[c.group].mean_x();
                cnt = abs.groups[c.group].mean_n();
            } else {
                x = c.reward_sum;
                cnt = c.visits;
            }
            const double v = ucb1(x, cnt, n.visits, p.exploration_c);
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        return n.children[best];
    }

    void backprop(double r) {
        for (int id : path) {
            SearchNode& n = tree[id];
            n.reward_sum += r;
            n.visits += 1.0;
            if (n.group >= 0) {
                abs.groups[n.group].sum_x += r;
                abs.groups[n.group].sum_n += 1.0;
            }
        }
    }

    void iteration() {
        path.clear();
        int cur = 0;
        double r;
        for (;;) {
            path.push_back(cur);
            if (tree[cur].terminal) {
                r = evaluate_state(tree[cur].state, me);
                break;
            }
            if (!tree[cur].fully_expanded()) {
                const int ai = tree[cur].expanded();
                const UnitAction action = tree[cur].actions[ai];
                Signature sig;
                GameState child_state = transition(tree[cur].state, action, sig);
                SearchNode child =
                    make_node(std::move(child_state), cur, tree[cur].depth + 1, action, sig);
                const int id = tree.size();
                tree.nodes.push_back(std::move(child));
                tree[cur].children.push_back(id);
                path.push_back(id);
                r = rollout(tree[id].state);
                break;
            }
            cur = select_child(cur);
        }
        backprop(r);
    }
};

}  // namespace

UnitAction run_search(const GameState& root, SearchVariant variant, const SearchParams& params,
                      const std::vector<int>& unit_order, ForwardModel& fm, Rng& rng,
                      SearchStats* stats) {
    const auto t0 = std::chrono::steady_clock::now();
    Searcher s{params, variant, unit_order, fm, rng, root.active_player, fm.calls(), {}, {}, {}};
    {
        GameState copy = root;
        s.tree.nodes.push_back(s.make_node(std::move(copy), -1, 0, {}, {}));
    }
    if (s.tree[0].terminal || s.tree[0].actions.empty())
        throw EngineError("run_search: root has no decision to make");

    bool grouping = variant == SearchVariant::Elastic;
    bool ever_split = false;
    int split_iteration = -1;
    int iter = 0;
    std::vector<std::pair<int, double>> compression;

    // Iterations that end at an already-expanded terminal node cost no forward
    // model calls; the iteration cap keeps near-terminal searches from
    // spinning on the budget check alone.
    while (s.used() < params.fm_budget &&
           static_cast<std::uint64_t>(iter) < params.fm_budget) {
        s.iteration();
        ++iter;
        if (grouping) {
            const bool past_alpha =
                params.alpha_is_proportion
                    ? (params.alpha_abs < 1.0 &&
                       static_cast<double>(s.used()) > params.alpha_abs * params.fm_budget)
                    : iter > static_cast<int>(params.alpha_abs);
            if (past_alpha) {
                split_abstraction(s.tree, s.abs);
                grouping = false;
                ever_split = true;
                split_iteration = iter;
            } else if (params.batch_size > 0 && iter % params.batch_size == 0) {
                construct_abstraction(s.tree, s.abs, params.abstraction);
                compression.emplace_back(iter, compression_rate(s.tree, s.abs));
            }
        }
    }

    // Recommendation: max visit count, ties by mean return, then lowest action
    // index. While grouped (never split), group statistics stand in for the
    // ground ones.
    const SearchNode& r = s.tree[0];
    const bool use_groups = grouping && !s.abs.identity();
    int best = 0;
    double best_n = -1.0, best_x = 0.0;
    for (int i = 0; i < r.expanded(); ++i) {
        const SearchNode& c = s.tree[r.children[i]];
        double n = c.visits, x = c.reward_sum;
        if (use_groups && c.group >= 0) {
            n = s.abs.groups[c.group].mean_n();
            x = s.abs.groups[c.group].mean_x();
        }
        const double mean = n > 0 ? x / n : 0.0;
        const double best_mean = best_n > 0 ? best_x / best_n : 0.0;
        if (n > best_n || (n == best_n && mean > best_mean)) {
            best = i;
            best_n = n;
            best_x = x;
        }
    }

    if (stats) {
        stats->iterations = iter;
        stats->fm_used = s.used();
        stats->overshoot = s.used() > params.fm_budget ? s.used() - params.fm_budget : 0;
        stats->tree_nodes = s.tree.size();
        stats->groups = s.abs.group_count(s.tree);
        stats->split_happened = ever_split;
        stats->split_iteration = split_iteration;
        stats->compression = std::move(compression);
        stats->wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    }
    return r.expanded() > 0 ? r.actions[best] : r.actions[0];
}

std::vector<UnitAction> build_turn(GameState& state, SearchVariant variant,
                                   const SearchParams& params, const std::vector<int>& unit_order,
                                   ForwardModel& real_fm, Rng& rng,
                                   std::vector<SearchStats>* stats) {
    const int me = state.active_player;
    std::vector<UnitAction> chosen;
    while (outcome(state).ongoing() && state.active_player == me) {
        ForwardModel search_fm;
        SearchStats st;
        UnitAction a = run_search(state, variant, params, unit_order, search_fm, rng, &st);
        state = real_fm.apply(state, a);
        chosen.push_back(a);
        if (stats) stats->push_back(std::move(st));
    }
    return chosen;
}

}  // namespace ktk
