#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ktk/search.hpp"

using namespace ktk;
using namespace ktk::test;

namespace {

// A searcher-to-act state with a King and a Warrior per player on an open
// board; positions vary with `variant` so equivalence runs cover distinct
// decision problems.
GameState squad_state(int variant) {
    int dx = variant % 3;
    int dy = (variant / 3) % 3;
    return make_state(open_grid(7, 7), {{0, UnitClass::King, 0, dy},
                                        {0, UnitClass::Warrior, 1 + dx, 2},
                                        {1, UnitClass::King, 6, 6 - dy},
                                        {1, UnitClass::Warrior, 5 - dx, 4}});
}

std::vector<int> order_of(const GameState& s, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 77, 0, 0));
    return draw_unit_order(s, s.active_player, rng);
}

UnitAction search_once(const GameState& s, SearchVariant v, const SearchParams& p,
                       std::uint64_t seed, SearchStats* stats = nullptr) {
    ForwardModel fm;
    Rng rng(seed);
    return run_search(s, v, p, order_of(s, seed), fm, rng, stats);
}

}  // namespace

TEST_CASE("evaluate_state") {
    SUBCASE("dead king is a loss from that side, a win from the other") {
        GameState s = make_state(open_grid(5, 5), {{1, UnitClass::King, 4, 4}});
        CHECK(evaluate_state(s, 0) == doctest::Approx(-1.0));
        CHECK(evaluate_state(s, 1) == doctest::Approx(1.0));
    }
    SUBCASE("draw at the turn limit is zero") {
        GameState s = two_kings();
        s.turn = s.rules->max_turns;
        CHECK(evaluate_state(s, 0) == doctest::Approx(0.0));
        CHECK(evaluate_state(s, 1) == doctest::Approx(0.0));
    }
    SUBCASE("distance three, opponent king at half health") {
        auto rules = std::make_shared<GameConfig>(GameConfig::defaults());
        rules->types[static_cast<int>(UnitClass::King)].max_health = 40;
        GameState s = make_state(open_grid(5, 5),
                                 {{0, UnitClass::King, 0, 0}, {1, UnitClass::King, 3, 0, 20}},
                                 rules);
        // 1 - 3*20 / ((5+5)*40)
        CHECK(evaluate_state(s, 0) == doctest::Approx(0.85));
    }
    SUBCASE("closest own unit sets the distance") {
        GameState s = make_state(open_grid(5, 5), {{0, UnitClass::King, 0, 0},
                                                   {0, UnitClass::Warrior, 3, 4},
                                                   {1, UnitClass::King, 4, 4}});
        double expected = 1.0 - 1.0 * 100.0 / (10.0 * 100.0);
        CHECK(evaluate_state(s, 0) == doctest::Approx(expected));
    }
    SUBCASE("bounded on random reachable states") {
        Rng rng(5);
        for (int rep = 0; rep < 30; ++rep) {
            GameState s = squad_state(rep % 9);
            ForwardModel fm;
            for (int step = 0; step < 40 && outcome(s).ongoing(); ++step)
                s = fm.apply(s, random_unit_action(s, rng));
            for (int p = 0; p < 2; ++p) {
                double v = evaluate_state(s, p);
                CHECK(v >= -1.0);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("ucb1") {
    CHECK(ucb1(1.0, 1.0, 1.0, 100.0) == doctest::Approx(1.0));
    CHECK(ucb1(0.5, 2.0, 8.0, 1.0) == doctest::Approx(0.25 + std::sqrt(std::log(8.0) / 2.0)));
    CHECK(ucb1(0.0, 0.0, 5.0, 1.0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("grouped siblings share one selection score") {
    // Two edges whose children sit in one group of two must both score
    // ucb1(X-hat, N-hat, parent N, C) under the documented rule.
    Group g{1, 0, {1, 2}, 0.9 + 0.3, 3.0 + 1.0};
    auto [xh, nh] = group_stats(g);
    double score = ucb1(xh, nh, 4.0, 1.0);
    CHECK(score == doctest::Approx(ucb1(0.6, 2.0, 4.0, 1.0)));
    // Same inputs, same score for both edges; grounded stats would differ.
    CHECK(ucb1(0.9, 3.0, 4.0, 1.0) != doctest::Approx(ucb1(0.3, 1.0, 4.0, 1.0)));
}

TEST_CASE("first iteration expands exactly one child") {
    SearchParams p;
    p.fm_budget = 1;
    p.rollout_length = 5;
    SearchStats stats;
    search_once(squad_state(0), SearchVariant::UnitOrdered, p, 1, &stats);
    CHECK(stats.iterations == 1);
    CHECK(stats.tree_nodes == 2);
}

TEST_CASE("budget is respected up to one reported overshoot") {
    SearchParams p;
    p.fm_budget = 500;
    p.rollout_length = 10;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SearchStats stats;
        search_once(squad_state(static_cast<int>(seed)), SearchVariant::UnitOrdered, p, seed,
                    &stats);
        CHECK(stats.fm_used >= p.fm_budget);
        CHECK(stats.fm_used == p.fm_budget + stats.overshoot);
        // An iteration's overshoot is bounded by the in-flight transition: the
        // expansion call plus a folded opponent turn (two units here).
        CHECK(stats.overshoot <= 8);
    }
}

TEST_CASE("identity-threshold elastic matches unit-ordered search") {
    SearchParams base;
    base.fm_budget = 400;
    base.rollout_length = 10;
    base.batch_size = 5;
    base.alpha_abs = 1e9;

    SearchParams never_merge = base;
    never_merge.abstraction.eta_reward = -1.0;
    never_merge.abstraction.eta_transition = -1.0;

    for (int rep = 0; rep < 10; ++rep) {
        GameState s = squad_state(rep % 9);
        std::uint64_t seed = 100 + rep;
        UnitAction a = search_once(s, SearchVariant::UnitOrdered, base, seed);
        UnitAction b = search_once(s, SearchVariant::Elastic, never_merge, seed);
        CHECK(a == b);
    }
}

TEST_CASE("alpha zero degenerates to plain unit-ordered search") {
    SearchParams base;
    base.fm_budget = 400;
    base.rollout_length = 10;
    base.batch_size = 5;

    SearchParams zero = base;
    zero.alpha_abs = 0.0;

    SearchParams zero_prop = base;
    zero_prop.alpha_abs = 0.0;
    zero_prop.alpha_is_proportion = true;

    for (int rep = 0; rep < 6; ++rep) {
        GameState s = squad_state(rep % 9);
        std::uint64_t seed = 200 + rep;
        UnitAction a = search_once(s, SearchVariant::UnitOrdered, base, seed);
        SearchStats st_iter, st_prop;
        CHECK(search_once(s, SearchVariant::Elastic, zero, seed, &st_iter) == a);
        CHECK(search_once(s, SearchVariant::Elastic, zero_prop, seed, &st_prop) == a);
        CHECK(st_iter.split_happened);
        CHECK(st_iter.split_iteration == 1);
        CHECK(st_prop.split_happened);
        CHECK(st_prop.split_iteration == 1);
    }
}

TEST_CASE("batch construction and split scheduling") {
    SearchParams p;
    p.fm_budget = 800;
    p.rollout_length = 10;
    p.batch_size = 4;
    p.alpha_abs = 12;
    SearchStats stats;
    search_once(squad_state(2), SearchVariant::Elastic, p, 9, &stats);
    REQUIRE(stats.iterations > 13);
    CHECK(stats.split_happened);
    CHECK(stats.split_iteration == 13);  // first iteration past alpha
    REQUIRE(stats.compression.size() == 3);
    CHECK(stats.compression[0].first == 4);
    CHECK(stats.compression[1].first == 8);
    CHECK(stats.compression[2].first == 12);
    for (const auto& [iter, rate] : stats.compression) CHECK(rate >= 1.0);
    CHECK(stats.groups == stats.tree_nodes);  // identity partition after split
}

TEST_CASE("full-proportion alpha never splits") {
    SearchParams p;
    p.fm_budget = 600;
    p.rollout_length = 10;
    p.batch_size = 5;
    p.alpha_abs = 1.0;
    p.alpha_is_proportion = true;
    SearchStats stats;
    search_once(squad_state(4), SearchVariant::Elastic, p, 21, &stats);
    CHECK(!stats.split_happened);
    CHECK(stats.split_iteration == -1);
    CHECK(!stats.compression.empty());
}

TEST_CASE("mid-proportion alpha splits once the budget share is spent") {
    SearchParams p;
    p.fm_budget = 600;
    p.rollout_length = 10;
    p.batch_size = 5;
    p.alpha_abs = 0.5;
    p.alpha_is_proportion = true;
    SearchStats stats;
    search_once(squad_state(5), SearchVariant::Elastic, p, 22, &stats);
    CHECK(stats.split_happened);
    CHECK(stats.split_iteration > 1);
    CHECK(stats.split_iteration < stats.iterations);
}

TEST_CASE("selection argmax is stable under joint reward and C scaling") {
    Rng rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        double xs[4], ns[4];
        double parent_n = 0.0;
        for (int i = 0; i < 4; ++i) {
            ns[i] = 1.0 + static_cast<double>(rng.below(20));
            xs[i] = ns[i] * rng.unit();
            parent_n += ns[i];
        }
        const double lambda = 0.01 + 10.0 * rng.unit();
        int best_a = 0, best_b = 0;
        for (int i = 1; i < 4; ++i) {
            if (ucb1(xs[i], ns[i], parent_n, 0.7) > ucb1(xs[best_a], ns[best_a], parent_n, 0.7))
                best_a = i;
            if (ucb1(lambda * xs[i], ns[i], parent_n, lambda * 0.7) >
                ucb1(lambda * xs[best_b], ns[best_b], parent_n, lambda * 0.7))
                best_b = i;
        }
        CHECK(best_a == best_b);
    }
}

TEST_CASE("run_search is deterministic under a fixed seed") {
    SearchParams p;
    p.fm_budget = 300;
    p.rollout_length = 10;
    GameState s = squad_state(7);
    for (auto v : {SearchVariant::Plain, SearchVariant::UnitOrdered, SearchVariant::Elastic}) {
        UnitAction a = search_once(s, v, p, 55);
        UnitAction b = search_once(s, v, p, 55);
        CHECK(a == b);
    }
}

TEST_CASE("build_turn runs one search per living unit") {
    SearchParams p;
    p.fm_budget = 200;
    p.rollout_length = 8;

    SUBCASE("single unit") {
        GameState s = two_kings(6, 6);
        ForwardModel fm;
        Rng rng(3);
        std::vector<SearchStats> stats;
        auto actions = build_turn(s, SearchVariant::UnitOrdered, p, order_of(s, 3), fm, rng,
                                  &stats);
        CHECK(actions.size() == 1);
        CHECK(stats.size() == 1);
        CHECK(s.active_player == 1);
    }
    SUBCASE("four units") {
        GameState s = make_state(open_grid(8, 8), {{0, UnitClass::King, 0, 0},
                                                   {0, UnitClass::Warrior, 1, 0},
                                                   {0, UnitClass::Archer, 0, 1},
                                                   {0, UnitClass::Healer, 1, 1},
                                                   {1, UnitClass::King, 7, 7}});
        ForwardModel fm;
        Rng rng(4);
        std::vector<SearchStats> stats;
        auto actions = build_turn(s, SearchVariant::UnitOrdered, p, order_of(s, 4), fm, rng,
                                  &stats);
        CHECK(actions.size() == 4);
        CHECK(stats.size() == 4);
        CHECK(s.active_player == 1);
        CHECK(fm.calls() == 4);  // real-state applications only
    }
}

TEST_CASE("draw_unit_order permutes exactly the player's units") {
    GameState s = make_state(open_grid(8, 8), {{0, UnitClass::King, 0, 0},
                                               {0, UnitClass::Warrior, 1, 0},
                                               {1, UnitClass::King, 7, 7},
                                               {1, UnitClass::Warrior, 6, 7},
                                               {1, UnitClass::Archer, 7, 6}});
    Rng rng(8);
    auto mine = draw_unit_order(s, 0, rng);
    auto theirs = draw_unit_order(s, 1, rng);
    std::sort(mine.begin(), mine.end());
    std::sort(theirs.begin(), theirs.end());
    CHECK(mine == std::vector<int>{0, 1});
    CHECK(theirs == std::vector<int>{2, 3, 4});
}
