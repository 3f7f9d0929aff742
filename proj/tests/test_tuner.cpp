#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ktk/tuner.hpp"

using namespace ktk;
using namespace ktk::test;

namespace {

// Exhaustive argmax over the whole grid, ties to the first in row-major order.
std::vector<int> brute_force_argmax(const ParamSpace& space,
                                    const std::function<double(const std::vector<int>&)>& f) {
    std::vector<int> c(space.dims.size(), 0), best;
    double best_f = -1e300;
    for (;;) {
        const double v = f(c);
        if (v > best_f) {
            best_f = v;
            best = c;
        }
        std::size_t i = 0;
        while (i < c.size()) {
            if (++c[i] < static_cast<int>(space.dims[i].values.size())) break;
            c[i++] = 0;
        }
        if (i == c.size()) break;
    }
    return best;
}

}  // namespace

TEST_CASE("parameter spaces") {
    ParamSpace mcts = ParamSpace::mcts_space();
    CHECK(mcts.size() == 20);
    REQUIRE(mcts.dims.size() == 2);
    CHECK(mcts.dims[0].values == std::vector<double>{0.1, 1.0, 10.0, 100.0});
    CHECK(mcts.dims[1].values == std::vector<double>{20, 40, 60, 80, 100});

    ParamSpace elastic = ParamSpace::elastic_space();
    CHECK(elastic.size() == 240);
    REQUIRE(elastic.dims.size() == 4);
    CHECK(elastic.dims[2].values == std::vector<double>{20, 40, 60});
    CHECK(elastic.dims[3].values == std::vector<double>{4, 8, 12, 16});
}

TEST_CASE("one-dimensional deterministic fitness converges") {
    ParamSpace space;
    space.dims.push_back({"C", {0.0, 1.0}});
    auto fitness = [&](const std::vector<int>& c) { return c[0] == 1 ? 1.0 : 0.0; };
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        auto best = ntbea_run(space, fitness, {}, rng);
        CHECK(best == std::vector<int>{1});
    }
}

TEST_CASE("constant fitness still returns an evaluated candidate") {
    ParamSpace space = ParamSpace::mcts_space();
    auto fitness = [](const std::vector<int>&) { return 0.5; };
    Rng rng(9);
    std::vector<NtbeaLogEntry> log;
    auto best = ntbea_run(space, fitness, {}, rng, &log);
    REQUIRE(best.size() == 2);
    bool evaluated = false;
    for (const auto& e : log)
        if (e.candidate == best) evaluated = true;
    CHECK(evaluated);
}

TEST_CASE("separable fitness recovers the brute-force argmax") {
    ParamSpace space = ParamSpace::mcts_space();
    auto fitness = [](const std::vector<int>& c) { return c[0] / 4.0 + c[1] / 5.0; };
    auto oracle = brute_force_argmax(space, fitness);
    REQUIRE(oracle == std::vector<int>{3, 4});
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Rng rng(seed);
        CHECK(ntbea_run(space, fitness, {}, rng) == oracle);
    }
}

TEST_CASE("log bookkeeping and reproducibility") {
    ParamSpace space = ParamSpace::elastic_space();
    auto fitness = [](const std::vector<int>& c) {
        return (c[0] + c[1] + c[2] + c[3]) / 14.0;
    };
    NtbeaOptions opts;
    opts.iterations = 25;

    Rng r1(5), r2(5);
    std::vector<NtbeaLogEntry> log1, log2;
    auto b1 = ntbea_run(space, fitness, opts, r1, &log1);
    auto b2 = ntbea_run(space, fitness, opts, r2, &log2);
    CHECK(b1 == b2);
    REQUIRE(log1.size() == 25);  // one evaluation per iteration
    REQUIRE(log2.size() == 25);
    for (std::size_t i = 0; i < log1.size(); ++i) {
        CHECK(log1[i].candidate == log2[i].candidate);
        CHECK(log1[i].fitness == log2[i].fitness);
        CHECK(log1[i].modeled_mean == log2[i].modeled_mean);
        REQUIRE(log1[i].candidate.size() == 4);
        for (std::size_t d = 0; d < 4; ++d) {
            CHECK(log1[i].candidate[d] >= 0);
            CHECK(log1[i].candidate[d] <
                  static_cast<int>(space.dims[d].values.size()));
        }
    }
}

TEST_CASE("empty space is rejected") {
    ParamSpace space;
    Rng rng(1);
    CHECK_THROWS_AS(ntbea_run(space, [](const std::vector<int>&) { return 0.0; }, {}, rng),
                    std::invalid_argument);
}

TEST_CASE("apply_candidate maps indices onto search parameters") {
    ParamSpace space = ParamSpace::elastic_space();
    SearchParams base;
    SearchParams p = apply_candidate(space, {0, 1, 0, 2}, base);
    CHECK(p.exploration_c == doctest::Approx(0.1));
    CHECK(p.rollout_length == 40);
    CHECK(p.batch_size == 20);
    CHECK(p.alpha_abs == doctest::Approx(240.0));  // 12 batches of 20
    CHECK(!p.alpha_is_proportion);

    SearchParams q = apply_candidate(ParamSpace::mcts_space(), {2, 4}, base);
    CHECK(q.exploration_c == doctest::Approx(10.0));
    CHECK(q.rollout_length == 100);
    CHECK(q.batch_size == base.batch_size);
}

TEST_CASE("presets carry the reported parameter sets") {
    SearchParams mcts = preset_params("paper_mcts");
    CHECK(mcts.exploration_c == doctest::Approx(0.1));
    CHECK(mcts.rollout_length == 20);

    SearchParams mcts_u = preset_params("paper_mcts_u");
    CHECK(mcts_u.exploration_c == doctest::Approx(10.0));
    CHECK(mcts_u.rollout_length == 100);

    SearchParams elastic = preset_params("paper_elastic");
    CHECK(elastic.exploration_c == doctest::Approx(0.1));
    CHECK(elastic.rollout_length == 40);
    CHECK(elastic.batch_size == 20);
    CHECK(elastic.alpha_abs == doctest::Approx(240.0));

    CHECK_THROWS_AS(preset_params("nope"), std::invalid_argument);
}

TEST_CASE("fitness against the combat agent") {
    ParamSpace space = ParamSpace::mcts_space();
    SearchParams base;
    base.fm_budget = 200;
    std::vector<GameState> levels = {two_kings(6, 6)};

    Rng rng(3);
    double f = fitness_vs_combat(space, {1, 0}, "mcts_u", base, levels, 4, rng);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);

    Rng single(4);
    double one = fitness_vs_combat(space, {1, 0}, "mcts_u", base, levels, 1, single);
    CHECK((one == 0.0 || one == 0.5 || one == 1.0));
}
