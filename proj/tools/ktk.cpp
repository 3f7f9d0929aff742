#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ktk/harness.hpp"

namespace {

using namespace ktk;

ExperimentConfig load_config_with_overrides(const std::string& config_path, std::uint64_t seed,
                                            std::uint64_t fm_budget, const std::string& out,
                                            int jobs) {
    ExperimentConfig cfg = load_experiment_config_file(config_path);
    if (seed != 0) cfg.seeds = {seed};
    if (fm_budget != 0) {
        cfg.params1.fm_budget = fm_budget;
        cfg.params2.fm_budget = fm_budget;
    }
    if (!out.empty()) cfg.out_path = out;
    if (jobs != 0) cfg.jobs = jobs;
    return cfg;
}

void emit(const std::string& out_path, const std::string& csv) {
    if (out_path.empty()) std::cout << csv;
    else write_file(out_path, csv);
}

int cmd_play(const ExperimentConfig& cfg) {
    const Levels levels = resolve_levels(cfg);
    const MatchRecord m = run_match(levels.states[0], 0, cfg, cfg.seeds[0], 0);
    std::cout << "outcome: " << (m.failed ? "failed: " + m.error : to_string(m.outcome))
              << " after " << m.turns << " turns\n";
    std::ostringstream csv;
    csv << "decision,player,turn,iterations,fm_calls,wall_ms,tree_nodes,groups\n";
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        const auto& r = m.rows[i];
        csv << i << "," << r.player << "," << r.turn << "," << r.iterations << "," << r.fm_calls
            << "," << std::fixed << std::setprecision(2) << r.wall_ms << "," << r.tree_nodes
            << "," << r.groups << "\n";
    }
    emit(cfg.out_path, csv.str());
    return m.failed ? 1 : 0;
}

int cmd_experiment(const ExperimentConfig& cfg) {
    const Levels levels = resolve_levels(cfg);
    const ExperimentResult result = run_experiment(cfg, levels);
    emit(cfg.out_path, match_csv(cfg, result, levels));
    std::cout << summary_table(cfg, result.summary);
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
    const Levels levels = resolve_levels(cfg);
    const auto rows = sweep_threshold(cfg, levels);
    std::ostringstream csv;
    csv << "proportion,agent1,win1,std1,agent2,win2,std2,draws,games\n";
    for (const auto& [p, res] : rows) {
        const auto& s = res.summary;
        csv << p << "," << cfg.agent1 << "," << s.mean[0] << "," << s.stddev[0] << ","
            << cfg.agent2 << "," << s.mean[1] << "," << s.stddev[1] << "," << s.draw_rate << ","
            << s.games << "\n";
        std::cout << std::fixed << std::setprecision(1) << p * 100 << "%  " << cfg.agent1 << " "
                  << s.mean[0] * 100 << "+-" << s.stddev[0] * 100 << "%  " << cfg.agent2 << " "
                  << s.mean[1] * 100 << "+-" << s.stddev[1] * 100 << "%\n";
    }
    emit(cfg.out_path, csv.str());
    return 0;
}

int cmd_compress(const ExperimentConfig& cfg) {
    const Levels levels = resolve_levels(cfg);
    const ExperimentResult result = run_experiment(cfg, levels);
    const CompressionReport report = measure_compression(result);
    std::ostringstream csv;
    csv << "iteration,mean,std,samples\n";
    for (const auto& p : report.curve)
        csv << p.iteration << "," << p.mean << "," << p.stddev << "," << p.samples << "\n";
    emit(cfg.out_path, csv.str());
    std::cout << "mean decision ms: " << cfg.agent1 << " " << report.mean_decision_ms[0] << ", "
              << cfg.agent2 << " " << report.mean_decision_ms[1] << "\n";
    return 0;
}

int cmd_tune(const ExperimentConfig& cfg, const std::string& agent, int games_per_eval,
             const std::string& preset_out) {
    const Levels levels = resolve_levels(cfg);
    const ParamSpace space =
        agent == "elastic_mcts_u" ? ParamSpace::elastic_space() : ParamSpace::mcts_space();
    SearchParams base = cfg.params1;
    Rng rng(cfg.seeds[0]);
    std::vector<NtbeaLogEntry> log;
    const auto winner = ntbea_run(
        space,
        [&](const std::vector<int>& c) {
            return fitness_vs_combat(space, c, agent, base, levels.states, games_per_eval, rng);
        },
        NtbeaOptions{}, rng, &log);

    std::ostringstream csv;
    csv << "iteration";
    for (const auto& d : space.dims) csv << "," << d.name;
    csv << ",fitness,modeled_mean\n";
    for (const auto& e : log) {
        csv << e.iteration;
        for (std::size_t i = 0; i < space.dims.size(); ++i)
            csv << "," << space.dims[i].values[e.candidate[i]];
        csv << "," << e.fitness << "," << e.modeled_mean << "\n";
    }
    emit(cfg.out_path, csv.str());

    const SearchParams tuned = apply_candidate(space, winner, base);
    std::ostringstream preset;
    preset << "agent1 " << agent << "\n";
    preset << "agent1.C " << tuned.exploration_c << "\n";
    preset << "agent1.L " << tuned.rollout_length << "\n";
    if (agent == "elastic_mcts_u") {
        preset << "agent1.B " << tuned.batch_size << "\n";
        preset << "agent1.alpha " << tuned.alpha_abs << "\n";
    }
    std::cout << preset.str();
    if (!preset_out.empty()) write_file(preset_out, preset.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kill The King search laboratory"};
    app.require_subcommand(1);

    std::string config_path, out, tune_agent = "mcts_u", preset_out, gen_map,
                gen_composition = "K1W1A1H", gen_out = "levels";
    std::uint64_t seed = 0, fm_budget = 0, gen_seed = 1;
    int jobs = 0, games_per_eval = 4, gen_count = 10;

    auto add_common = [&](CLI::App* cmd, bool need_config) {
        auto* opt = cmd->add_option("--config", config_path, "experiment config file");
        if (need_config) opt->required();
        cmd->add_option("--seed", seed, "override: single master seed");
        cmd->add_option("--fm-budget", fm_budget, "override: forward-model budget per decision");
        cmd->add_option("--out", out, "override: output CSV path");
        cmd->add_option("--jobs", jobs, "override: concurrent matches");
    };

    auto* play = app.add_subcommand("play", "play one match and log per-decision stats");
    add_common(play, true);
    auto* experiment = app.add_subcommand("experiment", "run a win-rate tournament");
    add_common(experiment, true);
    auto* sweep = app.add_subcommand("sweep", "abstraction-proportion threshold sweep");
    add_common(sweep, true);
    auto* compress = app.add_subcommand("compress", "measure compression rate per iteration");
    add_common(compress, true);
    auto* tune = app.add_subcommand("tune", "NTBEA parameter tuning vs the combat agent");
    add_common(tune, true);
    tune->add_option("--agent", tune_agent, "agent to tune: mcts|mcts_u|elastic_mcts_u");
    tune->add_option("--games", games_per_eval, "games per fitness evaluation");
    tune->add_option("--preset-out", preset_out, "write the tuned preset here");
    auto* gen = app.add_subcommand("gen-levels", "generate seeded level files");
    gen->add_option("--map", gen_map, "MovingAI map file")->required();
    gen->add_option("--composition", gen_composition, "army composition, e.g. K1W1A1H");
    gen->add_option("--count", gen_count, "number of levels");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            ktk::write_level_files(gen_map, gen_composition, gen_count, gen_seed, gen_out);
            std::cout << "wrote " << gen_count << " levels to " << gen_out << "\n";
            return 0;
        }
        const ExperimentConfig cfg =
            load_config_with_overrides(config_path, seed, fm_budget, out, jobs);
        if (play->parsed()) return cmd_play(cfg);
        if (experiment->parsed()) return cmd_experiment(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (compress->parsed()) return cmd_compress(cfg);
        if (tune->parsed()) return cmd_tune(cfg, tune_agent, games_per_eval, preset_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
