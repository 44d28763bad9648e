#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sbn/errors.hpp"
#include "sbn/pipeline.hpp"

namespace {

int exit_code_for(const std::string& error_class) {
  if (error_class == "config") return 2;
  if (error_class == "io") return 3;
  if (error_class == "shape") return 4;
  if (error_class == "capacity") return 5;
  if (error_class == "budget") return 6;
  if (error_class == "generation") return 7;
  if (error_class == "completeness") return 8;
  return 1;
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::string> mode;
  std::optional<std::string> fitness;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "flat key=value config file");
  cmd->add_option("--out", flags.output_dir, "output directory");
  cmd->add_option("--mode", flags.mode, "evaluation mode: desk or exact");
  cmd->add_option("--fitness", flags.fitness, "fitness: diff, lin, or alg");
  cmd->add_option("--parallelism", flags.parallelism, "worker threads");
  cmd->add_option("--seed", flags.seed, "base RNG seed");
}

/* Config file first, then explicit flags on top. */
void resolve(const CommonFlags& flags, sbn::ExperimentConfig& experiment,
             sbn::AnalysisConfig& analysis) {
  if (!flags.config_path.empty())
    sbn::apply_config(sbn::parse_config_file(flags.config_path), experiment, analysis);
  if (flags.output_dir) {
    experiment.output_dir = *flags.output_dir;
    analysis.output_dir = *flags.output_dir;
  }
  if (flags.mode) {
    if (*flags.mode == "desk")
      experiment.ga.mode = sbn::EvalMode::Desk;
    else if (*flags.mode == "exact")
      experiment.ga.mode = sbn::EvalMode::Exact;
    else
      throw sbn::ConfigError("mode must be desk or exact, got '" + *flags.mode + "'");
  }
  if (flags.fitness) experiment.ga.fitness_id = sbn::fitness_from_string(*flags.fitness);
  if (flags.parallelism) experiment.parallelism = *flags.parallelism;
  if (flags.seed) experiment.seeds = {*flags.seed};
}

sbn::AggregateStat stat_from_string(const std::string& s) {
  if (s == "best") return sbn::AggregateStat::Best;
  if (s == "mean") return sbn::AggregateStat::Mean;
  throw sbn::ConfigError("stat must be best or mean, got '" + s + "'");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"constraint-space network evolution and landscape analysis"};
  app.require_subcommand(1);

  CommonFlags flags;
  int arch_id = 0;
  std::string network_path, table_path, save_path, stat_name = "best";

  CLI::App* cmd_generate = app.add_subcommand("generate", "sample one network of a class");
  cmd_generate->add_option("--arch", arch_id, "architecture class id 0..63")
      ->required()
      ->check(CLI::Range(0, 63));
  cmd_generate->add_option("--save", save_path, "write the network here instead of stdout");
  add_common(cmd_generate, flags);

  CLI::App* cmd_evaluate = app.add_subcommand("evaluate", "score a serialized network");
  cmd_evaluate->add_option("--network", network_path, "network file")->required();
  add_common(cmd_evaluate, flags);

  CLI::App* cmd_evolve = app.add_subcommand("evolve", "run the GA inside one class");
  cmd_evolve->add_option("--arch", arch_id, "architecture class id 0..63")
      ->required()
      ->check(CLI::Range(0, 63));
  cmd_evolve->add_option("--save", save_path, "write the best network here");
  add_common(cmd_evolve, flags);

  CLI::App* cmd_experiment = app.add_subcommand("experiment", "sweep all 64 classes");
  add_common(cmd_experiment, flags);

  CLI::App* cmd_analyze = app.add_subcommand("analyze", "run the analysis ladder on a results table");
  cmd_analyze->add_option("--table", table_path, "results CSV")->required();
  cmd_analyze->add_option("--stat", stat_name, "per-class statistic over seeds: best or mean");
  add_common(cmd_analyze, flags);

  CLI::App* cmd_report = app.add_subcommand("report", "print the roll-up report for a results table");
  cmd_report->add_option("--table", table_path, "results CSV")->required();
  cmd_report->add_option("--stat", stat_name, "per-class statistic over seeds: best or mean");
  add_common(cmd_report, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    sbn::ExperimentConfig experiment;
    sbn::AnalysisConfig analysis;
    resolve(flags, experiment, analysis);

    if (cmd_generate->parsed()) {
      const auto target = sbn::ConstraintVector::from_arch_id(arch_id);
      sbn::Rng rng(experiment.seeds.front());
      const sbn::SbnNetwork net = sbn::generate(target, experiment.ga.gen_params, rng);
      if (save_path.empty()) {
        std::cout << sbn::serialize(net);
      } else {
        sbn::save_network(net, save_path);
        std::cout << "wrote " << save_path << "\n";
      }
      std::cout << "class " << arch_id << " bits " << target.to_string() << "\n";
      return 0;
    }

    if (cmd_evaluate->parsed()) {
      const sbn::SbnNetwork net = sbn::load_network(network_path);
      const sbn::TruthTable table = sbn::evaluation_table(net, experiment.ga);
      const double score = sbn::fitness_score(table, experiment.ga);
      std::printf("fitness=%s mode=%s score=%.17g\n",
                  sbn::to_string(experiment.ga.fitness_id).c_str(),
                  experiment.ga.mode == sbn::EvalMode::Desk ? "desk" : "exact", score);
      return 0;
    }

    if (cmd_evolve->parsed()) {
      experiment.validate();
      sbn::GaConfig ga = experiment.ga;
      ga.seed = experiment.seeds.front();
      ga.threads = experiment.parallelism;
      const auto target = sbn::ConstraintVector::from_arch_id(arch_id);
      const sbn::RunRecord rec = sbn::run_ga(target, ga, [](int generation, const sbn::Population&,
                                                            const std::vector<double>& scores) {
        double best = scores.front();
        for (double s : scores) best = std::max(best, s);
        std::printf("gen %d best %.6f\n", generation, best);
      });
      std::printf("arch %d best=%.17g mean=%.17g evals=%lld wall_s=%.3f\n", arch_id,
                  rec.best_score, rec.mean_score, rec.evaluations, rec.wall_seconds);
      if (!save_path.empty()) {
        sbn::save_network(rec.best_network, save_path);
        std::printf("wrote %s\n", save_path.c_str());
      }
      return 0;
    }

    if (cmd_experiment->parsed()) {
      const std::size_t total = 64 * experiment.seeds.size();
      std::size_t done = 0;
      const sbn::ResultsTable table =
          sbn::run_experiment(experiment, [&](const sbn::ResultRow& row) {
            ++done;
            if (row.failed())
              std::printf("[%zu/%zu] arch %d seed %llu error=%s\n", done, total, row.arch_id,
                          static_cast<unsigned long long>(row.seed), row.error_class.c_str());
            else
              std::printf("[%zu/%zu] arch %d seed %llu best=%.6f\n", done, total, row.arch_id,
                          static_cast<unsigned long long>(row.seed), row.best);
          });
      std::printf("table: %s (%zu rows)\n", experiment.table_path().c_str(), table.rows.size());
      return 0;
    }

    if (cmd_analyze->parsed() || cmd_report->parsed()) {
      const sbn::ResultsTable table = sbn::read_results(table_path);
      const sbn::Landscape landscape = sbn::aggregate(table, stat_from_string(stat_name));
      const sbn::AnalysisArtifacts art = sbn::analyze(landscape, analysis);
      if (cmd_report->parsed()) {
        std::cout << art.report;
      } else {
        for (const std::string& f : art.files) std::cout << f << "\n";
      }
      return 0;
    }
  } catch (const sbn::Error& e) {
    std::cerr << "error class=" << e.error_class() << ": " << e.what() << "\n";
    return exit_code_for(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error class=internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
