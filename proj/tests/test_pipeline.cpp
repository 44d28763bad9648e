#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sbn/errors.hpp"
#include "sbn/pipeline.hpp"
#include "sbn/rng.hpp"

using namespace sbn;
namespace fs = std::filesystem;

namespace {

/* Fresh scratch directory per test, safe to rerun. */
std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sbn_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ResultRow make_row(int arch, std::uint64_t seed, double best, double mean) {
  ResultRow r;
  r.arch_id = arch;
  r.bits = ConstraintVector::from_arch_id(arch);
  r.fitness = "diff";
  r.seed = seed;
  r.best = best;
  r.mean = mean;
  r.evals = 1000;
  r.wall_s = 0.25;
  return r;
}

ExperimentConfig tiny_experiment(const std::string& dir) {
  ExperimentConfig cfg;
  cfg.ga.population_size = 6;
  cfg.ga.generations = 3;
  cfg.ga.elite_fraction = 0.34;
  cfg.seeds = {1};
  cfg.output_dir = dir;
  cfg.parallelism = 4;
  return cfg;
}

} // namespace

TEST_CASE("results table round-trips through CSV byte for byte") {
  ResultsTable table;
  table.rows.push_back(make_row(0, 1, 3.5, 2.25));
  table.rows.push_back(make_row(20, 1, 0.0078125, 0.001953125));
  table.rows.push_back(make_row(63, 7, 1.0 / 3.0, 0.1)); // non-dyadic survives %.17g
  ResultRow err = make_row(5, 2, 0, 0);
  err.error_class = "generation";
  err.evals = 0;
  err.wall_s = 0;
  table.rows.push_back(err);

  const std::string csv = table.to_csv();
  const ResultsTable back = ResultsTable::from_csv(csv);
  CHECK(back.to_csv() == csv);
  REQUIRE(back.rows.size() == 4);
  CHECK(back.rows[2].best == 1.0 / 3.0);
  CHECK(back.rows[3].failed());
  CHECK(back.rows[3].error_class == "generation");
  CHECK(back.rows[1].bits.arch_id() == 20);
}

TEST_CASE("CSV parsing rejects malformed tables") {
  CHECK_THROWS_AS(ResultsTable::from_csv("nope\n"), ShapeError);
  const std::string header = "arch_id,S,A,R,I,H,L,fitness,seed,best,mean,evals,wall_s\n";
  CHECK_THROWS_AS(ResultsTable::from_csv(header + "1,2,3\n"), ShapeError);
  /* arch 20 is A+I: the S column must read 0. */
  CHECK_THROWS_AS(ResultsTable::from_csv(header + "20,1,1,0,1,0,0,diff,1,1,1,10,0.1\n"), ShapeError);
  CHECK_THROWS_AS(ResultsTable::from_csv(header + "99,0,0,0,0,0,0,diff,1,1,1,10,0.1\n"), ShapeError);
  CHECK_THROWS_AS(ResultsTable::from_csv(header + "20,0,1,0,1,0,0,bogus,1,1,1,10,0.1\n"),
                  Error);
  CHECK_NOTHROW(ResultsTable::from_csv(header + "20,0,1,0,1,0,0,diff,1,error:budget,0,0,0\n"));
}

TEST_CASE("aggregate reduces seeds per architecture") {
  ResultsTable table;
  for (int arch = 0; arch < 64; ++arch) {
    table.rows.push_back(make_row(arch, 1, arch + 1.0, arch / 2.0));
    table.rows.push_back(make_row(arch, 2, arch + 3.0, arch / 4.0));
  }
  const Landscape best = aggregate(table, AggregateStat::Best);
  const Landscape mean = aggregate(table, AggregateStat::Mean);
  for (int arch = 0; arch < 64; ++arch) {
    CHECK(best.at(arch) == arch + 2.0); // mean of best over the two seeds
    CHECK(mean.at(arch) == arch / 2.0 * 0.75);
  }
}

TEST_CASE("aggregate of a single seed is the best column") {
  ResultsTable table;
  Rng rng(12);
  std::array<double, 64> expect{};
  for (int arch = 0; arch < 64; ++arch) {
    expect[static_cast<std::size_t>(arch)] = rng.normal(5, 2);
    table.rows.push_back(make_row(arch, 9, expect[static_cast<std::size_t>(arch)], 0));
  }
  const Landscape l = aggregate(table, AggregateStat::Best);
  for (int arch = 0; arch < 64; ++arch) CHECK(l.at(arch) == expect[static_cast<std::size_t>(arch)]);
}

TEST_CASE("aggregate reports every missing architecture") {
  ResultsTable table;
  for (int arch = 0; arch < 64; ++arch) {
    if (arch == 3 || arch == 17) continue;
    table.rows.push_back(make_row(arch, 1, 1.0, 1.0));
  }
  ResultRow err = make_row(3, 1, 0, 0); // an error row does not complete a class
  err.error_class = "budget";
  table.rows.push_back(err);
  try {
    aggregate(table);
    FAIL("expected CompletenessError");
  } catch (const CompletenessError& e) {
    CHECK(e.missing_ids() == std::vector<int>{3, 17});
    CHECK(std::string(e.what()).find("17") != std::string::npos);
  }
}

TEST_CASE("experiment sweep completes, resumes without recomputation") {
  const std::string dir = scratch("sweep");
  const ExperimentConfig cfg = tiny_experiment(dir);
  int commits = 0;
  const ResultsTable table = run_experiment(cfg, [&](const ResultRow&) { ++commits; });
  CHECK(commits == 64);
  REQUIRE(table.rows.size() == 64);
  for (int arch = 0; arch < 64; ++arch) {
    CHECK(table.rows[static_cast<std::size_t>(arch)].arch_id == arch); // committed in task order
    CHECK(!table.rows[static_cast<std::size_t>(arch)].failed());
    CHECK(table.rows[static_cast<std::size_t>(arch)].evals == 6 * 3);
  }

  const std::string bytes = slurp(cfg.table_path());
  int recommits = 0;
  const ResultsTable again = run_experiment(cfg, [&](const ResultRow&) { ++recommits; });
  CHECK(recommits == 0);
  CHECK(slurp(cfg.table_path()) == bytes);
  CHECK(again.rows.size() == 64);
}

TEST_CASE("experiment resumes a truncated table and matches a fresh sweep") {
  const std::string dir = scratch("resume");
  const ExperimentConfig cfg = tiny_experiment(dir);
  const ResultsTable full = run_experiment(cfg);

  ResultsTable partial;
  partial.rows.assign(full.rows.begin(), full.rows.begin() + 10);
  write_results(partial, cfg.table_path());
  const ResultsTable resumed = run_experiment(cfg);
  REQUIRE(resumed.rows.size() == 64);
  for (std::size_t k = 0; k < 64; ++k) {
    CHECK(resumed.rows[k].arch_id == full.rows[k].arch_id);
    CHECK(resumed.rows[k].seed == full.rows[k].seed);
    CHECK(resumed.rows[k].best == full.rows[k].best); // deterministic modulo wall time
    CHECK(resumed.rows[k].mean == full.rows[k].mean);
    CHECK(resumed.rows[k].evals == full.rows[k].evals);
  }
}

TEST_CASE("experiment scores are identical at any parallelism") {
  const std::string dir1 = scratch("par1");
  const std::string dir8 = scratch("par8");
  ExperimentConfig cfg1 = tiny_experiment(dir1);
  cfg1.parallelism = 1;
  ExperimentConfig cfg8 = tiny_experiment(dir8);
  cfg8.parallelism = 8;
  const ResultsTable t1 = run_experiment(cfg1);
  const ResultsTable t8 = run_experiment(cfg8);
  REQUIRE(t1.rows.size() == t8.rows.size());
  for (std::size_t k = 0; k < t1.rows.size(); ++k) {
    CHECK(t1.rows[k].best == t8.rows[k].best);
    CHECK(t1.rows[k].mean == t8.rows[k].mean);
  }
}

TEST_CASE("per-class failures become error rows and the sweep continues") {
  const std::string dir = scratch("errors");
  ExperimentConfig cfg = tiny_experiment(dir);
  cfg.ga.gen_params.blocks = 1; // interleaving targets cannot be built
  const ResultsTable table = run_experiment(cfg);
  REQUIRE(table.rows.size() == 64);
  int failed = 0;
  for (const ResultRow& r : table.rows) {
    if (r.bits.i) {
      CHECK(r.failed());
      CHECK(r.error_class == "config");
      ++failed;
    } else {
      CHECK(!r.failed());
    }
  }
  CHECK(failed == 32);
  try {
    aggregate(table);
    FAIL("expected CompletenessError");
  } catch (const CompletenessError& e) {
    CHECK(e.missing_ids().size() == 32);
    for (int id : e.missing_ids()) CHECK((id & 4) != 0);
  }
}

TEST_CASE("config file parsing, overrides, and rejection of unknown keys") {
  const std::string dir = scratch("config");
  const std::string path = dir + "/run.cfg";
  {
    std::ofstream out(path);
    out << "# sweep setup\n";
    out << "fitness = lin\n";
    out << "mode = exact\n";
    out << "population = 10\n";
    out << "generations= 7\n";
    out << "seeds = 3,4,5\n";
    out << "parallelism = 2\n";
    out << "scheme = elite:12\n";
    out << "reward_weights = 1,0,0.5,0,0,2\n";
    out << "output_dir = " << dir << "\n";
  }
  ExperimentConfig experiment;
  AnalysisConfig analysis;
  apply_config(parse_config_file(path), experiment, analysis);
  CHECK(experiment.ga.fitness_id == FitnessId::Lin);
  CHECK(experiment.ga.mode == EvalMode::Exact);
  CHECK(experiment.ga.population_size == 10);
  CHECK(experiment.ga.generations == 7);
  CHECK(experiment.seeds == std::vector<std::uint64_t>{3, 4, 5});
  CHECK(experiment.parallelism == 2);
  CHECK(experiment.output_dir == dir);
  CHECK(analysis.output_dir == dir);
  CHECK(analysis.scheme.kind == DiscretizeScheme::Kind::EliteCount);
  CHECK(analysis.scheme.k == 12);
  CHECK(experiment.ga.reward_weights[2] == 0.5);

  CHECK_THROWS_AS(apply_config({{"wat", "1"}}, experiment, analysis), ConfigError);
  CHECK_THROWS_AS(apply_config({{"population", "many"}}, experiment, analysis), ConfigError);
  CHECK_THROWS_AS(apply_config({{"scheme", "best"}}, experiment, analysis), ConfigError);
  CHECK_THROWS_AS(parse_config_file(dir + "/absent.cfg"), IoError);
  {
    std::ofstream out(path);
    out << "population\n";
  }
  CHECK_THROWS_AS(parse_config_file(path), ConfigError);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.parallelism = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.output_dir = "";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("analysis ladder emits every stage artifact deterministically") {
  Landscape l;
  Rng rng(404);
  const int r_bit = 1 << constraint_bit(2);
  const int s_bit = 1 << constraint_bit(0);
  for (int c = 0; c < 64; ++c) {
    const double xr = (c & r_bit) ? 1.0 : -1.0;
    const double xs = (c & s_bit) ? 1.0 : -1.0;
    l.values[static_cast<std::size_t>(c)] = 10 + 3 * xr - 2 * xs * xr + rng.normal(0, 0.1);
  }

  AnalysisConfig cfg;
  cfg.output_dir = scratch("analyze_a");
  const AnalysisArtifacts art = analyze(l, cfg);

  const char* expected[] = {
      "stage0_labels.json",    "stage0_labels.csv",           "stage1_edges.json",
      "stage1_edges.csv",      "stage1_edge_contexts.csv",    "stage2_epistasis.json",
      "stage2_epistasis.csv",  "stage2_epistasis_contexts.csv", "stage3_fca.json",
      "stage3_rules.csv",      "stage4_wilcoxon.json",        "stage4_wilcoxon.csv",
      "stage5_walsh.json",     "stage5_walsh.csv",            "stage5_model.json",
      "stage5_model.csv",      "stage5_path.csv",             "report.txt"};
  REQUIRE(art.files.size() == std::size(expected));
  for (std::size_t k = 0; k < art.files.size(); ++k) {
    CHECK(fs::path(art.files[k]).filename().string() == expected[k]);
    CHECK(fs::exists(art.files[k]));
  }

  int labeled = 0;
  for (auto v : art.labels) labeled += v;
  CHECK(labeled == 10);
  CHECK(art.report.find("feistel (A+I)") != std::string::npos);
  CHECK(art.report.find("spn (S+A+R+I+H)") != std::string::npos);
  CHECK(art.report.find("variance by interaction order") != std::string::npos);
  CHECK(!art.wilcoxon_table.empty());

  /* Byte reproducibility across a second run in a fresh directory. */
  AnalysisConfig cfg2 = cfg;
  cfg2.output_dir = scratch("analyze_b");
  const AnalysisArtifacts art2 = analyze(l, cfg2);
  REQUIRE(art2.files.size() == art.files.size());
  for (std::size_t k = 0; k < art.files.size(); ++k)
    CHECK(slurp(art.files[k]) == slurp(art2.files[k]));
  CHECK(art2.report == art.report);
}

TEST_CASE("analysis of a planted R effect puts R on top of the role table") {
  Landscape l;
  const int r_bit = 1 << constraint_bit(2);
  for (int c = 0; c < 64; ++c)
    l.values[static_cast<std::size_t>(c)] = (c & r_bit) ? 14.625 : 12.875;
  AnalysisConfig cfg;
  cfg.output_dir = scratch("planted");
  const AnalysisArtifacts art = analyze(l, cfg);
  CHECK(art.edges[2].mean == 1.75);
  CHECK(art.labels[static_cast<std::size_t>(r_bit)] == 1);
  /* All ten elites carry R, so the elite context must expose the R rule. */
  REQUIRE(!art.elite_rules.empty());
  CHECK(art.elite_rules[0].antecedent == 0u);
  CHECK((art.elite_rules[0].consequent & (1u << 2)) != 0u);
  CHECK(art.elite_rules[0].support == 1.0);
}
