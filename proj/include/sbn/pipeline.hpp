#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sbn/cube_walsh.hpp"
#include "sbn/evolution.hpp"
#include "sbn/fca.hpp"
#include "sbn/landscape.hpp"
#include "sbn/lasso.hpp"
#include "sbn/wilcoxon.hpp"

namespace sbn {

struct ExperimentConfig {
  GaConfig ga; // fitness, mode, GA block, generator and mutation params
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir = ".";
  int parallelism = 1;

  void validate() const;
  std::string table_path() const; // output_dir + "/results.csv"
};

struct ResultRow {
  int arch_id = 0;
  ConstraintVector bits;
  std::string fitness = "diff";
  std::uint64_t seed = 0;
  double best = 0;
  double mean = 0;
  long long evals = 0;
  double wall_s = 0;
  std::string error_class; // nonempty marks a failed run

  bool failed() const { return !error_class.empty(); }
};

struct ResultsTable {
  std::vector<ResultRow> rows;

  bool contains(int arch_id, std::uint64_t seed, const std::string& fitness) const;
  std::string to_csv() const;
  static ResultsTable from_csv(const std::string& text); // ShapeError on bad rows
};

ResultsTable read_results(const std::string& path); // IoError when unreadable
/* Whole-file replace through a temp file and rename, never a partial write. */
void write_results(const ResultsTable& table, const std::string& path);

using ExperimentObserver = std::function<void(const ResultRow&)>;

/* One GA run per (arch_id 0..63, seed) not already present in the table at
   cfg.table_path(); runs execute on a work pool of cfg.parallelism threads and
   every finished row is committed to disk, in task order, before the sweep
   moves past it. A failed run becomes a row whose best column carries
   "error:<class>" and the sweep continues. Rerunning over a complete table
   recomputes nothing and leaves the file bytes untouched. */
ResultsTable run_experiment(const ExperimentConfig& cfg, const ExperimentObserver& observer = {});

enum class AggregateStat { Best, Mean };

/* 64-value landscape: the chosen per-run column averaged over seeds for each
   architecture. Error rows are ignored; architectures without a single valid
   row raise CompletenessError listing every absent arch_id. */
Landscape aggregate(const ResultsTable& table, AggregateStat stat = AggregateStat::Best);

struct AnalysisConfig {
  std::string output_dir = ".";
  DiscretizeScheme scheme = DiscretizeScheme::elite_count(10);
  LassoOptions lasso;
};

struct AnalysisArtifacts {
  std::vector<std::string> files; // everything written, in emission order
  std::array<std::uint8_t, 64> labels{};
  std::array<EdgeEffect, 6> edges{};
  EpistasisMatrix pairs;
  std::vector<Concept> elite_concepts;
  std::vector<ImplicationRule> elite_rules;
  std::vector<WilcoxonResult> wilcoxon_table;
  WalshDecomposition walsh;
  RestrictedModel model;
  std::string report; // roll-up text, also written to report.txt
};

/* The full analysis ladder over one landscape: labeling, per-constraint edge
   statistics, pairwise interaction structure, closed-pattern rules on the
   elite set, paired toggle tests, spectral variance split, and the sparse
   linear read-out. One JSON + CSV artifact pair per stage plus a roll-up
   report; identical inputs produce byte-identical files. */
AnalysisArtifacts analyze(const Landscape& l, const AnalysisConfig& cfg);

/* Flat key=value text, one pair per line, '#' starts a comment. Unknown keys
   are config errors so typos fail before any computation. */
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config(const std::map<std::string, std::string>& kv, ExperimentConfig& experiment,
                  AnalysisConfig& analysis);

} // namespace sbn
