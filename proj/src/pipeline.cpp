#include "sbn/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sbn/errors.hpp"

namespace sbn {

namespace {

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;

constexpr const char* kCsvHeader = "arch_id,S,A,R,I,H,L,fitness,seed,best,mean,evals,wall_s";
constexpr const char* kErrorPrefix = "error:";

/* Shortest exact decimal: strtod reads the same bits back. */
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_fixed(double v, int digits = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ShapeError("bad " + what + " value '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ShapeError("bad " + what + " value '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == sep) {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

/* Infinity survives the JSON round trip as a tagged string. */
njson json_num(double v) {
  if (std::isinf(v)) return v > 0 ? njson("inf") : njson("-inf");
  return njson(v);
}

void write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out.flush()) throw IoError("short write to '" + tmp + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp + "' over '" + path + "': " + ec.message());
}

} // namespace

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("seed list must not be empty");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (output_dir.empty()) throw ConfigError("output directory must be set");
}

std::string ExperimentConfig::table_path() const {
  return (fs::path(output_dir) / "results.csv").string();
}

bool ResultsTable::contains(int arch_id, std::uint64_t seed, const std::string& fitness) const {
  return std::any_of(rows.begin(), rows.end(), [&](const ResultRow& r) {
    return r.arch_id == arch_id && r.seed == seed && r.fitness == fitness;
  });
}

std::string ResultsTable::to_csv() const {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ResultRow& r : rows) {
    out += std::to_string(r.arch_id);
    for (int i = 0; i < kConstraintCount; ++i) {
      out += ',';
      out += r.bits.bit(i) ? '1' : '0';
    }
    out += ',';
    out += r.fitness;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += r.failed() ? kErrorPrefix + r.error_class : format_double(r.best);
    out += ',';
    out += format_double(r.mean);
    out += ',';
    out += std::to_string(r.evals);
    out += ',';
    out += format_double(r.wall_s);
    out += '\n';
  }
  return out;
}

ResultsTable ResultsTable::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ShapeError("results table must start with the header '" + std::string(kCsvHeader) + "'");
  ResultsTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 13)
      throw ShapeError("line " + std::to_string(line_no) + ": expected 13 fields, got " +
                       std::to_string(fields.size()));
    ResultRow r;
    r.arch_id = static_cast<int>(parse_int(fields[0], "arch_id"));
    if (r.arch_id < 0 || r.arch_id > 63)
      throw ShapeError("line " + std::to_string(line_no) + ": arch_id out of range");
    r.bits = ConstraintVector::from_arch_id(r.arch_id);
    for (int i = 0; i < kConstraintCount; ++i) {
      const std::string& bit = fields[static_cast<std::size_t>(1 + i)];
      if (bit != (r.bits.bit(i) ? "1" : "0"))
        throw ShapeError("line " + std::to_string(line_no) + ": constraint bits contradict arch_id");
    }
    r.fitness = fields[7];
    fitness_from_string(r.fitness); // rejects unknown names
    r.seed = static_cast<std::uint64_t>(parse_int(fields[8], "seed"));
    if (fields[9].rfind(kErrorPrefix, 0) == 0)
      r.error_class = fields[9].substr(std::string(kErrorPrefix).size());
    else
      r.best = parse_double(fields[9], "best");
    r.mean = parse_double(fields[10], "mean");
    r.evals = parse_int(fields[11], "evals");
    r.wall_s = parse_double(fields[12], "wall_s");
    table.rows.push_back(std::move(r));
  }
  return table;
}

ResultsTable read_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read results table '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ResultsTable::from_csv(buf.str());
}

void write_results(const ResultsTable& table, const std::string& path) {
  write_text(path, table.to_csv());
}

ResultsTable run_experiment(const ExperimentConfig& cfg, const ExperimentObserver& observer) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  const std::string path = cfg.table_path();

  ResultsTable table;
  if (fs::exists(path)) table = read_results(path);
  const std::string fitness = to_string(cfg.ga.fitness_id);

  struct Task {
    int arch;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int arch = 0; arch < 64; ++arch) {
    for (std::uint64_t seed : cfg.seeds) {
      if (!table.contains(arch, seed, fitness)) tasks.push_back({arch, seed});
    }
  }
  if (tasks.empty()) return table;

  const auto run_one = [&](const Task& t) {
    ResultRow row;
    row.arch_id = t.arch;
    row.bits = ConstraintVector::from_arch_id(t.arch);
    row.fitness = fitness;
    row.seed = t.seed;
    GaConfig ga = cfg.ga;
    ga.seed = t.seed;
    ga.threads = 1; // parallelism lives across architectures
    try {
      const RunRecord rec = run_ga(row.bits, ga);
      row.best = rec.best_score;
      row.mean = rec.mean_score;
      row.evals = rec.evaluations;
      row.wall_s = rec.wall_seconds;
    } catch (const Error& e) {
      row.error_class = e.error_class();
    } catch (...) {
      row.error_class = "internal";
    }
    return row;
  };

  /* Workers race ahead; the caller thread commits rows strictly in task
     order so a partial table is always a prefix of the full sweep. */
  std::vector<std::unique_ptr<ResultRow>> done(tasks.size());
  std::mutex guard;
  std::condition_variable ready;
  std::atomic<std::size_t> cursor{0};
  const int workers =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism), tasks.size()));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = cursor.fetch_add(1);
        if (k >= tasks.size()) return;
        auto row = std::make_unique<ResultRow>(run_one(tasks[k]));
        std::lock_guard<std::mutex> lock(guard);
        done[k] = std::move(row);
        ready.notify_all();
      }
    });
  }
  /* Workers never throw (failures become rows); still drain them if a commit
     throws so no thread outlives this frame. */
  struct Drain {
    std::vector<std::thread>& pool;
    std::atomic<std::size_t>& cursor;
    std::size_t stop;
    ~Drain() {
      cursor.store(stop);
      for (std::thread& t : pool)
        if (t.joinable()) t.join();
    }
  } drain{pool, cursor, tasks.size()};

  for (std::size_t k = 0; k < tasks.size(); ++k) {
    std::unique_lock<std::mutex> lock(guard);
    ready.wait(lock, [&] { return done[k] != nullptr; });
    ResultRow row = *done[k];
    done[k].reset();
    lock.unlock();
    table.rows.push_back(row);
    write_results(table, path);
    if (observer) observer(row);
  }
  return table;
}

Landscape aggregate(const ResultsTable& table, AggregateStat stat) {
  std::array<double, 64> sum{};
  std::array<int, 64> count{};
  for (const ResultRow& r : table.rows) {
    if (r.failed()) continue;
    sum[static_cast<std::size_t>(r.arch_id)] += stat == AggregateStat::Best ? r.best : r.mean;
    ++count[static_cast<std::size_t>(r.arch_id)];
  }
  std::vector<int> missing;
  for (int id = 0; id < 64; ++id)
    if (count[static_cast<std::size_t>(id)] == 0) missing.push_back(id);
  if (!missing.empty()) {
    std::string msg = "landscape incomplete; missing arch_ids:";
    for (int id : missing) msg += ' ' + std::to_string(id);
    throw CompletenessError(msg, missing);
  }
  Landscape l;
  for (int id = 0; id < 64; ++id)
    l.values[static_cast<std::size_t>(id)] =
        sum[static_cast<std::size_t>(id)] / count[static_cast<std::size_t>(id)];
  return l;
}

namespace {

std::string scheme_name(const DiscretizeScheme& s) {
  switch (s.kind) {
    case DiscretizeScheme::Kind::Median:
      return "median";
    case DiscretizeScheme::Kind::EliteCount:
      return "elite:" + std::to_string(s.k);
    case DiscretizeScheme::Kind::Threshold:
      return "threshold:" + format_double(s.t);
  }
  return "median";
}

/* Constraint-index mask of an architecture (bit i = constraint i active). */
std::uint32_t index_mask_of(int arch_id) {
  std::uint32_t m = 0;
  for (int i = 0; i < kConstraintCount; ++i)
    if (arch_id & (1 << constraint_bit(i))) m |= 1u << i;
  return m;
}

std::string index_mask_name(std::uint32_t mask) {
  if (mask == 0) return "{}";
  std::string out;
  for (int i = 0; i < kConstraintCount; ++i) {
    if (!(mask & (1u << i))) continue;
    if (!out.empty()) out += '+';
    out += kConstraintNames[i];
  }
  return out;
}

/* 1..64 by descending value, ties to the lower arch_id. */
std::array<int, 64> fitness_ranks(const Landscape& l) {
  std::array<int, 64> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (l.values[static_cast<std::size_t>(a)] != l.values[static_cast<std::size_t>(b)])
      return l.values[static_cast<std::size_t>(a)] > l.values[static_cast<std::size_t>(b)];
    return a < b;
  });
  std::array<int, 64> rank{};
  for (int pos = 0; pos < 64; ++pos) rank[static_cast<std::size_t>(order[pos])] = pos + 1;
  return rank;
}

} // namespace

AnalysisArtifacts analyze(const Landscape& l, const AnalysisConfig& cfg) {
  l.validate();
  fs::create_directories(cfg.output_dir);
  AnalysisArtifacts art;

  const auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(cfg.output_dir) / name).string();
    write_text(path, content);
    art.files.push_back(path);
  };
  const auto emit_json = [&](const std::string& name, const njson& j) {
    emit(name, j.dump(2) + "\n");
  };

  /* Stage 0: binary performance labels. */
  art.labels = discretize(l, cfg.scheme);
  {
    njson j;
    j["scheme"] = scheme_name(cfg.scheme);
    j["labels"] = njson::array();
    std::string csv = "arch_id,S,A,R,I,H,L,fitness,label\n";
    for (int id = 0; id < 64; ++id) {
      const ConstraintVector bits = ConstraintVector::from_arch_id(id);
      njson row;
      row["arch_id"] = id;
      row["bits"] = bits.to_string();
      row["fitness"] = l.values[static_cast<std::size_t>(id)];
      row["label"] = int(art.labels[static_cast<std::size_t>(id)]);
      j["labels"].push_back(row);
      csv += std::to_string(id);
      for (int i = 0; i < kConstraintCount; ++i) csv += bits.bit(i) ? ",1" : ",0";
      csv += ',' + format_double(l.values[static_cast<std::size_t>(id)]);
      csv += ',' + std::to_string(int(art.labels[static_cast<std::size_t>(id)]));
      csv += '\n';
    }
    emit_json("stage0_labels.json", j);
    emit("stage0_labels.csv", csv);
  }

  /* Stage 1: per-constraint toggle statistics and lift. */
  art.edges = edge_effects(l);
  std::array<double, 6> lifts{};
  for (int i = 0; i < kConstraintCount; ++i) lifts[static_cast<std::size_t>(i)] = lift(art.labels, i);
  {
    njson j = njson::array();
    std::string csv = "constraint,mean,variance,cv,sign_stability,positive,zero,negative,lift\n";
    std::string ctx_csv = "constraint";
    for (int c = 0; c < 32; ++c) ctx_csv += ",ctx" + std::to_string(c);
    ctx_csv += '\n';
    for (int i = 0; i < kConstraintCount; ++i) {
      const EdgeEffect& e = art.edges[static_cast<std::size_t>(i)];
      njson row;
      row["constraint"] = kConstraintNames[i];
      row["mean"] = e.mean;
      row["variance"] = e.variance;
      row["cv"] = json_num(e.cv);
      row["sign_stability"] = e.sign_stability;
      row["positive"] = e.positive;
      row["zero"] = e.zero;
      row["negative"] = e.negative;
      row["lift"] = json_num(lifts[static_cast<std::size_t>(i)]);
      row["deltas"] = e.deltas;
      j.push_back(row);
      csv += std::string(kConstraintNames[i]) + ',' + format_double(e.mean) + ',' +
             format_double(e.variance) + ',' + format_fixed(e.cv) + ',' +
             format_double(e.sign_stability) + ',' + std::to_string(e.positive) + ',' +
             std::to_string(e.zero) + ',' + std::to_string(e.negative) + ',' +
             format_fixed(lifts[static_cast<std::size_t>(i)]) + '\n';
      ctx_csv += kConstraintNames[i];
      for (double d : e.deltas) ctx_csv += ',' + format_double(d);
      ctx_csv += '\n';
    }
    emit_json("stage1_edges.json", j);
    emit("stage1_edges.csv", csv);
    emit("stage1_edge_contexts.csv", ctx_csv);
  }

  /* Stage 2: pairwise second differences. */
  art.pairs = epistasis(l);
  {
    njson j = njson::array();
    std::string csv = "i,j,pair,mean,variance,snr,synergy,antagonism,zero\n";
    std::string ctx_csv = "pair";
    for (int c = 0; c < 16; ++c) ctx_csv += ",ctx" + std::to_string(c);
    ctx_csv += '\n';
    for (int i = 0; i < kConstraintCount; ++i) {
      for (int jj = i + 1; jj < kConstraintCount; ++jj) {
        const EpistasisCell& cell = art.pairs.at(i, jj);
        const std::string pair = std::string(kConstraintNames[i]) + "*" + kConstraintNames[jj];
        njson row;
        row["i"] = kConstraintNames[i];
        row["j"] = kConstraintNames[jj];
        row["mean"] = cell.mean;
        row["variance"] = cell.variance;
        row["snr"] = json_num(cell.snr);
        row["synergy"] = cell.synergy;
        row["antagonism"] = cell.antagonism;
        row["zero"] = cell.zero;
        row["epsilons"] = cell.epsilons;
        j.push_back(row);
        csv += std::string(kConstraintNames[i]) + ',' + kConstraintNames[jj] + ',' + pair + ',' +
               format_double(cell.mean) + ',' + format_double(cell.variance) + ',' +
               format_fixed(cell.snr) + ',' + std::to_string(cell.synergy) + ',' +
               std::to_string(cell.antagonism) + ',' + std::to_string(cell.zero) + '\n';
        ctx_csv += pair;
        for (double e : cell.epsilons) ctx_csv += ',' + format_double(e);
        ctx_csv += '\n';
      }
    }
    emit_json("stage2_epistasis.json", j);
    emit("stage2_epistasis.csv", csv);
    emit("stage2_epistasis_contexts.csv", ctx_csv);
  }

  /* Stage 3: closed patterns and exact rules on the high-performance set. */
  FormalContext elite;
  for (int i = 0; i < kConstraintCount; ++i) elite.attributes.push_back(kConstraintNames[i]);
  for (int id = 0; id < 64; ++id) {
    if (!art.labels[static_cast<std::size_t>(id)]) continue;
    elite.objects.push_back("arch" + std::to_string(id));
    elite.incidence.push_back(index_mask_of(id));
  }
  art.elite_concepts = concepts(elite);
  art.elite_rules = implications(elite, 0.0, 1.0);
  {
    njson j;
    j["objects"] = elite.objects;
    j["concepts"] = njson::array();
    for (const Concept& c : art.elite_concepts) {
      njson row;
      row["intent"] = index_mask_name(c.intent);
      row["extent_size"] = c.extent.size();
      row["extent"] = c.extent;
      j["concepts"].push_back(row);
    }
    j["rules"] = njson::array();
    std::string csv = "antecedent,consequent,support,confidence,coverage\n";
    for (const ImplicationRule& r : art.elite_rules) {
      njson row;
      row["antecedent"] = index_mask_name(r.antecedent);
      row["consequent"] = index_mask_name(r.consequent);
      row["support"] = r.support;
      row["confidence"] = r.confidence;
      row["coverage"] = r.coverage;
      j["rules"].push_back(row);
      csv += index_mask_name(r.antecedent) + ',' + index_mask_name(r.consequent) + ',' +
             format_double(r.support) + ',' + format_double(r.confidence) + ',' +
             std::to_string(r.coverage) + '\n';
    }
    /* Companion context over all 64 vertices with the label as a seventh
       attribute: which minimal premises force high performance. */
    FormalContext full;
    for (int i = 0; i < kConstraintCount; ++i) full.attributes.push_back(kConstraintNames[i]);
    full.attributes.push_back("HP");
    for (int id = 0; id < 64; ++id) {
      full.objects.push_back("arch" + std::to_string(id));
      std::uint32_t row_mask = index_mask_of(id);
      if (art.labels[static_cast<std::size_t>(id)]) row_mask |= 1u << kConstraintCount;
      full.incidence.push_back(row_mask);
    }
    j["hp_generators"] = njson::array();
    for (std::uint32_t gen : minimal_generators_containing(full, kConstraintCount)) {
      if (gen & (1u << kConstraintCount)) continue; // premises among constraints only
      j["hp_generators"].push_back(attribute_set_name(full, gen));
    }
    emit_json("stage3_fca.json", j);
    emit("stage3_rules.csv", csv);
  }

  /* Stage 4: paired toggle tests, globally and inside each rule pattern. */
  {
    std::vector<std::pair<std::uint32_t, int>> probes;
    for (int j = 0; j < kConstraintCount; ++j) probes.emplace_back(0u, j);
    for (const ImplicationRule& r : art.elite_rules) {
      if (r.antecedent == 0 || std::popcount(r.antecedent) > 4) continue;
      for (int j = 0; j < kConstraintCount; ++j)
        if (!(r.antecedent & (1u << j))) probes.emplace_back(r.antecedent, j);
    }
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

    njson j = njson::array();
    std::string csv = "pattern,constraint,pairs,w_plus,p_value,verdict\n";
    for (const auto& [pattern, con] : probes) {
      const WilcoxonResult res = wilcoxon_validate(l, pattern, con);
      art.wilcoxon_table.push_back(res);
      njson row;
      row["pattern"] = index_mask_name(pattern);
      row["constraint"] = kConstraintNames[con];
      row["pairs"] = res.pairs_used;
      row["w_plus"] = res.w_plus;
      row["p_value"] = res.p_value;
      row["locally_neutral"] = res.locally_neutral;
      row["all_zero"] = res.all_zero;
      j.push_back(row);
      csv += index_mask_name(pattern) + ',' + kConstraintNames[con] + ',' +
             std::to_string(res.pairs_used) + ',' + format_double(res.w_plus) + ',' +
             format_double(res.p_value) + ',' +
             (res.locally_neutral ? "neutral" : "significant") + '\n';
    }
    emit_json("stage4_wilcoxon.json", j);
    emit("stage4_wilcoxon.csv", csv);
  }

  /* Stage 5: spectral variance split and the sparse linear read-out. */
  art.walsh = walsh_decompose(l);
  {
    njson j;
    j["total_variance"] = art.walsh.total_variance;
    j["degenerate"] = art.walsh.degenerate;
    j["variance_by_order"] = njson::array();
    for (int k = 1; k <= 6; ++k) {
      njson row;
      row["order"] = k;
      row["variance"] = art.walsh.variance_by_order[static_cast<std::size_t>(k)];
      row["share"] = art.walsh.eta_by_order[static_cast<std::size_t>(k)];
      j["variance_by_order"].push_back(row);
    }
    j["coefficients"] = njson::array();
    std::string csv = "subset_mask,subset,order,coefficient,share\n";
    for (int s = 0; s < 64; ++s) {
      std::string name = s == 0 ? "{}" : index_mask_name(index_mask_of(s));
      njson row;
      row["subset"] = name;
      row["order"] = std::popcount(static_cast<unsigned>(s));
      row["coefficient"] = art.walsh.coefficients[static_cast<std::size_t>(s)];
      row["share"] = art.walsh.eta_by_subset[static_cast<std::size_t>(s)];
      j["coefficients"].push_back(row);
      csv += std::to_string(s) + ',' + name + ',' +
             std::to_string(std::popcount(static_cast<unsigned>(s))) + ',' +
             format_double(art.walsh.coefficients[static_cast<std::size_t>(s)]) + ',' +
             format_double(art.walsh.eta_by_subset[static_cast<std::size_t>(s)]) + '\n';
    }
    emit_json("stage5_walsh.json", j);
    emit("stage5_walsh.csv", csv);
  }
  {
    std::vector<std::uint32_t> patterns;
    for (const ImplicationRule& r : art.elite_rules) {
      if (r.antecedent != 0) patterns.push_back(r.antecedent);
      patterns.push_back(r.antecedent | r.consequent);
    }
    art.model = fit_restricted_model(l, art.walsh, patterns, cfg.lasso);
    njson j;
    j["penalty"] = art.model.penalty;
    j["r2"] = art.model.r2;
    j["intercept"] = art.model.intercept;
    j["dropped"] = art.model.dropped;
    j["terms"] = njson::array();
    std::string csv = "term,kind,coefficient,selected\n";
    for (std::size_t t = 0; t < art.model.terms.size(); ++t) {
      const ModelTerm& term = art.model.terms[t];
      const char* kind = term.kind == ModelTerm::Kind::FirstOrder  ? "first_order"
                         : term.kind == ModelTerm::Kind::Pairwise ? "pairwise"
                                                                   : "indicator";
      const bool selected = std::find(art.model.selected.begin(), art.model.selected.end(),
                                      static_cast<int>(t)) != art.model.selected.end();
      njson row;
      row["term"] = term.name;
      row["kind"] = kind;
      row["coefficient"] = art.model.coefficients[t];
      row["selected"] = selected;
      j["terms"].push_back(row);
      csv += term.name + ',' + kind + ',' + format_double(art.model.coefficients[t]) + ',' +
             (selected ? "1" : "0") + '\n';
    }
    j["path"] = njson::array();
    std::string path_csv = "penalty,cv_error,nonzero_terms\n";
    for (const PathPoint& p : art.model.path) {
      njson row;
      row["penalty"] = p.penalty;
      row["cv_error"] = p.cv_error;
      row["nonzero_terms"] = p.nonzero_terms;
      j["path"].push_back(row);
      path_csv += format_double(p.penalty) + ',' + format_double(p.cv_error) + ',' +
                  std::to_string(p.nonzero_terms) + '\n';
    }
    emit_json("stage5_model.json", j);
    emit("stage5_model.csv", csv);
    emit("stage5_path.csv", path_csv);
  }

  /* Roll-up. */
  {
    const auto ranks = fitness_ranks(l);
    std::string rep;
    rep += "fitness landscape roll-up\n";
    rep += "=========================\n\n";

    rep += "top architectures\n";
    rep += "rank  arch_id  bits           label         fitness\n";
    std::array<int, 64> order{};
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return ranks[static_cast<std::size_t>(a)] < ranks[static_cast<std::size_t>(b)]; });
    for (int pos = 0; pos < 10; ++pos) {
      const int id = order[static_cast<std::size_t>(pos)];
      const ConstraintVector bits = ConstraintVector::from_arch_id(id);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%4d  %7d  %s  %-12s  %s\n", pos + 1, id,
                    bits.to_string().c_str(), bits.label().c_str(),
                    format_fixed(l.at(id)).c_str());
      rep += buf;
    }
    rep += '\n';

    rep += "standard architecture locator\n";
    const auto locate = [&](const char* name, int id) {
      const ConstraintVector bits = ConstraintVector::from_arch_id(id);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-18s arch %2d  bits %s  fitness %s  rank %d\n", name, id,
                    bits.to_string().c_str(), format_fixed(l.at(id)).c_str(),
                    ranks[static_cast<std::size_t>(id)]);
      rep += buf;
    };
    locate("feistel (A+I)", (ConstraintVector{false, true, false, true, false, false}).arch_id());
    locate("spn (S+A+R+I+H)", (ConstraintVector{true, true, true, true, true, false}).arch_id());
    rep += '\n';

    rep += "constraint roles\n";
    rep += "constraint  mean_edge   sign_stability  cv          lift        p_value     verdict\n";
    for (int i = 0; i < kConstraintCount; ++i) {
      const EdgeEffect& e = art.edges[static_cast<std::size_t>(i)];
      double p = 1.0;
      for (const WilcoxonResult& w : art.wilcoxon_table)
        if (w.pattern == 0 && w.constraint == i) p = w.p_value;
      const char* verdict = p > 0.05 ? "neutral" : (e.mean > 0 ? "beneficial" : "harmful");
      char buf[192];
      std::snprintf(buf, sizeof buf, "%-10s  %-10s  %-14s  %-10s  %-10s  %-10s  %s\n",
                    kConstraintNames[i], format_fixed(e.mean, 4).c_str(),
                    format_fixed(e.sign_stability, 4).c_str(), format_fixed(e.cv, 4).c_str(),
                    format_fixed(lifts[static_cast<std::size_t>(i)], 4).c_str(),
                    format_fixed(p, 4).c_str(), verdict);
      rep += buf;
    }
    rep += '\n';

    rep += "variance by interaction order\n";
    rep += "order  variance      share\n";
    for (int k = 1; k <= 6; ++k) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%5d  %-12s  %s%%\n", k,
                    format_fixed(art.walsh.variance_by_order[static_cast<std::size_t>(k)], 6).c_str(),
                    format_fixed(100.0 * art.walsh.eta_by_order[static_cast<std::size_t>(k)], 2).c_str());
      rep += buf;
    }
    if (art.walsh.degenerate) rep += "(constant landscape: shares undefined)\n";
    rep += '\n';

    rep += "elite rules (antecedent => consequent, support, coverage)\n";
    if (art.elite_rules.empty()) rep += "(none)\n";
    for (const ImplicationRule& r : art.elite_rules) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s => %s  (%s, %d)\n",
                    index_mask_name(r.antecedent).c_str(), index_mask_name(r.consequent).c_str(),
                    format_fixed(r.support, 3).c_str(), r.coverage);
      rep += buf;
    }

    art.report = rep;
    emit("report.txt", rep);
  }

  return art;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto is_space = [](unsigned char c) { return std::isspace(c); };
      while (!s.empty() && is_space(s.front())) s.erase(s.begin());
      while (!s.empty() && is_space(s.back())) s.pop_back();
      return s;
    };
    line = strip(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + " is not key=value: '" + line + "'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
    kv[key] = value;
  }
  return kv;
}

namespace {

int config_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' needs an integer, got '" + value + "'");
  }
}

double config_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' needs a number, got '" + value + "'");
  }
}

DiscretizeScheme config_scheme(const std::string& value) {
  if (value == "median") return DiscretizeScheme::median();
  if (value.rfind("elite:", 0) == 0)
    return DiscretizeScheme::elite_count(config_int("scheme", value.substr(6)));
  if (value.rfind("threshold:", 0) == 0)
    return DiscretizeScheme::threshold(config_double("scheme", value.substr(10)));
  throw ConfigError("scheme must be median, elite:K, or threshold:T, got '" + value + "'");
}

} // namespace

void apply_config(const std::map<std::string, std::string>& kv, ExperimentConfig& experiment,
                  AnalysisConfig& analysis) {
  for (const auto& [key, value] : kv) {
    if (key == "fitness") {
      experiment.ga.fitness_id = fitness_from_string(value);
    } else if (key == "mode") {
      if (value == "desk")
        experiment.ga.mode = EvalMode::Desk;
      else if (value == "exact")
        experiment.ga.mode = EvalMode::Exact;
      else
        throw ConfigError("mode must be desk or exact, got '" + value + "'");
    } else if (key == "population") {
      experiment.ga.population_size = config_int(key, value);
    } else if (key == "generations") {
      experiment.ga.generations = config_int(key, value);
    } else if (key == "elite_fraction") {
      experiment.ga.elite_fraction = config_double(key, value);
    } else if (key == "feistel_rounds") {
      experiment.ga.feistel_rounds = config_int(key, value);
    } else if (key == "alg_depth") {
      experiment.ga.alg_depth = config_int(key, value);
    } else if (key == "lin_budget_seconds") {
      experiment.ga.lin_budget_seconds = config_double(key, value);
    } else if (key == "reward_bias") {
      experiment.ga.reward_bias = config_int(key, value) != 0;
    } else if (key == "reward_weights") {
      const auto parts = split(value, ',');
      if (parts.size() != 6) throw ConfigError("reward_weights needs 6 comma-separated numbers");
      for (std::size_t i = 0; i < 6; ++i)
        experiment.ga.reward_weights[i] = config_double(key, parts[i]);
    } else if (key == "seeds") {
      experiment.seeds.clear();
      for (const std::string& part : split(value, ',')) {
        try {
          std::size_t used = 0;
          experiment.seeds.push_back(std::stoull(part, &used));
          if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
          throw ConfigError("key 'seeds' needs integers, got '" + part + "'");
        }
      }
    } else if (key == "output_dir") {
      experiment.output_dir = value;
      analysis.output_dir = value;
    } else if (key == "parallelism") {
      experiment.parallelism = config_int(key, value);
    } else if (key == "n_in") {
      experiment.ga.gen_params.n_in = config_int(key, value);
    } else if (key == "n_out") {
      experiment.ga.gen_params.n_out = config_int(key, value);
    } else if (key == "internal_gates") {
      experiment.ga.gen_params.internal_gates = config_int(key, value);
    } else if (key == "depth") {
      experiment.ga.gen_params.depth = config_int(key, value);
    } else if (key == "blocks") {
      experiment.ga.gen_params.blocks = config_int(key, value);
    } else if (key == "delta0") {
      experiment.ga.gen_params.delta0 = config_int(key, value);
    } else if (key == "horizon") {
      experiment.ga.gen_params.horizon = config_int(key, value);
    } else if (key == "max_fanin") {
      experiment.ga.gen_params.max_fanin = config_int(key, value);
    } else if (key == "gen_retry_budget") {
      experiment.ga.gen_params.retry_budget = config_int(key, value);
    } else if (key == "lambda") {
      experiment.ga.mut_params.lambda = config_double(key, value);
    } else if (key == "per_gate") {
      experiment.ga.mut_params.per_gate = config_double(key, value);
    } else if (key == "mut_retry_budget") {
      experiment.ga.mut_params.retry_budget = config_int(key, value);
    } else if (key == "scheme") {
      analysis.scheme = config_scheme(value);
    } else if (key == "top_pairwise") {
      analysis.lasso.top_pairwise = config_int(key, value);
    } else if (key == "folds") {
      analysis.lasso.folds = config_int(key, value);
    } else if (key == "grid_size") {
      analysis.lasso.grid_size = config_int(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

} // namespace sbn
