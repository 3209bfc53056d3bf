// bmb: simulate data, fit Markov blanket chains, and inspect the results.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmb/copula.hpp"
#include "bmb/csv.hpp"
#include "bmb/diagnostics.hpp"
#include "bmb/manifest.hpp"
#include "bmb/sampler.hpp"
#include "bmb/synthbench.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadFlags = 2;
constexpr int kExitBadData = 3;
constexpr int kExitSampler = 4;
constexpr int kExitConstant = 5;

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Failure{code, message}; }

int load_code(const bmb::Error& e) {
  return e.kind() == bmb::ErrorKind::ConstantVariable ? kExitConstant : kExitBadData;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(sep, start);
    const std::string item = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(kExitBadFlags, "cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

std::string join_path(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

void write_json(const std::string& path, const json& j) { bmb::write_text(path, j.dump(2) + "\n"); }

std::size_t worker_cap(std::size_t chains) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BMB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v < 1) throw std::invalid_argument("non-positive");
      cap = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      fail(kExitBadFlags, std::string("BMB_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  return std::min(cap, chains);
}

std::string chain_suffix(std::size_t chain, std::size_t chains) {
  return chains == 1 ? "" : "_chain" + std::to_string(chain + 1);
}

// ---- shared chain options ----------------------------------------------------

struct ChainFlags {
  std::string data;
  std::string query;
  std::string out_dir = ".";
  double gamma = 1.0;
  long burn_in = 300;
  long samples = 700;
  long thin = 1;
  double level = 0.85;
  std::uint64_t seed = 1;
  double mgig_tol = 1e-9;
  int mgig_max_iter = 100;
  std::size_t chains = 1;
  bool timing = false;
};

void add_chain_flags(CLI::App* cmd, ChainFlags& f) {
  cmd->add_option("--data", f.data, "data CSV, observations in rows")->required();
  cmd->add_option("--query", f.query, "comma-separated query variable names")->required();
  cmd->add_option("--out-dir", f.out_dir, "output directory");
  cmd->add_option("--gamma,--lambda", f.gamma, "sparsity hyperparameter")->check(CLI::PositiveNumber);
  cmd->add_option("--burn-in", f.burn_in, "discarded sweeps")->check(CLI::NonNegativeNumber);
  cmd->add_option("--samples", f.samples, "stored samples")->check(CLI::PositiveNumber);
  cmd->add_option("--thin", f.thin, "keep every thin-th sweep")->check(CLI::PositiveNumber);
  cmd->add_option("--level", f.level, "credible level")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--mgig-tol", f.mgig_tol, "continued-fraction tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--mgig-max-iter", f.mgig_max_iter, "continued-fraction depth limit")->check(CLI::PositiveNumber);
  cmd->add_option("--chains", f.chains, "independent chains")->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", f.timing, "record wall times in manifest.json");
}

bmb::ChainConfig chain_config(const ChainFlags& f) {
  bmb::ChainConfig cfg;
  cfg.burn_in = f.burn_in;
  cfg.samples = f.samples;
  cfg.thin = f.thin;
  cfg.seed = f.seed;
  cfg.gamma = f.gamma;
  cfg.mgig_tol = f.mgig_tol;
  cfg.mgig_max_iter = f.mgig_max_iter;
  try {
    cfg.validate();
  } catch (const bmb::Error& e) {
    fail(kExitBadFlags, e.what());
  }
  if (!(f.level > 0.0 && f.level < 1.0)) fail(kExitBadFlags, "--level must lie in (0, 1)");
  return cfg;
}

json chain_flags_json(const ChainFlags& f) {
  json j;
  j["data"] = f.data;
  j["query"] = split(f.query, ',');
  j["gamma"] = f.gamma;
  j["burn_in"] = f.burn_in;
  j["samples"] = f.samples;
  j["thin"] = f.thin;
  j["level"] = f.level;
  j["mgig_tol"] = f.mgig_tol;
  j["mgig_max_iter"] = f.mgig_max_iter;
  j["chains"] = f.chains;
  return j;
}

bmb::ProgressFn progress_for(const std::string& tag) {
  return [tag](long sweep, long total) {
    std::cerr << "[" << tag << "] sweep " << sweep << "/" << total << "\n";
  };
}

void write_edges(const std::string& path, const bmb::ChainOutput& out, const std::vector<std::string>& query,
                 const std::vector<std::string>& other) {
  std::string text = "sample,query,other,weight\n";
  for (std::size_t s = 0; s < out.w12_samples.size(); ++s) {
    const bmb::Matrix& w = out.w12_samples[s];
    const std::string prefix = std::to_string(s) + ",";
    for (bmb::Index i = 0; i < w.rows(); ++i) {
      for (bmb::Index j = 0; j < w.cols(); ++j) {
        text += prefix;
        text += query[static_cast<std::size_t>(i)];
        text += ',';
        text += other[static_cast<std::size_t>(j)];
        text += ',';
        text += bmb::format_double(w(i, j));
        text += '\n';
      }
    }
  }
  bmb::write_text(path, text);
}

json summary_json(const bmb::ChainOutput& out, const std::vector<std::string>& query,
                  const std::vector<std::string>& other, double level) {
  const bmb::BlanketEstimate est = out.w12_samples.size() >= 2 ? bmb::threshold_blanket(out.w12_samples, level)
                                                                : bmb::BlanketEstimate{};
  json j;
  j["level"] = level;
  j["samples"] = out.w12_samples.size();
  j["edges"] = json::array();
  std::vector<double> column(out.w12_samples.size());
  for (std::size_t i = 0; i < query.size(); ++i) {
    for (std::size_t k = 0; k < other.size(); ++k) {
      double mean = 0.0;
      for (std::size_t s = 0; s < column.size(); ++s) {
        column[s] = out.w12_samples[s](static_cast<bmb::Index>(i), static_cast<bmb::Index>(k));
        mean += column[s];
      }
      mean /= static_cast<double>(column.size());
      std::sort(column.begin(), column.end());
      bool included = false;
      int sign = 0;
      for (const auto& e : est.edges) {
        if (e.query == static_cast<bmb::Index>(i) && e.other == static_cast<bmb::Index>(k)) {
          included = true;
          sign = e.sign;
        }
      }
      j["edges"].push_back({{"query", query[i]},
                            {"other", other[k]},
                            {"mean", mean},
                            {"median", bmb::sorted_quantile(column, 0.5)},
                            {"lower", bmb::sorted_quantile(column, 0.5 * (1.0 - level))},
                            {"upper", bmb::sorted_quantile(column, 0.5 * (1.0 + level))},
                            {"included", included},
                            {"sign", sign}});
    }
  }
  return j;
}

void write_chain_outputs(const std::string& command, const ChainFlags& f, json config,
                         const std::vector<bmb::ChainOutput>& outs, const std::vector<std::string>& query,
                         const std::vector<std::string>& other) {
  const std::string dir = prepare_dir(f.out_dir);
  bmb::RunManifest m;
  m.command = command;
  m.seed = f.seed;
  m.config = std::move(config);
  m.versions = bmb::build_versions();
  std::vector<bmb::PhaseTimes> times;
  for (std::size_t c = 0; c < outs.size(); ++c) {
    const std::string suffix = chain_suffix(c, outs.size());
    write_edges(join_path(dir, "edges" + suffix + ".csv"), outs[c], query, other);
    write_json(join_path(dir, "summary" + suffix + ".json"), summary_json(outs[c], query, other, f.level));
    m.mh_corrected.push_back(outs[c].mh_corrected_count);
    m.sweeps.push_back(outs[c].sweeps);
    times.push_back(outs[c].wall);
    const auto& t = outs[c].wall;
    std::cerr << "[" << command << "] chain " << c + 1 << " wall time: total " << t.total << " s (scales "
              << t.scales << ", w12 " << t.w12 << ", w11 " << t.w11 << "), MH-corrected W11 draws "
              << outs[c].mh_corrected_count << "\n";
  }
  if (f.timing) m.wall_time = times;
  write_json(join_path(dir, "manifest.json"), bmb::to_json(m));
}

std::vector<bmb::ChainOutput> run_sampler(const std::function<bmb::ChainOutput(const bmb::ChainConfig&, bmb::RngStream, bool)>& one,
                                          const bmb::ChainConfig& cfg, std::size_t chains) {
  try {
    if (chains == 1) return {one(cfg, bmb::RngStream(cfg.seed), true)};
    const auto streams = bmb::RngStream(cfg.seed).split(chains);
    std::vector<bmb::ChainOutput> outs(chains);
    std::vector<std::exception_ptr> errors(chains);
    const std::size_t workers = worker_cap(chains);
    std::size_t next = 0;
    std::mutex mutex;
    auto work = [&] {
      for (;;) {
        std::size_t idx;
        {
          std::lock_guard<std::mutex> lock(mutex);
          if (next >= chains) return;
          idx = next++;
        }
        try {
          outs[idx] = one(cfg, streams[idx], false);
        } catch (...) {
          errors[idx] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return outs;
  } catch (const bmb::Error& e) {
    fail(kExitSampler, std::string("sampler failure: ") + e.what());
  }
}

// ---- simulate ----------------------------------------------------------------

struct SimulateFlags {
  bmb::GraphSpec spec;
  long n = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateFlags& f) {
  try {
    f.spec.validate();
  } catch (const bmb::Error& e) {
    fail(kExitBadFlags, e.what());
  }
  bmb::RngStream rng(f.seed);
  const bmb::GroundTruth truth = bmb::gen_precision(f.spec, rng);
  const bmb::DataMatrix data = bmb::simulate_data(truth, f.n, rng);
  const std::vector<std::string>& names = data.names();
  const std::vector<std::string> query(names.begin(), names.begin() + f.spec.p);

  const std::string dir = prepare_dir(f.out_dir);
  bmb::write_data_csv(join_path(dir, "data.csv"), data.values(), names);

  bmb::CsvTable t{{"query", "other", "weight"}, {}};
  for (bmb::Index i = 0; i < truth.true_blanket.rows(); ++i)
    for (bmb::Index j = 0; j < truth.true_blanket.cols(); ++j)
      if (truth.true_blanket(i, j) != 0.0)
        t.rows.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(f.spec.p + j)],
                          bmb::format_double(truth.true_blanket(i, j))});
  bmb::write_csv(join_path(dir, "truth.csv"), t);

  json meta;
  meta["p"] = f.spec.p;
  meta["q"] = f.spec.q;
  meta["n"] = f.n;
  meta["seed"] = f.seed;
  meta["beta_a"] = f.spec.beta_a;
  meta["beta_b"] = f.spec.beta_b;
  meta["edge_density"] = f.spec.edge_density;
  meta["weight_lo"] = f.spec.weight_lo;
  meta["weight_hi"] = f.spec.weight_hi;
  meta["query"] = query;
  meta["blanket_edges"] = t.rows.size();
  meta["version"] = bmb::kVersion;
  write_json(join_path(dir, "meta.json"), meta);
  return kExitOk;
}

// ---- fit ---------------------------------------------------------------------

int cmd_fit(const ChainFlags& f, bool center) {
  const bmb::ChainConfig cfg = chain_config(f);
  bmb::LoadedData loaded;
  std::optional<bmb::DataMatrix> data;
  try {
    loaded = bmb::read_data_csv(f.data);
    if (loaded.values.hasNaN()) {
      fail(kExitBadData, f.data + " has missing values; use fit-copula");
    }
    data.emplace(loaded.values, loaded.names);
  } catch (const bmb::Error& e) {
    fail(load_code(e), e.what());
  }

  std::optional<bmb::PartitionedCov> s;
  try {
    s.emplace(bmb::partition_scatter(*data, split(f.query, ','), center));
  } catch (const bmb::Error& e) {
    fail(kExitBadFlags, e.what());
  }

  const auto outs = run_sampler(
      [&](const bmb::ChainConfig& c, bmb::RngStream rng, bool log) {
        return bmb::run_chain(*s, c, std::move(rng), log ? progress_for("fit") : bmb::ProgressFn{});
      },
      cfg, f.chains);

  json config = chain_flags_json(f);
  config["center"] = center;
  write_chain_outputs("fit", f, std::move(config), outs, s->query_names(), s->other_names());
  return kExitOk;
}

// ---- fit-copula ----------------------------------------------------------------

struct CopulaFlags {
  std::string kinds;
  long inner_sweeps = 1;
  double iw_df = std::numeric_limits<double>::quiet_NaN();
};

int cmd_fit_copula(const ChainFlags& f, const CopulaFlags& cf) {
  bmb::CopulaConfig cfg;
  cfg.chain = chain_config(f);
  cfg.inner_sweeps = cf.inner_sweeps;
  cfg.iw_df = cf.iw_df;

  std::optional<bmb::MixedDataTable> table;
  try {
    bmb::LoadedData loaded = bmb::read_data_csv(f.data);
    std::vector<bmb::VariableKind> kinds(loaded.names.size(), bmb::VariableKind::Continuous);
    if (!cf.kinds.empty()) {
      const bmb::CsvTable k = bmb::read_csv(cf.kinds);
      if (k.header != std::vector<std::string>{"name", "kind"}) {
        fail(kExitBadData, cf.kinds + ": expected header name,kind");
      }
      for (const auto& row : k.rows) {
        const auto it = std::find(loaded.names.begin(), loaded.names.end(), row[0]);
        if (it == loaded.names.end()) fail(kExitBadData, cf.kinds + ": unknown variable " + row[0]);
        if (row[1] != "continuous" && row[1] != "ordinal") {
          fail(kExitBadData, cf.kinds + ": kind must be continuous or ordinal, got " + row[1]);
        }
        kinds[static_cast<std::size_t>(it - loaded.names.begin())] =
            row[1] == "ordinal" ? bmb::VariableKind::Ordinal : bmb::VariableKind::Continuous;
      }
    }
    table.emplace(std::move(loaded.values), std::move(loaded.names), std::move(kinds));
  } catch (const bmb::Error& e) {
    fail(load_code(e), e.what());
  }

  const std::vector<std::string> query = split(f.query, ',');
  std::optional<bmb::PartitionedCov> layout;
  try {
    cfg.validate(table->variables());
    layout.emplace(bmb::partition_scatter(bmb::DataMatrix(bmb::Matrix::Zero(table->variables(), 1), table->names()),
                                          query, false));
  } catch (const bmb::Error& e) {
    fail(kExitBadFlags, e.what());
  }

  const auto outs = run_sampler(
      [&](const bmb::ChainConfig& c, bmb::RngStream rng, bool log) {
        bmb::CopulaConfig local = cfg;
        local.chain = c;
        local.chain.seed = rng.seed();
        return bmb::run_copula_chain(*table, query, local, log ? progress_for("fit-copula") : bmb::ProgressFn{});
      },
      cfg.chain, f.chains);

  json config = chain_flags_json(f);
  config["kinds"] = cf.kinds;
  config["inner_sweeps"] = cf.inner_sweeps;
  config["iw_df"] = cfg.prior_df(table->variables());
  write_chain_outputs("fit-copula", f, std::move(config), outs, layout->query_names(), layout->other_names());
  return kExitOk;
}

// ---- reading edges.csv -------------------------------------------------------------

struct EdgeSeries {
  std::string query;
  std::string other;
  std::vector<double> values;
};

struct EdgeFile {
  std::vector<EdgeSeries> series;  // first-appearance order
  std::vector<std::string> query;
  std::vector<std::string> other;
};

EdgeFile read_edges(const std::string& path) {
  EdgeFile ef;
  try {
    const bmb::CsvTable t = bmb::read_csv(path);
    if (t.header != std::vector<std::string>{"sample", "query", "other", "weight"}) {
      fail(kExitBadData, path + ": expected header sample,query,other,weight");
    }
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& row : t.rows) {
      const auto key = std::make_pair(row[1], row[2]);
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, ef.series.size()).first;
        ef.series.push_back({row[1], row[2], {}});
        if (std::find(ef.query.begin(), ef.query.end(), row[1]) == ef.query.end()) ef.query.push_back(row[1]);
        if (std::find(ef.other.begin(), ef.other.end(), row[2]) == ef.other.end()) ef.other.push_back(row[2]);
      }
      const double w = bmb::parse_double(row[3]);
      if (!std::isfinite(w)) fail(kExitBadData, path + ": non-finite weight");
      ef.series[it->second].values.push_back(w);
    }
  } catch (const bmb::Error& e) {
    fail(kExitBadData, e.what());
  }
  if (ef.series.empty()) fail(kExitBadData, path + " has no samples");
  const std::size_t n = ef.series.front().values.size();
  for (const auto& s : ef.series) {
    if (s.values.size() != n) fail(kExitBadData, path + ": edges have different sample counts");
  }
  if (ef.series.size() != ef.query.size() * ef.other.size()) {
    fail(kExitBadData, path + ": edges do not form a full query x other grid");
  }
  return ef;
}

// ---- diagnose ----------------------------------------------------------------------

struct DiagnoseFlags {
  std::string edges_file;
  std::string out_dir = ".";
  std::size_t max_lag = 50;
  std::string edges = "all";
};

int cmd_diagnose(const DiagnoseFlags& f) {
  const EdgeFile ef = read_edges(f.edges_file);
  const std::size_t n = ef.series.front().values.size();
  if (f.max_lag >= n) {
    fail(kExitBadFlags, "--max-lag " + std::to_string(f.max_lag) + " must be below the sample count " +
                            std::to_string(n));
  }

  std::vector<bool> traced(ef.series.size(), false);
  if (f.edges == "all") {
    traced.assign(ef.series.size(), true);
  } else if (f.edges != "none") {
    for (const auto& item : split(f.edges, ',')) {
      const auto parts = split(item, ':');
      bool found = false;
      for (std::size_t k = 0; k < ef.series.size(); ++k) {
        if (parts.size() == 2 && ef.series[k].query == parts[0] && ef.series[k].other == parts[1]) {
          traced[k] = true;
          found = true;
        }
      }
      if (!found) fail(kExitBadFlags, "--edges: no edge '" + item + "' (use query:other)");
    }
  }

  bmb::CsvTable diag;
  diag.header = {"query", "other", "ess", "geweke_z"};
  for (std::size_t l = 1; l <= f.max_lag; ++l) diag.header.push_back("acf_" + std::to_string(l));
  const double na = std::nan("");
  for (const auto& s : ef.series) {
    std::vector<std::string> row{s.query, s.other};
    const bmb::ChainSeries series(s.values, s.query + ":" + s.other);
    auto guarded = [&](auto fn) {
      try {
        return fn();
      } catch (const bmb::Error&) {
        return na;
      }
    };
    row.push_back(bmb::format_double(guarded([&] { return bmb::effective_sample_size(series); })));
    row.push_back(bmb::format_double(guarded([&] { return bmb::geweke_z(series); })));
    std::vector<double> acf(f.max_lag + 1, na);
    try {
      acf = bmb::autocorrelation(series, f.max_lag);
    } catch (const bmb::Error&) {
    }
    for (std::size_t l = 1; l <= f.max_lag; ++l) row.push_back(bmb::format_double(acf[l]));
    diag.rows.push_back(std::move(row));
  }

  std::string traces = "sample,query,other,weight\n";
  for (std::size_t k = 0; k < ef.series.size(); ++k) {
    if (!traced[k]) continue;
    const auto& s = ef.series[k];
    for (std::size_t t = 0; t < s.values.size(); ++t) {
      traces += std::to_string(t) + "," + s.query + "," + s.other + "," + bmb::format_double(s.values[t]) + "\n";
    }
  }

  const std::string dir = prepare_dir(f.out_dir);
  bmb::write_csv(join_path(dir, "diagnostics.csv"), diag);
  bmb::write_text(join_path(dir, "traces.csv"), traces);
  return kExitOk;
}

// ---- evaluate ----------------------------------------------------------------------

struct EvaluateFlags {
  std::string edges_file;
  std::string truth;
  std::string out_dir = ".";
  double level = 0.85;
};

int cmd_evaluate(const EvaluateFlags& f) {
  if (!(f.level > 0.0 && f.level < 1.0)) fail(kExitBadFlags, "--level must lie in (0, 1)");
  const EdgeFile ef = read_edges(f.edges_file);
  const std::size_t n = ef.series.front().values.size();
  if (n < 2) fail(kExitBadData, "evaluation needs at least 2 samples");

  const auto p = static_cast<bmb::Index>(ef.query.size());
  const auto q = static_cast<bmb::Index>(ef.other.size());
  auto qi = [&](const std::string& name) {
    return static_cast<bmb::Index>(std::find(ef.query.begin(), ef.query.end(), name) - ef.query.begin());
  };
  auto oi = [&](const std::string& name) {
    return static_cast<bmb::Index>(std::find(ef.other.begin(), ef.other.end(), name) - ef.other.begin());
  };
  std::vector<bmb::Matrix> samples(n, bmb::Matrix::Zero(p, q));
  for (const auto& s : ef.series)
    for (std::size_t t = 0; t < n; ++t) samples[t](qi(s.query), oi(s.other)) = s.values[t];

  bmb::Matrix truth = bmb::Matrix::Zero(p, q);
  try {
    const bmb::CsvTable t = bmb::read_csv(f.truth);
    if (t.header != std::vector<std::string>{"query", "other", "weight"}) {
      fail(kExitBadData, f.truth + ": expected header query,other,weight");
    }
    for (const auto& row : t.rows) {
      const bmb::Index i = qi(row[0]), j = oi(row[1]);
      if (i >= p || j >= q) fail(kExitBadData, f.truth + ": edge " + row[0] + "," + row[1] + " not in the fitted blanket");
      truth(i, j) = bmb::parse_double(row[2]);
    }
  } catch (const bmb::Error& e) {
    fail(kExitBadData, e.what());
  }

  const bmb::BlanketEstimate est = bmb::threshold_blanket(samples, f.level);
  const bmb::ScoreReport r = bmb::score(est, truth);
  json j;
  j["level"] = f.level;
  j["samples"] = n;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["fscore"] = r.fscore;
  j["true_positive"] = r.true_positive;
  j["wrong_sign"] = r.wrong_sign;
  j["spurious"] = r.spurious;
  j["missed"] = r.missed;
  j["inferred"] = r.inferred;
  j["true_edges"] = r.true_edges;
  j["edges"] = json::array();
  for (const auto& e : est.edges) {
    j["edges"].push_back({{"query", ef.query[static_cast<std::size_t>(e.query)]},
                          {"other", ef.other[static_cast<std::size_t>(e.other)]},
                          {"sign", e.sign}});
  }
  write_json(join_path(prepare_dir(f.out_dir), "score.json"), j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian Markov blanket sampler"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "generate a hub-structured precision matrix and data");
  simulate->add_option("--p", sim.spec.p, "query variables")->check(CLI::PositiveNumber);
  simulate->add_option("--q", sim.spec.q, "remaining variables")->check(CLI::PositiveNumber);
  simulate->add_option("--n", sim.n, "observations")->check(CLI::PositiveNumber);
  simulate->add_option("--edge-density", sim.spec.edge_density, "expected fraction of edges");
  simulate->add_option("--beta-a", sim.spec.beta_a, "propensity Beta shape a");
  simulate->add_option("--beta-b", sim.spec.beta_b, "propensity Beta shape b");
  simulate->add_option("--weight-lo", sim.spec.weight_lo, "smallest edge magnitude");
  simulate->add_option("--weight-hi", sim.spec.weight_hi, "largest edge magnitude");
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--out-dir", sim.out_dir, "output directory");

  ChainFlags fit_flags;
  bool center = true;
  auto* fit = app.add_subcommand("fit", "run the blanket sampler on a data file");
  add_chain_flags(fit, fit_flags);
  fit->add_flag("--center,!--no-center", center, "subtract row means (default on)");

  ChainFlags cop_flags;
  CopulaFlags cop;
  auto* fit_copula = app.add_subcommand("fit-copula", "run the rank-likelihood copula sampler");
  add_chain_flags(fit_copula, cop_flags);
  fit_copula->add_option("--kinds", cop.kinds, "CSV with header name,kind (continuous|ordinal)");
  fit_copula->add_option("--inner-sweeps", cop.inner_sweeps, "blanket sweeps per latent update")
      ->check(CLI::PositiveNumber);
  fit_copula->add_option("--iw-df", cop.iw_df, "inverse-Wishart prior degrees of freedom");

  DiagnoseFlags diag;
  auto* diagnose = app.add_subcommand("diagnose", "autocorrelation, ESS and Geweke z per edge");
  diagnose->add_option("--edges-file", diag.edges_file, "edges.csv from fit")->required();
  diagnose->add_option("--out-dir", diag.out_dir, "output directory");
  diagnose->add_option("--max-lag", diag.max_lag, "largest autocorrelation lag")->check(CLI::PositiveNumber);
  diagnose->add_option("--edges", diag.edges, "traced edges: all, none, or query:other,...");

  EvaluateFlags eval;
  auto* evaluate = app.add_subcommand("evaluate", "threshold and score against a truth file");
  evaluate->add_option("--edges-file", eval.edges_file, "edges.csv from fit")->required();
  evaluate->add_option("--truth", eval.truth, "truth.csv from simulate")->required();
  evaluate->add_option("--out-dir", eval.out_dir, "output directory");
  evaluate->add_option("--level", eval.level, "credible level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitBadFlags;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*fit) return cmd_fit(fit_flags, center);
    if (*fit_copula) return cmd_fit_copula(cop_flags, cop);
    if (*diagnose) return cmd_diagnose(diag);
    if (*evaluate) return cmd_evaluate(eval);
  } catch (const Failure& f) {
    std::cerr << "bmb: " << f.message << "\n";
    return f.code;
  } catch (const bmb::Error& e) {
    std::cerr << "bmb: " << e.what() << "\n";
    return e.kind() == bmb::ErrorKind::Io ? kExitBadData : kExitSampler;
  }
  return kExitBadFlags;
}
