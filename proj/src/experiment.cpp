#include "ksosbo/experiment.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "ksosbo/errors.hpp"
#include "ksosbo/records_io.hpp"

namespace ksosbo {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const std::string& key, T& out, const std::string& where) {
  if (obj.contains(key)) out = get_as<T>(obj, key, where);
}

void read_ksos(const json& j, KsosConfig& k, const std::string& where) {
  if (j.contains("kernel")) k.kernel_kind = kernel_kind_from_string(get_as<std::string>(j, "kernel", where));
  read_opt(j, "lambda_scale", k.lambda_scale, where);
  read_opt(j, "radius_factor", k.radius_factor, where);
  if (j.contains("lambda_reg")) {
    const auto& v = j.at("lambda_reg");
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "auto")) {
      k.lambda_reg.reset();
    } else {
      k.lambda_reg = get_as<double>(j, "lambda_reg", where);
    }
  }
  if (j.contains("lambda_span_factor")) {
    const auto& v = j.at("lambda_span_factor");
    if (v.is_null()) {
      k.lambda_span_factor.reset();
    } else {
      k.lambda_span_factor = get_as<double>(j, "lambda_span_factor", where);
    }
  }
  read_opt(j, "solver_tol", k.solver_tol, where);
  read_opt(j, "max_newton_iters", k.max_newton_iters, where);
  read_opt(j, "recovery_guard", k.recovery_guard, where);
}

const std::set<std::string> kKsosKeys{"kernel", "lambda_scale", "radius_factor", "lambda_reg", "lambda_span_factor",
                                      "solver_tol", "max_newton_iters", "recovery_guard"};

json ksos_json(const KsosConfig& k) {
  return json{{"kernel", to_string(k.kernel_kind)},
              {"lambda_scale", k.lambda_scale},
              {"radius_factor", k.radius_factor},
              {"lambda_reg", k.lambda_reg ? json(*k.lambda_reg) : json(nullptr)},
              {"lambda_span_factor", k.lambda_span_factor ? json(*k.lambda_span_factor) : json(nullptr)},
              {"solver_tol", k.solver_tol},
              {"max_newton_iters", k.max_newton_iters},
              {"recovery_guard", k.recovery_guard}};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (benchmarks.empty()) throw ConfigError("config: no benchmarks");
  if (optimizers.empty()) throw ConfigError("config: no optimizers");
  if (seeds.empty()) throw ConfigError("config: no seeds");
  std::set<std::uint64_t> seen(seeds.begin(), seeds.end());
  if (seen.size() != seeds.size()) throw ConfigError("config: seeds must be distinct");
  std::set<std::string> labels;
  for (const auto& o : optimizers) {
    if (!labels.insert(o.name()).second) throw ConfigError("config: duplicate optimizer label '" + o.name() + "'");
    for (char c : o.name()) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
        throw ConfigError("config: optimizer label '" + o.name() + "' may only use letters, digits, '_' and '-'");
      }
    }
  }
  std::set<std::pair<std::string, int>> benches;
  for (const auto& b : benchmarks) {
    if (!benches.insert({b.name, b.dim}).second) throw ConfigError("config: duplicate benchmark " + b.name);
    const Benchmark bm = make_benchmark(benchmark_from_string(b.name), b.dim);
    bm.require_f_star();
    for (const auto& o : optimizers) {
      BoConfig cfg = base;
      cfg.optimizer = o;
      cfg.validate(b.dim);
    }
  }
}

ExperimentSpec parse_experiment(const json& j) {
  check_keys(j,
             {"benchmarks", "optimizers", "acquisition", "n_init", "n_iters", "budget", "seeds", "init_design",
              "inject_observation_noise", "ksos", "gp"},
             "config");
  ExperimentSpec spec;
  BoConfig& base = spec.base;

  KsosConfig ksos_defaults;
  if (j.contains("ksos")) {
    check_keys(j.at("ksos"), kKsosKeys, "config.ksos");
    read_ksos(j.at("ksos"), ksos_defaults, "config.ksos");
  }

  if (!j.contains("benchmarks") || !j.at("benchmarks").is_array()) throw ConfigError("config.benchmarks: expected a list");
  for (const auto& b : j.at("benchmarks")) {
    check_keys(b, {"name", "dim"}, "config.benchmarks[]");
    spec.benchmarks.push_back({get_as<std::string>(b, "name", "config.benchmarks[]"),
                               get_as<int>(b, "dim", "config.benchmarks[]")});
  }

  if (!j.contains("optimizers") || !j.at("optimizers").is_array()) throw ConfigError("config.optimizers: expected a list");
  for (const auto& o : j.at("optimizers")) {
    const std::string where = "config.optimizers[]";
    if (!o.is_object() || !o.contains("kind")) throw ConfigError(where + ": missing 'kind'");
    OptimizerSpec os;
    os.kind = optimizer_kind_from_string(get_as<std::string>(o, "kind", where));
    read_opt(o, "label", os.label, where);
    switch (os.kind) {
      case OptimizerKind::ksos: {
        auto keys = kKsosKeys;
        keys.insert({"kind", "label"});
        check_keys(o, keys, where);
        os.ksos = ksos_defaults;
        read_ksos(o, os.ksos, where);
        break;
      }
      case OptimizerKind::sobol: check_keys(o, {"kind", "label"}, where); break;
      case OptimizerKind::cmaes:
        check_keys(o, {"kind", "label", "pop_size", "sigma0_factor"}, where);
        read_opt(o, "pop_size", os.cmaes.pop_size, where);
        read_opt(o, "sigma0_factor", os.cmaes.sigma0_factor, where);
        break;
      case OptimizerKind::de:
        check_keys(o, {"kind", "label", "popsize_multiplier", "maxiter", "mutation", "recombination"}, where);
        read_opt(o, "popsize_multiplier", os.de.popsize_multiplier, where);
        read_opt(o, "maxiter", os.de.maxiter, where);
        if (o.contains("mutation")) {
          const auto m = get_as<std::vector<double>>(o, "mutation", where);
          if (m.size() != 2) throw ConfigError(where + ".mutation: expected [low, high]");
          os.de.mutation_lo = m[0];
          os.de.mutation_hi = m[1];
        }
        read_opt(o, "recombination", os.de.recombination, where);
        break;
    }
    spec.optimizers.push_back(std::move(os));
  }

  if (j.contains("acquisition")) {
    const auto& a = j.at("acquisition");
    check_keys(a, {"kind", "xi", "beta"}, "config.acquisition");
    if (a.contains("kind")) {
      base.acquisition.kind = acquisition_kind_from_string(get_as<std::string>(a, "kind", "config.acquisition"));
    }
    read_opt(a, "xi", base.acquisition.xi, "config.acquisition");
    read_opt(a, "beta", base.acquisition.beta, "config.acquisition");
  }
  read_opt(j, "n_init", base.n_init, "config");
  read_opt(j, "n_iters", base.n_iters, "config");
  read_opt(j, "budget", base.budget, "config");
  if (j.contains("seeds")) {
    const auto seeds = get_as<std::vector<long long>>(j, "seeds", "config");
    spec.seeds.clear();
    for (long long s : seeds) {
      if (s < 0) throw ConfigError("config.seeds: seeds must be non-negative");
      spec.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (j.contains("init_design")) {
    base.init_design = sampling_kind_from_string(get_as<std::string>(j, "init_design", "config"));
  }
  read_opt(j, "inject_observation_noise", base.inject_observation_noise, "config");
  if (j.contains("gp")) {
    check_keys(j.at("gp"), {"noise_factor", "restarts"}, "config.gp");
    read_opt(j.at("gp"), "noise_factor", base.noise_factor, "config.gp");
    read_opt(j.at("gp"), "restarts", base.gp_restarts, "config.gp");
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_experiment(j);
}

json to_json(const ExperimentSpec& spec) {
  json benches = json::array();
  for (const auto& b : spec.benchmarks) benches.push_back({{"name", b.name}, {"dim", b.dim}});
  json opts = json::array();
  for (const auto& o : spec.optimizers) {
    json e{{"kind", to_string(o.kind)}, {"label", o.name()}};
    switch (o.kind) {
      case OptimizerKind::ksos: e.update(ksos_json(o.ksos)); break;
      case OptimizerKind::sobol: break;
      case OptimizerKind::cmaes:
        e["pop_size"] = o.cmaes.pop_size;
        e["sigma0_factor"] = o.cmaes.sigma0_factor;
        break;
      case OptimizerKind::de:
        e["popsize_multiplier"] = o.de.popsize_multiplier;
        e["maxiter"] = o.de.maxiter;
        e["mutation"] = {o.de.mutation_lo, o.de.mutation_hi};
        e["recombination"] = o.de.recombination;
        break;
    }
    opts.push_back(std::move(e));
  }
  const BoConfig& b = spec.base;
  return json{{"benchmarks", benches},
              {"optimizers", opts},
              {"acquisition", {{"kind", to_string(b.acquisition.kind)}, {"xi", b.acquisition.xi}, {"beta", b.acquisition.beta}}},
              {"n_init", b.n_init},
              {"n_iters", b.n_iters},
              {"budget", b.budget},
              {"seeds", spec.seeds},
              {"init_design", to_string(b.init_design)},
              {"inject_observation_noise", b.inject_observation_noise},
              {"gp", {{"noise_factor", b.noise_factor}, {"restarts", b.gp_restarts}}}};
}

std::string config_fingerprint(const ExperimentSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json(spec).dump())));
  return buf;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir, int workers,
                                const ProgressFn& progress) {
  spec.validate();
  if (workers < 1) throw ConfigError("workers must be at least 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  struct Task {
    std::size_t bench;
    std::size_t opt;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t b = 0; b < spec.benchmarks.size(); ++b) {
    for (std::size_t o = 0; o < spec.optimizers.size(); ++o) {
      for (auto s : spec.seeds) tasks.push_back({b, o, s});
    }
  }
  const std::string fp = config_fingerprint(spec);
  std::vector<RunRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      const auto& be = spec.benchmarks[t.bench];
      const Benchmark bm = make_benchmark(benchmark_from_string(be.name), be.dim);
      BoConfig cfg = spec.base;
      cfg.optimizer = spec.optimizers[t.opt];
      RunRecord rec;
      try {
        rec = run_bo(bm, cfg, t.seed);
      } catch (const std::exception& e) {
        rec.benchmark = be.name;
        rec.dim = be.dim;
        rec.optimizer = cfg.optimizer.name();
        rec.acquisition = to_string(cfg.acquisition.kind);
        rec.seed = t.seed;
        rec.failed = true;
        rec.error = e.what();
      }
      rec.fingerprint = fp;
      records[i] = std::move(rec);
      if (progress) {
        std::lock_guard lock(progress_mu);
        progress(records[i]);
      }
    }
  };
  const int n_threads = std::min<int>(workers, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  ExperimentResult result;
  result.runs_total = static_cast<int>(records.size());
  std::vector<const RunRecord*> failed;
  json groups = json::array();
  std::size_t k = 0;
  for (std::size_t b = 0; b < spec.benchmarks.size(); ++b) {
    const auto& be = spec.benchmarks[b];
    std::vector<OptimizerRuns> per_opt;
    for (std::size_t o = 0; o < spec.optimizers.size(); ++o) {
      const auto& os = spec.optimizers[o];
      OptimizerRuns g{os.name(), os.kind == OptimizerKind::ksos, {}};
      json ok = json::array();
      json bad = json::array();
      for (std::size_t s = 0; s < spec.seeds.size(); ++s, ++k) {
        const RunRecord& r = records[k];
        if (r.failed) {
          failed.push_back(&r);
          bad.push_back(r.seed);
        } else {
          g.runs.push_back(&r);
          ok.push_back(r.seed);
        }
      }
      const std::string run_file = run_csv_name(be.name, be.dim, os.name());
      const std::string diag_file = diagnostics_csv_name(be.name, be.dim, os.name());
      write_run_csv(out_dir / run_file, g.runs);
      write_diagnostics_csv(out_dir / diag_file, g.runs);
      groups.push_back({{"benchmark", be.name},
                        {"dim", be.dim},
                        {"optimizer", os.name()},
                        {"kind", to_string(os.kind)},
                        {"run_file", run_file},
                        {"diagnostics_file", diag_file},
                        {"seeds_ok", ok},
                        {"seeds_failed", bad}});
      per_opt.push_back(std::move(g));
    }
    auto rows = summarize_group(be.name, be.dim, per_opt);
    result.summary.insert(result.summary.end(), rows.begin(), rows.end());
  }
  result.runs_failed = static_cast<int>(failed.size());
  write_summary_csv(out_dir / "summary.csv", result.summary);
  write_failures_csv(out_dir / "failures.csv", failed);

  const json manifest{{"tool", "ksosbo"},
                      {"fingerprint", fp},
                      {"config", to_json(spec)},
                      {"groups", groups},
                      {"summary_file", "summary.csv"},
                      {"failures_file", "failures.csv"},
                      {"runs_total", result.runs_total},
                      {"runs_failed", result.runs_failed}};
  const auto manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + manifest_path.string() + " for writing");
  out << manifest.dump(2) << '\n';
  out.close();
  if (!out) throw IoError("failed writing " + manifest_path.string());
  return result;
}

namespace {

json read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::vector<SummaryRow> summarize_directory(const std::filesystem::path& dir) {
  const json manifest = read_manifest(dir);
  const ExperimentSpec spec = parse_experiment(manifest.at("config"));
  std::vector<SummaryRow> out;
  for (const auto& be : spec.benchmarks) {
    std::vector<std::vector<RunRecord>> storage;
    std::vector<OptimizerRuns> per_opt;
    for (const auto& g : manifest.at("groups")) {
      if (g.at("benchmark") != be.name || g.at("dim") != be.dim) continue;
      storage.push_back(read_run_csv(dir / g.at("run_file").get<std::string>()));
    }
    std::size_t i = 0;
    for (const auto& g : manifest.at("groups")) {
      if (g.at("benchmark") != be.name || g.at("dim") != be.dim) continue;
      OptimizerRuns r{g.at("optimizer").get<std::string>(), g.at("kind") == "ksos", {}};
      for (const auto& rec : storage[i]) r.runs.push_back(&rec);
      per_opt.push_back(std::move(r));
      ++i;
    }
    auto rows = summarize_group(be.name, be.dim, per_opt);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

namespace {

bool same(double a, double b) { return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}

std::string show(const std::optional<double>& v) { return v ? format_double(*v) : kNa; }

}  // namespace

VerifyReport verify_directory(const std::filesystem::path& dir) {
  VerifyReport rep;
  const json manifest = read_manifest(dir);
  const ExperimentSpec spec = parse_experiment(manifest.at("config"));

  // Per-run sanity: monotone incumbents and, without noise, regret = best - f*.
  for (const auto& g : manifest.at("groups")) {
    const auto file = g.at("run_file").get<std::string>();
    const Benchmark bm = make_benchmark(benchmark_from_string(g.at("benchmark").get<std::string>()), g.at("dim").get<int>());
    for (const auto& rec : read_run_csv(dir / file)) {
      for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const auto& row = rec.rows[i];
        if (i > 0 && row.best_so_far > rec.rows[i - 1].best_so_far) {
          rep.discrepancies.push_back(file + " seed " + std::to_string(rec.seed) + " iteration " +
                                      std::to_string(row.iteration) + ": best_so_far increased");
        }
        if (!spec.base.inject_observation_noise && !same(row.regret, simple_regret(row.best_so_far, *bm.f_star))) {
          rep.discrepancies.push_back(file + " seed " + std::to_string(rec.seed) + " iteration " +
                                      std::to_string(row.iteration) + ": regret != best_so_far - f_star");
        }
      }
    }
  }

  const auto recomputed = summarize_directory(dir);
  const auto stored = read_summary_csv(dir / manifest.value("summary_file", "summary.csv"));
  if (recomputed.size() != stored.size()) {
    rep.discrepancies.push_back("summary has " + std::to_string(stored.size()) + " rows, recomputation gives " +
                                std::to_string(recomputed.size()));
  }
  for (const auto& r : recomputed) {
    const SummaryRow* s = nullptr;
    for (const auto& c : stored) {
      if (c.benchmark == r.benchmark && c.dim == r.dim && c.optimizer == r.optimizer) s = &c;
    }
    const std::string key = r.benchmark + " d" + std::to_string(r.dim) + " " + r.optimizer;
    if (!s) {
      rep.discrepancies.push_back(key + ": missing from summary");
      continue;
    }
    ++rep.rows_checked;
    auto check = [&](const char* col, bool ok, const std::string& got, const std::string& want) {
      if (!ok) rep.discrepancies.push_back(key + ": " + col + " is " + got + ", recomputed " + want);
    };
    check("final_mean_regret", same(s->final_mean_regret, r.final_mean_regret), format_double(s->final_mean_regret),
          format_double(r.final_mean_regret));
    check("ci_half_width", same(s->ci_half_width, r.ci_half_width), format_double(s->ci_half_width),
          format_double(r.ci_half_width));
    check("rank", s->rank == r.rank, std::to_string(s->rank), std::to_string(r.rank));
    check("improvement_pct", same(s->improvement_pct, r.improvement_pct), show(s->improvement_pct),
          show(r.improvement_pct));
    check("time_to_threshold_s", same(s->time_to_threshold_s, r.time_to_threshold_s), show(s->time_to_threshold_s),
          show(r.time_to_threshold_s));
    check("runtime_improvement_pct", same(s->runtime_improvement_pct, r.runtime_improvement_pct),
          show(s->runtime_improvement_pct), show(r.runtime_improvement_pct));
  }
  return rep;
}

}  // namespace ksosbo
