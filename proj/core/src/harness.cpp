#include "hrr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

constexpr double kRhoClip = 1e-6;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : "nan"; }

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation, 0 for fewer than two values.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string trace_name(TaskKind task, int k, int episode) {
  char buf[96];
  if (episode < 0) {
    std::snprintf(buf, sizeof buf, "%s_s%02d_baseline.jsonl", std::string(to_string(task)).c_str(), k);
  } else {
    std::snprintf(buf, sizeof buf, "%s_s%02d_e%04d.jsonl", std::string(to_string(task)).c_str(), k,
                  episode);
  }
  return buf;
}

std::vector<const EpisodeTrace*> all_evaluation(const ExperimentResult& r) {
  std::vector<const EpisodeTrace*> out;
  for (const SeedRun& run : r.runs) {
    const auto eval = evaluation_episodes(run.episodes);
    out.insert(out.end(), eval.begin(), eval.end());
  }
  return out;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t base, int k) {
  return mix_seed(base, static_cast<std::uint64_t>(k));
}

std::uint64_t instance_seed(std::uint64_t run, int episode) {
  return mix_seed(run, 0x1000u + static_cast<std::uint64_t>(episode));
}

std::vector<const EpisodeTrace*> evaluation_episodes(const std::vector<EpisodeTrace>& traces) {
  std::vector<const EpisodeTrace*> out;
  for (const EpisodeTrace& t : traces) {
    if (!t.warmup) out.push_back(&t);
  }
  return out;
}

double rsr(const std::vector<const EpisodeTrace*>& traces) {
  if (traces.empty()) return 0.0;
  const auto correct = std::count_if(traces.begin(), traces.end(),
                                     [](const EpisodeTrace* t) { return t->correct; });
  return static_cast<double>(correct) / static_cast<double>(traces.size());
}

double frugality(double e_mean, double e_baseline) {
  if (!(e_baseline > 0.0)) throw std::invalid_argument("frugality: baseline energy must be > 0");
  return 1.0 - e_mean / e_baseline;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> averaged_series(const std::vector<const EpisodeTrace*>& traces,
                                    double CycleRecord::*field) {
  std::size_t len = 0;
  for (const EpisodeTrace* t : traces) len = std::max(len, t->cycles.size());
  std::vector<double> sum(len, 0.0);
  std::vector<std::size_t> count(len, 0);
  for (const EpisodeTrace* t : traces) {
    for (std::size_t i = 0; i < t->cycles.size(); ++i) {
      sum[i] += t->cycles[i].*field;
      ++count[i];
    }
  }
  for (std::size_t i = 0; i < len; ++i) sum[i] /= static_cast<double>(count[i]);
  return sum;
}

RhoEstimate estimate_rho(const std::vector<std::vector<double>>& eps_series) {
  std::vector<double> per_episode;
  for (const auto& eps : eps_series) {
    if (eps.size() < 4) continue;  // t* >= 3
    const std::size_t t_star = eps.size() - 1;
    double log_sum = 0.0;
    int n = 0;
    for (std::size_t t = 2; t + 1 <= t_star; ++t) {
      if (eps[t - 1] > 0.0 && eps[t] > 0.0) {
        log_sum += std::log(eps[t] / eps[t - 1]);
        ++n;
      }
    }
    if (n > 0) per_episode.push_back(std::exp(log_sum / n));
  }
  RhoEstimate r;
  if (per_episode.empty()) {
    r.value = 1.0 - kRhoClip;
    r.flagged = true;
    return r;
  }
  const double m = mean_of(per_episode);
  r.value = std::clamp(m, kRhoClip, 1.0 - kRhoClip);
  r.flagged = r.value != m || m >= 1.0 - kRhoClip;
  return r;
}

RhoEstimate estimate_rho(const std::vector<const EpisodeTrace*>& traces) {
  std::vector<std::vector<double>> series;
  for (const EpisodeTrace* t : traces) {
    std::vector<double> eps;
    for (const CycleRecord& c : t->cycles) eps.push_back(c.eps);
    series.push_back(std::move(eps));
  }
  return estimate_rho(series);
}

std::optional<double> estimate_mu(const std::vector<const EpisodeTrace*>& traces) {
  std::vector<double> per_episode;
  for (const EpisodeTrace* tr : traces) {
    const auto& c = tr->cycles;
    if (c.size() < 4) continue;
    const std::size_t t_star = c.size() - 1;
    double log_sum = 0.0;
    int n = 0;
    for (std::size_t t = 2; t + 1 <= t_star; ++t) {
      if (c[t - 1].lyapunov > 0.0 && c[t].lyapunov > 0.0) {
        log_sum += std::log(c[t].lyapunov / c[t - 1].lyapunov);
        ++n;
      }
    }
    if (n > 0) per_episode.push_back(-log_sum / n);
  }
  if (per_episode.empty()) return std::nullopt;
  return mean_of(per_episode);
}

MetricsSummary summarize(const SeedRun& run) {
  MetricsSummary m;
  const auto eval = evaluation_episodes(run.episodes);
  m.n_eval = eval.size();
  m.rsr = rsr(eval);
  std::vector<double> t_star, energy;
  std::size_t criterion = 0;
  for (const EpisodeTrace* t : eval) {
    t_star.push_back(t->t_star);
    energy.push_back(t->total_energy);
    if (t->reason == StopReason::criterion) ++criterion;
  }
  m.t_star_mean = mean_of(t_star);
  m.t_star_std = std_of(t_star);
  m.e_cog_mean = mean_of(energy);
  m.e_baseline = run.baseline.total_energy;
  m.frugality_fp = m.e_baseline > 0.0 ? frugality(m.e_cog_mean, m.e_baseline) : std::nan("");
  m.criterion_fraction =
      eval.empty() ? 0.0 : static_cast<double>(criterion) / static_cast<double>(eval.size());
  m.v_traj = averaged_series(eval, &CycleRecord::lyapunov);
  m.h_traj = averaged_series(eval, &CycleRecord::entropy);
  m.pearson_r = pearson(m.v_traj, m.h_traj);
  m.rho_hat = estimate_rho(eval);
  m.mu_hat = estimate_mu(eval);
  return m;
}

SeedRun run_seed_sequence(const RunConfig& config, std::uint64_t seed) {
  SeedRun run;
  run.seed = seed;
  EngramStore store;
  Output previous;
  bool have_previous = false;
  for (int ep = 0; ep < config.n_episodes; ++ep) {
    const std::uint64_t inst = instance_seed(seed, ep);
    const auto task = make_task(config.task, inst, config.difficulty);
    EpisodeOptions opts;
    opts.warm_start = config.warm_start_enabled;
    opts.warmup = ep < config.warmup_episodes;
    opts.previous_output = have_previous ? &previous : nullptr;
    EpisodeTrace trace = run_episode(*task, config.episode, store, mix_seed(inst, 0xE), opts);
    trace.episode = ep;
    previous = trace.cycles.back().y;
    have_previous = true;
    run.episodes.push_back(std::move(trace));
  }
  const int base_ep = std::min(config.warmup_episodes, config.n_episodes - 1);
  const std::uint64_t inst = instance_seed(seed, base_ep);
  const auto task = make_task(config.task, inst, config.difficulty);
  EngramStore empty;
  EpisodeOptions opts;
  opts.warm_start = false;
  opts.single_pass = true;
  run.baseline = run_episode(*task, config.episode, empty, mix_seed(inst, 0xE), opts);
  run.baseline.episode = -1;
  return run;
}

ExperimentResult run_experiment(const RunConfig& config) {
  config.validate();
  enforce_gates(config.episode.hormones);
  ExperimentResult result;
  result.config = config;
  result.runs.resize(static_cast<std::size_t>(config.n_seeds));
  std::vector<std::exception_ptr> errors(result.runs.size());
  std::vector<std::thread> workers;
  for (int k = 0; k < config.n_seeds; ++k) {
    workers.emplace_back([&, k] {
      try {
        result.runs[k] = run_seed_sequence(config, run_seed(config.seed, k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const SeedRun& run : result.runs) result.per_seed.push_back(summarize(run));
  return result;
}

void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
  os << "task,seed,n_eval,rsr,t_star_mean,t_star_std,e_cog_mean,e_baseline,frugality_fp,"
        "criterion_fraction,pearson_r,rho_hat,rho_flagged,mu_hat\n";
  const std::string task(to_string(result.config.task));
  for (std::size_t k = 0; k < result.per_seed.size(); ++k) {
    const MetricsSummary& m = result.per_seed[k];
    os << task << ',' << result.runs[k].seed << ',' << m.n_eval << ',' << num(m.rsr) << ','
       << num(m.t_star_mean) << ',' << num(m.t_star_std) << ',' << num(m.e_cog_mean) << ','
       << num(m.e_baseline) << ',' << num(m.frugality_fp) << ',' << num(m.criterion_fraction)
       << ',' << opt_num(m.pearson_r) << ',' << num(m.rho_hat.value) << ','
       << (m.rho_hat.flagged ? 1 : 0) << ',' << opt_num(m.mu_hat) << '\n';
  }
  using Getter = std::optional<double> (*)(const MetricsSummary&);
  const std::vector<Getter> columns{
      [](const MetricsSummary& m) -> std::optional<double> { return m.rsr; },
      [](const MetricsSummary& m) -> std::optional<double> { return m.t_star_mean; },
      [](const MetricsSummary& m) -> std::optional<double> { return m.t_star_std; },
      [](const MetricsSummary& m) -> std::optional<double> { return m.e_cog_mean; },
      [](const MetricsSummary& m) -> std::optional<double> { return m.e_baseline; },
      [](const MetricsSummary& m) -> std::optional<double> { return m.frugality_fp; },
      [](const MetricsSummary& m) -> std::optional<double> { return m.criterion_fraction; },
      [](const MetricsSummary& m) { return m.pearson_r; },
      [](const MetricsSummary& m) -> std::optional<double> { return m.rho_hat.value; },
      [](const MetricsSummary& m) -> std::optional<double> {
        return m.rho_hat.flagged ? 1.0 : 0.0;
      },
      [](const MetricsSummary& m) { return m.mu_hat; },
  };
  std::size_t n_eval = 0;
  for (const auto& m : result.per_seed) n_eval += m.n_eval;
  for (int row = 0; row < 2; ++row) {
    os << task << ',' << (row == 0 ? "mean" : "std") << ',' << n_eval;
    for (Getter g : columns) {
      std::vector<double> vals;
      for (const auto& m : result.per_seed) {
        const auto v = g(m);
        if (v && !std::isnan(*v)) vals.push_back(*v);
      }
      os << ',' << (vals.empty() ? "nan" : num(row == 0 ? mean_of(vals) : std_of(vals)));
    }
    os << '\n';
  }
}

void write_series_csv(std::ostream& os, const ExperimentResult& result, bool lyapunov) {
  os << "t";
  for (const SeedRun& run : result.runs) os << ",seed_" << run.seed;
  os << ",pooled,n\n";
  const auto field = lyapunov ? &CycleRecord::lyapunov : &CycleRecord::entropy;
  std::vector<std::vector<double>> per_seed;
  for (const SeedRun& run : result.runs) {
    per_seed.push_back(averaged_series(evaluation_episodes(run.episodes), field));
  }
  const auto pooled_traces = all_evaluation(result);
  const auto pooled = averaged_series(pooled_traces, field);
  for (std::size_t t = 0; t < pooled.size(); ++t) {
    std::size_t n = 0;
    for (const EpisodeTrace* tr : pooled_traces) n += tr->cycles.size() > t ? 1 : 0;
    os << t;
    for (const auto& s : per_seed) os << ',' << (t < s.size() ? num(s[t]) : "");
    os << ',' << num(pooled[t]) << ',' << n << '\n';
  }
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "config.json");
    out << to_json(result.config).dump(2) << '\n';
  }
  if (result.config.write_traces) {
    const fs::path traces = dir / "traces";
    fs::create_directories(traces);
    for (std::size_t k = 0; k < result.runs.size(); ++k) {
      const SeedRun& run = result.runs[k];
      for (const EpisodeTrace& t : run.episodes) {
        std::ofstream out(traces / trace_name(result.config.task, static_cast<int>(k), t.episode));
        write_trace(out, t);
      }
      std::ofstream out(traces / trace_name(result.config.task, static_cast<int>(k), -1));
      write_trace(out, run.baseline);
    }
  }
  write_reports(result, dir);
}

void write_reports(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "summary.csv");
    write_summary_csv(out, result);
  }
  {
    std::ofstream out(dir / "series_v.csv");
    write_series_csv(out, result, true);
  }
  {
    std::ofstream out(dir / "series_h.csv");
    write_series_csv(out, result, false);
  }
}

ExperimentResult read_outputs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  ExperimentResult result;
  result.config = load_config((dir / "config.json").string());
  const fs::path traces = dir / "traces";
  if (!fs::is_directory(traces)) throw std::runtime_error("no traces directory in " + dir.string());
  result.runs.resize(static_cast<std::size_t>(result.config.n_seeds));
  for (int k = 0; k < result.config.n_seeds; ++k) {
    SeedRun& run = result.runs[static_cast<std::size_t>(k)];
    run.seed = run_seed(result.config.seed, k);
    for (int ep = 0; ep < result.config.n_episodes; ++ep) {
      const fs::path p = traces / trace_name(result.config.task, k, ep);
      std::ifstream in(p);
      if (!in) throw std::runtime_error("missing trace " + p.string());
      try {
        run.episodes.push_back(read_trace(in));
      } catch (const std::exception& e) {
        throw std::runtime_error(p.string() + ": " + e.what());
      }
    }
    const fs::path b = traces / trace_name(result.config.task, k, -1);
    std::ifstream in(b);
    if (!in) throw std::runtime_error("missing trace " + b.string());
    run.baseline = read_trace(in);
  }
  for (const SeedRun& run : result.runs) result.per_seed.push_back(summarize(run));
  return result;
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"gamma_cu", "gamma_uc", "lambda_c",
                                              "lambda_u", "theta_c",  "theta_u"};
  return names;
}

std::vector<SweepRow> sweep(const RunConfig& base, const std::string& param,
                            const std::vector<double>& offsets,
                            const std::vector<TaskKind>& tasks) {
  const auto& names = sweep_parameters();
  if (std::find(names.begin(), names.end(), param) == names.end()) {
    throw ConfigError("sweep parameter must be one of gamma_cu, gamma_uc, lambda_c, lambda_u, "
                      "theta_c, theta_u");
  }
  if (tasks.empty()) throw ConfigError("sweep needs at least one task");
  const double base_value = parameter_value(base, param);
  std::vector<SweepRow> rows;
  for (double offset : offsets) {
    SweepRow row;
    row.param = param;
    row.offset = offset;
    row.value = base_value * (1.0 + offset);
    RunConfig cfg;
    try {
      cfg = with_parameter(base, param, row.value);
      enforce_gates(cfg.episode.hormones);
    } catch (const std::exception& e) {
      row.gate_ok = false;
      row.gate_message = e.what();
      row.rsr = std::nan("");
      row.t_star_mean = std::nan("");
      rows.push_back(row);
      continue;
    }
    cfg.n_episodes = kSweepEpisodes;
    cfg.warmup_episodes = kSweepWarmup;
    cfg.write_traces = false;
    double rsr_sum = 0.0, t_sum = 0.0;
    for (TaskKind task : tasks) {
      cfg.task = task;
      const ExperimentResult r = run_experiment(cfg);
      std::vector<double> rs, ts;
      for (const auto& m : r.per_seed) {
        rs.push_back(m.rsr);
        ts.push_back(m.t_star_mean);
      }
      rsr_sum += mean_of(rs);
      t_sum += mean_of(ts);
    }
    row.rsr = rsr_sum / static_cast<double>(tasks.size());
    row.t_star_mean = t_sum / static_cast<double>(tasks.size());
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "param,offset,value,gate,rsr,t_star_mean,message\n";
  for (const SweepRow& r : rows) {
    std::string msg = r.gate_message;
    std::replace(msg.begin(), msg.end(), '"', '\'');
    os << r.param << ',' << num(r.offset) << ',' << num(r.value) << ','
       << (r.gate_ok ? "pass" : "FLAGGED") << ',' << num(r.rsr) << ',' << num(r.t_star_mean)
       << ",\"" << msg << "\"\n";
  }
}

}  // namespace hrr
