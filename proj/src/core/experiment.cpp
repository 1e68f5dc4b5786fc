#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "dp_oracle.hpp"
#include "eleanor.hpp"
#include "error.hpp"
#include "lsvi.hpp"
#include "rng.hpp"
#include "state_action_features.hpp"

namespace smoothrl {

namespace {

constexpr const char* kVersion = "0.1.0";

std::size_t state_action_dim(EnvironmentId env) { return env == EnvironmentId::kSyntheticSmooth ? 2 : 3; }

class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_episode() {}
  virtual Vector act(std::size_t stage, const Vector& state) = 0;
  virtual void observe(const Transcript& transcript) = 0;
};

class LsviAgent final : public Agent {
 public:
  LsviAgent(std::shared_ptr<const StateActionFeatures> features, std::size_t horizon, Matrix grid, LsviConfig cfg)
      : learner_(std::move(features), horizon, std::move(grid), cfg) {}

  Vector act(std::size_t stage, const Vector& state) override { return learner_.select_action(stage, state); }
  void observe(const Transcript& transcript) override { learner_.update(transcript); }

 private:
  LsviLearner learner_;
};

class EleanorAgent final : public Agent {
 public:
  EleanorAgent(std::shared_ptr<const StateActionFeatures> features, const Environment& env, Matrix grid,
               EleanorOptions options, CounterRng rng)
      : features_(std::move(features)),
        grid_(std::move(grid)),
        options_(std::move(options)),
        rng_(rng),
        data_(env.horizon(), features_->length(), static_cast<std::size_t>(grid_.rows())),
        initial_(grid_.rows(), static_cast<Eigen::Index>(features_->length())) {
    features_->evaluate_grid(env.initial_state(), grid_, {initial_.data(), static_cast<std::size_t>(initial_.size())});
  }

  void begin_episode() override {
    plan_ = optimistic_plan(std::span<const StageData>(data_.stages()), initial_, options_, rng_);
  }
  Vector act(std::size_t stage, const Vector& state) override {
    const std::size_t i = smoothrl::act(plan_, stage, state, grid_, *features_);
    return grid_.row(static_cast<Eigen::Index>(i)).transpose();
  }
  void observe(const Transcript& transcript) override { data_.add(transcript, *features_, grid_); }

 private:
  std::shared_ptr<const StateActionFeatures> features_;
  Matrix grid_;
  EleanorOptions options_;
  CounterRng rng_;
  EpisodeDataset data_;
  RowMatrix initial_;
  EleanorPlan plan_;
};

std::unique_ptr<Agent> make_agent(const RunKey& key, const ExperimentConfig& cfg, const Environment& env,
                                  CounterRng plan_rng) {
  const std::size_t d = env.state_dim() + env.action_dim();
  const BasisKind kind =
      key.algorithm == AlgorithmId::kMonomialLsvi ? BasisKind::kMonomialNaive : BasisKind::kLegendreOrthonormal;
  auto poly = std::make_shared<PolynomialStateActionFeatures>(FeatureMap(kind, d, key.degree), env.state_dim(),
                                                              env.action_dim());
  const double scale = poly->map().scale();
  Matrix grid = uniform_action_grid(env.action_dim(), cfg.action_points);
  const double beta = default_bonus_scale(poly->length(), cfg.episodes, env.horizon(), cfg.c_beta, cfg.delta);

  if (key.algorithm == AlgorithmId::kLegendreEleanor) {
    EleanorOptions opts;
    opts.lambda = cfg.lambda;
    opts.ridge_radius.assign(env.horizon(), beta);
    opts.norm_caps = norm_caps_from_schedule(confidence_radii(env.horizon(), cfg.eleanor_base), poly->length(), scale,
                                             std::pow(2.0, static_cast<double>(d)));
    opts.budget = cfg.eleanor_budget;
    opts.slack = cfg.eleanor_slack;
    return std::make_unique<EleanorAgent>(std::move(poly), env, std::move(grid), std::move(opts), plan_rng);
  }
  LsviConfig lc;
  lc.lambda = cfg.lambda;
  lc.beta = beta;
  lc.values = value_range_for(env);
  return std::make_unique<LsviAgent>(std::move(poly), env.horizon(), std::move(grid), lc);
}

struct RunResult {
  std::vector<double> returns;
  bool failed = false;
  std::string message;
};

RunResult execute_run(const RunKey& key, const ExperimentConfig& cfg) {
  RunResult out;
  const std::uint64_t base = derive_stream(cfg.master_seed, key.label());
  CounterRng env_rng(derive_stream(base, "env"));
  CounterRng plan_rng(derive_stream(base, "plan"));
  const auto env = make_environment(key.environment, cfg);
  const auto agent = make_agent(key, cfg, *env, plan_rng);
  out.returns.reserve(cfg.episodes);
  try {
    for (std::size_t k = 0; k < cfg.episodes; ++k) {
      agent->begin_episode();
      const Transcript tr =
          run_episode(*env, [&](std::size_t h, const Vector& s) { return agent->act(h, s); }, env_rng, k);
      agent->observe(tr);
      out.returns.push_back(tr.total_return());
    }
  } catch (const NumericalError& e) {
    out.failed = true;
    out.message = e.what();
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, EnvironmentId> || std::is_same_v<T, AlgorithmId>)
      out += to_string(items[i]);
    else
      out += std::to_string(items[i]);
  }
  return out;
}

double lqr_oracle(EnvironmentId env, const ExperimentConfig& cfg) {
  const auto holder = make_environment(env, cfg);
  return dp_oracle(dynamic_cast<const SquashedLqr&>(*holder).config());
}

}  // namespace

std::string RunKey::label() const {
  return std::string(to_string(environment)) + "/" + std::string(to_string(algorithm)) + "/" +
         std::to_string(degree) + "/" + std::to_string(seed);
}

std::unique_ptr<Environment> make_environment(EnvironmentId id, const ExperimentConfig& cfg) {
  if (id == EnvironmentId::kSyntheticSmooth) {
    SmoothDensityMdpConfig c = default_smooth_mdp(cfg.horizon ? cfg.horizon : 2);
    c.reward_noise_std = cfg.reward_noise_std;
    return std::make_unique<SmoothDensityMdp>(std::move(c));
  }
  auto [left, right] = reference_lqr_environments();
  SquashedLqrConfig c = id == EnvironmentId::kLqrLeft ? left : right;
  c.noise_std = cfg.noise_std;
  c.reward_noise_std = cfg.reward_noise_std;
  if (cfg.horizon) c.horizon = cfg.horizon;
  return std::make_unique<SquashedLqr>(std::move(c));
}

std::vector<unsigned> resolved_degrees(const ExperimentConfig& cfg, EnvironmentId env) {
  if (!cfg.degrees.empty()) return cfg.degrees;
  return {choose_degree(cfg.episodes, state_action_dim(env), cfg.smoothness)};
}

std::vector<RunKey> enumerate_runs(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunKey> keys;
  for (EnvironmentId env : cfg.environments) {
    const std::size_t horizon = make_environment(env, cfg)->horizon();
    for (AlgorithmId algo : cfg.algorithms) {
      for (unsigned degree : resolved_degrees(cfg, env)) {
        if (algo == AlgorithmId::kLegendreEleanor) {
          const std::size_t len = binomial(degree + state_action_dim(env), state_action_dim(env));
          if (len > kEleanorMaxFeatures || horizon > kEleanorMaxHorizon)
            throw ConfigError("config: " + std::string(to_string(algo)) + " supports at most " +
                              std::to_string(kEleanorMaxFeatures) + " features and horizon " +
                              std::to_string(kEleanorMaxHorizon) + " (" + std::string(to_string(env)) + ", degree " +
                              std::to_string(degree) + " gives " + std::to_string(len) + " features, horizon " +
                              std::to_string(horizon) + ")");
        }
        for (std::int64_t seed : cfg.seeds) keys.push_back({env, algo, degree, seed});
      }
    }
  }
  return keys;
}

std::size_t configured_threads() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* v = std::getenv("SMOOTH_RL_THREADS")) {
    unsigned long n = 0;
    const char* end = v + std::char_traits<char>::length(v);
    auto [p, ec] = std::from_chars(v, end, n);
    if (ec == std::errc() && p == end && n > 0) return std::min<std::size_t>(n, hw);
  }
  return hw;
}

RunRecord run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  const std::vector<RunKey> keys = enumerate_runs(cfg);
  std::vector<RunResult> results(keys.size());

  const std::size_t threads = std::clamp<std::size_t>(options.threads ? options.threads : configured_threads(), 1,
                                                      std::max<std::size_t>(keys.size(), 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      try {
        results[i] = execute_run(keys[i], cfg);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next = keys.size();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  RunRecord record;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t k = 0; k < results[i].returns.size(); ++k)
      record.rows.push_back({keys[i], k + 1, results[i].returns[k]});
    if (results[i].failed) record.failures.push_back({keys[i], results[i].returns.size(), results[i].message});
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  if (options.write_files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    write_text(dir / "returns.csv", returns_csv(record.rows));
  }

  std::ostringstream notes;
  if (cfg.seeds.size() >= 2) {
    record.aggregate = aggregate(record.rows, cfg.smoothing_window);
    if (options.write_files) write_text(dir / "aggregate.csv", aggregate_csv(record.aggregate));
  } else {
    notes << "aggregate=skipped (fewer than two seeds)\n";
  }

  if (cfg.regret && options.write_files) {
    std::string csv = "env,algo,degree,seed,episode,regret\n";
    std::map<EnvironmentId, double> oracle;
    for (EnvironmentId env : cfg.environments) {
      if (env == EnvironmentId::kSyntheticSmooth) {
        notes << "regret_" << to_string(env) << "=skipped (no oracle)\n";
        continue;
      }
      oracle[env] = lqr_oracle(env, cfg);
      notes << "oracle_" << to_string(env) << "=" << format_double(oracle[env]) << "\n";
    }
    std::size_t decreases = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto it = oracle.find(keys[i].environment);
      if (it == oracle.end()) continue;
      const auto curve = regret_curve(results[i].returns, it->second);
      decreases += regret_decreases(curve);
      const std::string prefix = std::string(to_string(keys[i].environment)) + "," +
                                 std::string(to_string(keys[i].algorithm)) + "," + std::to_string(keys[i].degree) +
                                 "," + std::to_string(keys[i].seed) + ",";
      for (std::size_t k = 0; k < curve.size(); ++k)
        csv += prefix + std::to_string(k + 1) + "," + format_double(curve[k]) + "\n";
    }
    notes << "regret_decreases=" << decreases << "\n";
    write_text(dir / "regret.csv", csv);
  }

  if (options.write_files) {
    if (cfg.svg) {
      const std::string source = record.aggregate.empty() ? returns_csv(record.rows) : aggregate_csv(record.aggregate);
      write_text(dir / "returns.svg", render_svg(source));
    }
    std::ostringstream m;
    m << "smoothrl_version=" << kVersion << "\n"
      << "rng=counter-splitmix64\n"
      << "rng_rule_version=" << CounterRng::kRuleVersion << "\n"
      << "master_seed=" << cfg.master_seed << "\n"
      << "config_fnv1a64=" << hex64(fnv1a64(canonical_config_text(cfg))) << "\n"
      << "runs=" << keys.size() << "\n"
      << "failed_runs=" << record.failures.size() << "\n";
    for (const auto& f : record.failures)
      m << "failed=" << f.key.label() << " after " << f.completed_episodes << " episodes: " << f.message << "\n";
    m << notes.str();
    write_text(dir / "manifest.txt", m.str());
  }
  return record;
}

std::vector<AggregateRow> aggregate(const std::vector<ReturnRow>& rows, std::size_t window) {
  using Group = std::tuple<EnvironmentId, AlgorithmId, unsigned>;
  std::map<Group, std::map<std::int64_t, std::vector<std::pair<std::size_t, double>>>> series;
  for (const auto& r : rows)
    series[{r.key.environment, r.key.algorithm, r.key.degree}][r.key.seed].push_back({r.episode, r.value});

  std::vector<AggregateRow> out;
  for (auto& [group, seeds] : series) {
    if (seeds.size() < 2)
      throw InvalidArgument("aggregate: insufficient seeds (" + std::to_string(seeds.size()) + ") for " +
                            std::string(to_string(std::get<0>(group))) + "/" +
                            std::string(to_string(std::get<1>(group))) + "/" + std::to_string(std::get<2>(group)));
    std::map<std::size_t, std::vector<double>> by_episode;
    for (auto& [seed, s] : seeds) {
      std::sort(s.begin(), s.end());
      double running = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        double v = s[i].second;
        if (window > 0) {
          running += v;
          if (i >= window) running -= s[i - window].second;
          v = running / static_cast<double>(std::min(i + 1, window));
        }
        by_episode[s[i].first].push_back(v);
      }
    }
    for (const auto& [episode, values] : by_episode) {
      if (values.size() < 2) continue;
      const double n = static_cast<double>(values.size());
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= n;
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      out.push_back({std::get<0>(group), std::get<1>(group), std::get<2>(group), episode, mean, mean - half,
                     mean + half});
    }
  }
  return out;
}

std::vector<double> regret_curve(const std::vector<double>& returns, double oracle_value) {
  std::vector<double> out(returns.size());
  double total = 0.0;
  for (std::size_t k = 0; k < returns.size(); ++k) out[k] = total += oracle_value - returns[k];
  return out;
}

std::size_t regret_decreases(const std::vector<double>& regret) {
  std::size_t n = 0;
  for (std::size_t k = 1; k < regret.size(); ++k)
    if (regret[k] < regret[k - 1]) ++n;
  return n;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::kInternal, "format_double failed");
  return {buf, p};
}

std::string returns_csv(const std::vector<ReturnRow>& rows) {
  std::string out = "env,algo,degree,seed,episode,return\n";
  for (const auto& r : rows) {
    out += to_string(r.key.environment);
    out += ',';
    out += to_string(r.key.algorithm);
    out += ',' + std::to_string(r.key.degree) + ',' + std::to_string(r.key.seed) + ',' + std::to_string(r.episode) +
           ',' + format_double(r.value) + '\n';
  }
  return out;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "env,algo,degree,episode,mean,ci_lo,ci_hi\n";
  for (const auto& r : rows) {
    out += to_string(r.environment);
    out += ',';
    out += to_string(r.algorithm);
    out += ',' + std::to_string(r.degree) + ',' + std::to_string(r.episode) + ',' + format_double(r.mean) + ',' +
           format_double(r.ci_lo) + ',' + format_double(r.ci_hi) + '\n';
  }
  return out;
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
  std::ostringstream o;
  o << "environment = " << join(cfg.environments) << "\n"
    << "algorithm = " << join(cfg.algorithms) << "\n"
    << "degree = " << (cfg.degrees.empty() ? std::string("auto") : join(cfg.degrees)) << "\n"
    << "nu = " << cfg.smoothness << "\n"
    << "episodes = " << cfg.episodes << "\n"
    << "seeds = " << join(cfg.seeds) << "\n"
    << "master_seed = " << cfg.master_seed << "\n"
    << "c_beta = " << format_double(cfg.c_beta) << "\n"
    << "lambda = " << format_double(cfg.lambda) << "\n"
    << "delta = " << format_double(cfg.delta) << "\n"
    << "action_grid = " << cfg.action_points << "\n"
    << "eleanor_budget = " << cfg.eleanor_budget << "\n"
    << "eleanor_c = " << format_double(cfg.eleanor_base) << "\n"
    << "eleanor_slack = " << format_double(cfg.eleanor_slack) << "\n"
    << "noise_std = " << format_double(cfg.noise_std) << "\n"
    << "reward_noise_std = " << format_double(cfg.reward_noise_std) << "\n"
    << "horizon = " << cfg.horizon << "\n"
    << "smoothing_window = " << cfg.smoothing_window << "\n"
    << "regret = " << (cfg.regret ? "true" : "false") << "\n"
    << "svg = " << (cfg.svg ? "true" : "false") << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace {

struct Series {
  std::vector<double> x, mean, lo, hi;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw InvalidArgument("plot: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string render_svg(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument("plot: empty input");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const bool raw = header == "env,algo,degree,seed,episode,return";
  if (!raw && header != "env,algo,degree,episode,mean,ci_lo,ci_hi")
    throw InvalidArgument("plot: unrecognized header '" + header + "'");

  // panel -> series name -> episode -> values
  std::map<std::string, std::map<std::string, std::map<double, std::vector<double>>>> raw_data;
  std::map<std::string, std::map<std::string, Series>> panels;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != (raw ? 6u : 7u)) throw InvalidArgument("plot: line " + std::to_string(line_no) + " malformed");
    const std::string name = cells[1] + " N=" + cells[2];
    if (raw) {
      raw_data[cells[0]][name][parse_number(cells[4])].push_back(parse_number(cells[5]));
    } else {
      Series& s = panels[cells[0]][name];
      s.x.push_back(parse_number(cells[3]));
      s.mean.push_back(parse_number(cells[4]));
      s.lo.push_back(parse_number(cells[5]));
      s.hi.push_back(parse_number(cells[6]));
    }
  }
  for (auto& [panel, named] : raw_data)
    for (auto& [name, episodes] : named) {
      Series& s = panels[panel][name];
      for (auto& [x, values] : episodes) {
        double m = 0.0;
        for (double v : values) m += v;
        m /= static_cast<double>(values.size());
        s.x.push_back(x);
        s.mean.push_back(m);
        s.lo.push_back(m);
        s.hi.push_back(m);
      }
    }
  if (panels.empty()) throw InvalidArgument("plot: no data rows");

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  const double pw = 420, ph = 300, margin = 50;
  const double width = panels.size() * (pw + margin) + margin;
  const double height = ph + 2 * margin + 20;
  std::ostringstream o;
  o << std::setprecision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::size_t p = 0;
  for (const auto& [panel, named] : panels) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& [name, s] : named)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, s.lo[i]);
        y1 = std::max(y1, s.hi[i]);
      }
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;
    const double left = margin + p * (pw + margin), top = margin;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };
    o << "<g>\n<text x=\"" << left + pw / 2 << "\" y=\"" << top - 15 << "\" text-anchor=\"middle\">" << panel
      << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left << "\" y=\"" << top + ph + 15 << "\">" << x0 << "</text>\n";
    o << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 15 << "\" text-anchor=\"end\">" << x1 << "</text>\n";
    o << "<text x=\"" << left - 4 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << y1 << "</text>\n";
    o << "<text x=\"" << left - 4 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">" << y0 << "</text>\n";
    std::size_t c = 0;
    for (const auto& [name, s] : named) {
      const char* color = kColors[c % std::size(kColors)];
      o << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) o << px(s.x[i]) << "," << py(s.hi[i]) << " ";
      for (std::size_t i = s.x.size(); i-- > 0;) o << px(s.x[i]) << "," << py(s.lo[i]) << " ";
      o << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) o << px(s.x[i]) << "," << py(s.mean[i]) << " ";
      o << "\"/>\n<text x=\"" << left + 8 << "\" y=\"" << top + ph + 30 << "\" dx=\"" << 90 * c
        << "\" fill=\"" << color << "\">" << name << "</text>\n";
      ++c;
    }
    o << "</g>\n";
    ++p;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace smoothrl
