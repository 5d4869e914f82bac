#include "njpc/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "njpc/simulate.hpp"

namespace njpc {

namespace {

// Disjoint stream ranges per use, so replication i of each phase owns its own
// stream whatever thread runs it.
constexpr std::uint64_t kPointStreams = 0;
constexpr std::uint64_t kCiDataStreams = 1ULL << 32;
constexpr std::uint64_t kBootstrapStreams = 2ULL << 32;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) parts.push_back(trim(item));
  if (!s.empty() && s.back() == ',') parts.emplace_back();
  return parts;
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& key) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (text.empty() || in.fail() || !(in >> std::ws).eof())
    throw ConfigError(line, key, "cannot parse '" + text + "' as a number");
  return value;
}

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    static const std::vector<std::string> known = {
        "m", "n", "k", "R", "theta1", "theta2", "n_reps_point", "n_reps_ci",
        "bootstrap_B", "level", "master_seed", "ci_methods", "workers"};
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(line, key, "unknown key");
    if (entries.count(key)) throw ConfigError(line, key, "duplicate key");
    entries[key] = {value, line};
  }

  auto require = [&](const std::string& key) -> const std::pair<std::string, int>& {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError(line, key, "missing required key");
    return it->second;
  };
  auto as_int = [&](const std::string& key) {
    const auto& [text, at] = require(key);
    return parse_number<int>(text, at, key);
  };
  auto as_double = [&](const std::string& key) {
    const auto& [text, at] = require(key);
    return parse_number<double>(text, at, key);
  };

  const int m = as_int("m");
  const int n = as_int("n");
  const int k = as_int("k");
  std::vector<int> withdrawals;
  int r_line = line;
  if (const auto it = entries.find("R"); it != entries.end()) {
    r_line = it->second.second;
    if (!it->second.first.empty())
      for (const auto& item : split_commas(it->second.first))
        withdrawals.push_back(parse_number<int>(item, r_line, "R"));
  }
  std::optional<CensoringScheme> scheme;
  try {
    scheme.emplace(m, n, k, withdrawals);
  } catch (const InfeasibleScheme& e) {
    throw ConfigError(r_line, "R", e.what());
  }

  std::optional<ExpParams> params;
  try {
    params.emplace(as_double("theta1"), as_double("theta2"));
  } catch (const NonPositiveParams& e) {
    throw ConfigError(require("theta1").second, "theta1", e.what());
  }

  StudyConfig config{*scheme, *params};
  auto optional_int = [&](const std::string& key, int& target, int minimum) {
    if (!entries.count(key)) return;
    target = as_int(key);
    if (target < minimum)
      throw ConfigError(entries[key].second, key,
                        "must be at least " + std::to_string(minimum));
  };
  optional_int("n_reps_point", config.n_reps_point, 1);
  optional_int("n_reps_ci", config.n_reps_ci, 1);
  optional_int("bootstrap_B", config.bootstrap_B, 100);
  int workers = 0;
  optional_int("workers", workers, 0);
  config.workers = static_cast<unsigned>(workers);
  if (entries.count("level")) {
    config.level = as_double("level");
    if (!(config.level > 0.5 && config.level < 1.0))
      throw ConfigError(entries["level"].second, "level", "must lie in (0.5, 1)");
  }
  if (entries.count("master_seed")) {
    const auto& [text, at] = entries["master_seed"];
    config.master_seed = parse_number<std::uint64_t>(text, at, "master_seed");
  }
  if (entries.count("ci_methods")) {
    const auto& [text, at] = entries["ci_methods"];
    config.exact = false;
    config.bootstrap = false;
    if (text != "none") {
      for (const auto& item : split_commas(text)) {
        if (item == "exact")
          config.exact = true;
        else if (item == "bootstrap" || item == "boot")
          config.bootstrap = true;
        else
          throw ConfigError(at, "ci_methods", "unknown method '" + item + "'");
      }
    }
  }
  return config;
}

void parallel_for(int count, unsigned workers, const std::function<void(int)>& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(count, 1)));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

StudyReport run_point_study(const StudyConfig& config) {
  const Clock clock;
  const int k = config.scheme.k();
  const NjpcSampler sampler(config.scheme, config.true_params);
  const auto reps = static_cast<std::size_t>(config.n_reps_point);
  std::vector<std::array<double, 2>> estimates(reps);
  std::vector<long> degenerate(reps, 0);

  parallel_for(config.n_reps_point, config.workers, [&](int i) {
    Rng rng(RngSeed{config.master_seed, kPointStreams + static_cast<std::uint64_t>(i)});
    SufficientStats stats = sampler.draw_stats(rng);
    while (stats.failures_pop1 == 0 || stats.failures_pop1 == k) {
      ++degenerate[i];
      stats = sampler.draw_stats(rng);
    }
    const MleEstimate est = fit(stats);
    estimates[i] = {est.theta1_hat, est.theta2_hat};
  });

  StudyReport report;
  std::array<double, 2> ae{0.0, 0.0};
  std::array<double, 2> mse{0.0, 0.0};
  const std::array<double, 2> truth{config.true_params.theta1, config.true_params.theta2};
  for (std::size_t i = 0; i < reps; ++i) {
    for (int p = 0; p < 2; ++p) {
      ae[p] += estimates[i][p];
      mse[p] += (estimates[i][p] - truth[p]) * (estimates[i][p] - truth[p]);
    }
    report.n_degenerate += degenerate[i];
  }
  for (int p = 0; p < 2; ++p) {
    ae[p] /= static_cast<double>(reps);
    mse[p] /= static_cast<double>(reps);
  }
  report.ae = ae;
  report.mse = mse;
  report.n_attempts = static_cast<long>(reps) + report.n_degenerate;
  report.runtime_seconds = clock.seconds();
  return report;
}

namespace {

struct CiReplicate {
  std::array<ConfidenceInterval, 2> exact;
  std::array<ConfidenceInterval, 2> boot;
  long degenerate = 0;
};

MethodSummary summarize(const std::vector<CiReplicate>& reps, bool exact,
                        const std::array<double, 2>& truth) {
  MethodSummary summary;
  for (int p = 0; p < 2; ++p) {
    double length = 0.0;
    int finite = 0;
    int covered = 0;
    for (const auto& rep : reps) {
      const ConfidenceInterval& ci = exact ? rep.exact[p] : rep.boot[p];
      if (ci.open_ended()) {
        ++summary.open_ended[p];
      } else {
        length += ci.length();
        ++finite;
      }
      if (ci.covers(truth[p])) ++covered;
    }
    summary.average_length[p] = finite > 0 ? length / finite : 0.0;
    summary.coverage[p] = static_cast<double>(covered) / static_cast<double>(reps.size());
  }
  return summary;
}

}  // namespace

StudyReport run_ci_study(const StudyConfig& config) {
  const Clock clock;
  const int k = config.scheme.k();
  const NjpcSampler sampler(config.scheme, config.true_params);
  const auto reps = static_cast<std::size_t>(config.n_reps_ci);
  const ConfidenceInterval empty{0.0, 0.0, config.level, CiMethod::exact};
  std::vector<CiReplicate> results(reps, CiReplicate{{empty, empty}, {empty, empty}, 0});

  parallel_for(config.n_reps_ci, config.workers, [&](int i) {
    const auto index = static_cast<std::uint64_t>(i);
    Rng rng(RngSeed{config.master_seed, kCiDataStreams + index});
    CiReplicate& out = results[i];
    SufficientStats stats = sampler.draw_stats(rng);
    while (stats.failures_pop1 == 0 || stats.failures_pop1 == k) {
      ++out.degenerate;
      stats = sampler.draw_stats(rng);
    }
    const MleEstimate est = fit(stats);
    if (config.exact) {
      out.exact[0] = exact_ci(config.scheme, est, Parameter::theta1, config.level);
      out.exact[1] = exact_ci(config.scheme, est, Parameter::theta2, config.level);
    }
    if (config.bootstrap) {
      const BootstrapIntervals b =
          bootstrap_ci(config.scheme, est, config.level, config.bootstrap_B,
                       RngSeed{config.master_seed, kBootstrapStreams + index});
      out.boot = {b.theta1, b.theta2};
    }
  });

  StudyReport report;
  const std::array<double, 2> truth{config.true_params.theta1, config.true_params.theta2};
  if (config.exact) report.exact = summarize(results, true, truth);
  if (config.bootstrap) report.bootstrap = summarize(results, false, truth);
  for (const auto& r : results) report.n_degenerate += r.degenerate;
  report.n_attempts = static_cast<long>(reps) + report.n_degenerate;
  report.runtime_seconds = clock.seconds();
  return report;
}

StudyReport run_study(const StudyConfig& config) {
  const Clock clock;
  StudyReport report = run_point_study(config);
  if (config.exact || config.bootstrap) {
    const StudyReport ci = run_ci_study(config);
    report.exact = ci.exact;
    report.bootstrap = ci.bootstrap;
    report.n_degenerate += ci.n_degenerate;
    report.n_attempts += ci.n_attempts;
  }
  report.runtime_seconds = clock.seconds();
  return report;
}

void write_report_csv(std::ostream& out, const StudyReport& report, int precision) {
  std::ostringstream buf;
  buf.precision(precision);
  buf << "param,ae,mse,al_exact,cp_exact,al_boot,cp_boot,n_degenerate\n";
  auto field = [&](bool present, double value) {
    buf << ',';
    if (present)
      buf << value;
    else
      buf << "NA";
  };
  for (int p = 0; p < 2; ++p) {
    buf << (p == 0 ? "theta1" : "theta2");
    field(report.ae.has_value(), report.ae ? (*report.ae)[p] : 0.0);
    field(report.mse.has_value(), report.mse ? (*report.mse)[p] : 0.0);
    field(report.exact.has_value(), report.exact ? report.exact->average_length[p] : 0.0);
    field(report.exact.has_value(), report.exact ? report.exact->coverage[p] : 0.0);
    field(report.bootstrap.has_value(),
          report.bootstrap ? report.bootstrap->average_length[p] : 0.0);
    field(report.bootstrap.has_value(), report.bootstrap ? report.bootstrap->coverage[p] : 0.0);
    buf << ',' << report.n_degenerate << '\n';
  }
  out << buf.str();
}

}  // namespace njpc
