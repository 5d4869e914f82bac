// Command-line front end. Every subcommand parses flags, calls the library
// and formats the result; no numerics live here.
//
// Exit codes: 0 success, 2 validation or configuration error,
// 3 inference degeneracy (MLE does not exist), 1 anything else.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "njpc/core.hpp"
#include "njpc/exactdist.hpp"
#include "njpc/inference.hpp"
#include "njpc/sample_io.hpp"
#include "njpc/simulate.hpp"
#include "njpc/study.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitDegenerate = 3;

struct SchemeFlags {
  int m = 0;
  int n = 0;
  int k = 0;
  std::string withdrawals;

  void attach(CLI::App* cmd) {
    cmd->add_option("--m", m, "Pop-1 sample size")->required();
    cmd->add_option("--n", n, "Pop-2 sample size")->required();
    cmd->add_option("--k", k, "number of observed failures")->required();
    cmd->add_option("--R", withdrawals, "withdrawals R_1..R_{k-1}, comma-separated");
  }

  njpc::CensoringScheme build() const {
    std::vector<int> r;
    std::stringstream in(withdrawals);
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        std::size_t used = 0;
        r.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw njpc::InfeasibleScheme("--R: cannot parse '" + item + "' as an integer");
      }
    }
    return njpc::CensoringScheme(m, n, k, std::move(r));
  }
};

struct ParamFlags {
  double theta1 = 0.0;
  double theta2 = 0.0;

  void attach(CLI::App* cmd, bool required = true) {
    auto* a = cmd->add_option("--theta1", theta1, "Pop-1 exponential mean");
    auto* b = cmd->add_option("--theta2", theta2, "Pop-2 exponential mean");
    if (required) {
      a->required();
      b->required();
    }
  }
  njpc::ExpParams build() const { return njpc::ExpParams(theta1, theta2); }
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw njpc::InvalidArgument("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string format_number(double value, int precision) {
  std::ostringstream out;
  out.precision(precision);
  out << value;
  return out.str();
}

void print_interval(std::ostream& out, njpc::Parameter which,
                    const njpc::ConfidenceInterval& ci, int precision) {
  out << "ci " << njpc::to_string(which) << ' ' << njpc::to_string(ci.method) << ' '
      << format_number(ci.level, precision) << ' ' << format_number(ci.lower, precision)
      << ' ' << (ci.upper ? format_number(*ci.upper, precision) : std::string("open"))
      << '\n';
}

void print_intervals(std::ostream& out, const njpc::CensoringScheme& scheme,
                     const njpc::MleEstimate& est, const std::string& method,
                     double level, int boot_b, std::uint64_t seed, int precision) {
  using njpc::Parameter;
  if (method == "exact" || method == "both") {
    for (Parameter p : {Parameter::theta1, Parameter::theta2}) {
      const auto ci = njpc::exact_ci(scheme, est, p, level);
      print_interval(out, p, ci, precision);
      if (ci.open_ended())
        out << "note " << njpc::to_string(p)
            << " exact upper endpoint not found: tail probability stays flat\n";
    }
  }
  if (method == "boot" || method == "both") {
    const auto boot = njpc::bootstrap_ci(scheme, est, level, boot_b, njpc::RngSeed{seed, 0});
    print_interval(out, Parameter::theta1, boot.theta1, precision);
    print_interval(out, Parameter::theta2, boot.theta2, precision);
    out << "bootstrap_rejected " << boot.rejected << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample joint progressive type-II censoring: simulation and exact inference"};
  app.require_subcommand(1);
  app.fallthrough();

  int precision = 6;
  app.add_option("--precision", precision, "significant digits in printed numbers")
      ->check(CLI::Range(1, 17));

  // simulate
  SchemeFlags sim_scheme;
  ParamFlags sim_params;
  std::uint64_t sim_seed = 0;
  std::uint64_t sim_stream = 0;
  std::string sim_out;
  std::string sim_pop1;
  std::string sim_pop2;
  auto* sim = app.add_subcommand("simulate", "draw a censored sample, writes CSV i,w,z");
  sim_scheme.attach(sim);
  sim_params.attach(sim, false);
  sim->add_option("--seed", sim_seed, "master seed")->required();
  sim->add_option("--stream", sim_stream, "stream id");
  sim->add_option("--out", sim_out, "output path (default stdout)");
  auto* pop1_opt = sim->add_option("--pop1", sim_pop1,
                                   "complete Pop-1 lifetimes, one per line; censors this data instead of drawing");
  auto* pop2_opt = sim->add_option("--pop2", sim_pop2, "complete Pop-2 lifetimes, one per line");
  pop1_opt->needs(pop2_opt);
  pop2_opt->needs(pop1_opt);

  // fit / ci
  SchemeFlags fit_scheme;
  std::string fit_data;
  std::string fit_method;
  double fit_level = 0.9;
  int fit_boot_b = 1000;
  std::uint64_t fit_seed = 0;
  auto* fit = app.add_subcommand("fit", "MLEs and sufficient statistics of a sample file");
  fit_scheme.attach(fit);
  fit->add_option("--data", fit_data, "sample CSV i,w,z")->required();
  fit->add_option("--method", fit_method, "append intervals: exact, boot or both")
      ->check(CLI::IsMember({"exact", "boot", "both"}));
  fit->add_option("--level", fit_level, "confidence level");
  fit->add_option("--boot-B", fit_boot_b, "bootstrap resamples");
  fit->add_option("--seed", fit_seed, "bootstrap seed");

  SchemeFlags ci_scheme;
  std::string ci_data;
  std::string ci_method = "both";
  double ci_level = 0.9;
  int ci_boot_b = 1000;
  std::uint64_t ci_seed = 0;
  auto* ci = app.add_subcommand("ci", "confidence intervals for a sample file");
  ci_scheme.attach(ci);
  ci->add_option("--data", ci_data, "sample CSV i,w,z")->required();
  ci->add_option("--method", ci_method, "exact, boot or both")
      ->check(CLI::IsMember({"exact", "boot", "both"}));
  ci->add_option("--level", ci_level, "confidence level");
  ci->add_option("--boot-B", ci_boot_b, "bootstrap resamples");
  ci->add_option("--seed", ci_seed, "bootstrap seed");

  // pdf
  SchemeFlags pdf_scheme;
  ParamFlags pdf_params;
  std::string pdf_which = "theta1";
  int pdf_points = 401;
  std::string pdf_out;
  auto* pdf = app.add_subcommand("pdf", "exact density curve of an MLE, two columns t density");
  pdf_scheme.attach(pdf);
  pdf_params.attach(pdf);
  pdf->add_option("--which", pdf_which, "theta1 or theta2")
      ->check(CLI::IsMember({"theta1", "theta2"}));
  pdf->add_option("--points", pdf_points, "grid points")->check(CLI::Range(2, 1000000));
  pdf->add_option("--out", pdf_out, "output path (default stdout)");

  // duration
  SchemeFlags dur_scheme;
  ParamFlags dur_params;
  auto* dur = app.add_subcommand("duration", "expected duration E(W_k) of the test");
  dur_scheme.attach(dur);
  dur_params.attach(dur);

  // study
  std::string study_config;
  std::string study_out;
  int study_workers = -1;
  auto* study = app.add_subcommand("study", "Monte Carlo study from a key = value config");
  study->add_option("--config", study_config, "config path")->required();
  study->add_option("--out", study_out, "CSV output path (default stdout)");
  study->add_option("--workers", study_workers, "worker threads (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*sim) {
      const auto scheme = sim_scheme.build();
      njpc::NjpcSample sample;
      if (!sim_pop1.empty()) {
        const auto x = njpc::read_lifetimes_file(sim_pop1);
        const auto y = njpc::read_lifetimes_file(sim_pop2);
        sample = njpc::apply_scheme(x, y, scheme, njpc::RngSeed{sim_seed, sim_stream});
      } else {
        if (sim->count("--theta1") == 0 || sim->count("--theta2") == 0)
          throw njpc::InvalidArgument("--theta1 and --theta2 are required unless --pop1/--pop2 are given");
        sample = njpc::generate(scheme, sim_params.build(), njpc::RngSeed{sim_seed, sim_stream});
      }
      Output out(sim_out);
      njpc::write_sample_csv(out.stream(), sample, precision);
    } else if (*fit || *ci) {
      const bool is_fit = static_cast<bool>(*fit);
      const auto scheme = (is_fit ? fit_scheme : ci_scheme).build();
      const auto sample = njpc::read_sample_file(is_fit ? fit_data : ci_data);
      const auto est = njpc::fit(scheme, sample);
      if (is_fit) {
        std::cout << "m_k " << est.stats.failures_pop1 << '\n'
                  << "n_k " << est.stats.failures_pop2 << '\n'
                  << "A1 " << format_number(est.stats.ttt_pop1, precision) << '\n'
                  << "A2 " << format_number(est.stats.ttt_pop2, precision) << '\n'
                  << "theta1_hat " << format_number(est.theta1_hat, precision) << '\n'
                  << "theta2_hat " << format_number(est.theta2_hat, precision) << '\n';
        if (!fit_method.empty())
          print_intervals(std::cout, scheme, est, fit_method, fit_level, fit_boot_b,
                          fit_seed, precision);
      } else {
        print_intervals(std::cout, scheme, est, ci_method, ci_level, ci_boot_b, ci_seed,
                        precision);
      }
    } else if (*pdf) {
      const auto which =
          pdf_which == "theta1" ? njpc::Parameter::theta1 : njpc::Parameter::theta2;
      const auto mixture = njpc::mle_mixture(pdf_scheme.build(), pdf_params.build(), which);
      Output out(pdf_out);
      std::ostringstream buf;
      buf.precision(precision);
      for (const auto& [t, density] : njpc::pdf_curve(mixture, pdf_points))
        buf << t << ' ' << density << '\n';
      out.stream() << buf.str();
    } else if (*dur) {
      std::cout << format_number(
                       njpc::expected_duration(dur_scheme.build(), dur_params.build()),
                       precision)
                << '\n';
    } else if (*study) {
      std::ifstream in(study_config);
      if (!in) throw njpc::ConfigError(0, "", "cannot open '" + study_config + "'");
      njpc::StudyConfig config = njpc::parse_study_config(in);
      if (study_workers >= 0) config.workers = static_cast<unsigned>(study_workers);
      const auto report = njpc::run_study(config);
      Output out(study_out);
      njpc::write_report_csv(out.stream(), report, precision);
      if (report.exact)
        std::cerr << "open_ended_exact theta1 " << report.exact->open_ended[0] << " theta2 "
                  << report.exact->open_ended[1] << '\n';
      std::cerr << "runtime_seconds " << format_number(report.runtime_seconds, 4) << '\n';
    }
  } catch (const njpc::MleDoesNotExist& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const njpc::DegenerateConditioning& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const njpc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
