#include "rqbc/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "rqbc/adversary.hpp"
#include "rqbc/discrimination.hpp"
#include "rqbc/errors.hpp"

namespace rqbc {

namespace {

constexpr double kGammaValue = (1.0 + 1.0 / std::numbers::sqrt2) / 8.0;

ReportRow& check(ReportRow& row, std::optional<double> reference, bool pass) {
  row.reference = reference;
  row.pass = pass;
  return row;
}

ReportRow& stochastic(ReportRow& row, std::uint64_t trials, double standard_error) {
  row.trials = trials;
  row.standard_error = standard_error;
  return row;
}

void add_constants(Report& r) {
  check(r.add("mu", kMu), 0.5 * (1.0 + 1.0 / std::numbers::sqrt2), true);
  check(r.add("noise_threshold", kNoiseThreshold), 1.0 - kMu,
        std::abs(kNoiseThreshold - (1.0 - kMu)) <= 1e-15);
}

}  // namespace

Report cmd_verify_povm(const VerifyPovmOptions& opt) {
  Report r;
  r.command = "verify-povm";
  const auto elements = optimal_povm_elements(opt.perturb);

  Operator total = Operator::zero(2);
  for (const auto& e : elements) total += e;
  const double completeness = total.max_abs_diff(Operator::identity(2));
  check(r.add("completeness_max_deviation", completeness), 0.0, completeness <= 1e-10);

  bool psd = true;
  for (const auto& e : elements) psd = psd && min_eigenvalue(e) >= -kPsdTol;
  check(r.add_text("elements_psd", psd ? "yes" : "no"), std::nullopt, psd);

  const Operator gamma = gamma_operator(elements);
  const double gamma_dev = gamma.max_abs_diff(kGammaValue * Operator::identity(2));
  check(r.add("gamma_00", gamma(0, 0).real()), kGammaValue, gamma_dev <= 1e-12);
  check(r.add("gamma_max_deviation", gamma_dev), 0.0, gamma_dev <= 1e-12);

  try {
    const auto cert = holevo_certificate(elements, opt.tol);
    for (std::size_t i = 0; i < cert.min_eigenvalues.size(); ++i) {
      check(r.add("holevo_min_eigenvalue_" + std::to_string(i + 1), cert.min_eigenvalues[i]), 0.0,
            cert.min_eigenvalues[i] >= -opt.tol);
    }
  } catch (const InconsistencyError& e) {
    check(r.add_text("holevo_certificate", e.what()), std::nullopt, false);
  }

  const double win = win_probability(elements);
  check(r.add("win_probability", win), kMu, std::abs(win - kMu) <= 1e-12);
  const double twice_trace = 2.0 * gamma.trace().real();
  check(r.add("two_trace_gamma", twice_trace), win, std::abs(twice_trace - win) <= 1e-12);
  add_constants(r);
  return r;
}

Report cmd_security_table(const SecurityTableOptions& opt) {
  if (opt.n_max < 1) throw DomainError("security-table: --n-max must be at least 1");
  Report r;
  r.command = "security-table";
  double previous = 1.0;
  for (int n = 1; n <= opt.n_max; ++n) {
    const double b = security_bound(n);
    check(r.add("mu^" + std::to_string(n), b), std::nullopt, b < previous);
    previous = b;
  }
  for (const auto& pair : opt.azuma_pairs) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos) throw DomainError("security-table: azuma pair '" + pair + "' is not N:eps");
    int n = 0;
    double eps = 0.0;
    try {
      n = std::stoi(pair.substr(0, colon));
      eps = std::stod(pair.substr(colon + 1));
    } catch (const std::exception&) {
      throw DomainError("security-table: azuma pair '" + pair + "' is not N:eps");
    }
    const double a = azuma_bound(n, eps);
    check(r.add("azuma(" + std::to_string(n) + "," + format_number(eps) + ")", a), std::nullopt,
          a > 0.0 && a <= 1.0);
  }
  add_constants(r);
  return r;
}

Report cmd_azuma_table(const AzumaTableOptions& opt) {
  Report r;
  r.command = "azuma-table";
  r.seed = opt.seed;
  for (int n : opt.ns) {
    for (double eps : opt.epsilons) {
      const double a = azuma_bound(n, eps);
      check(r.add("azuma(" + std::to_string(n) + "," + format_number(eps) + ")", a), std::nullopt,
            a > 0.0 && a <= 1.0);
    }
  }
  if (opt.empirical) {
    for (int n : opt.ns) {
      const auto rep = azuma_tail_check(AttackStrategy::optimal(), n, opt.epsilons, opt.trials, opt.seed);
      for (const auto& p : rep.points) {
        auto& row = r.add("tail(" + std::to_string(n) + "," + format_number(p.epsilon) + ")", p.tail_fraction);
        stochastic(check(row, p.azuma, p.satisfied), opt.trials, p.standard_error);
      }
    }
  }
  add_constants(r);
  return r;
}

Report cmd_honest_run(const RunConfig& config) {
  config.validate();
  RandomSource rng(config.seed);
  const Transcript t = run_honest(config, rng);

  Report r;
  r.command = "honest-run";
  r.seed = config.seed;
  for (const auto& e : t.events) {
    r.transcript.push_back(e.message.sender + ' ' + e.message.receiver + ' ' + to_string(e.emitted_at) + ' ' +
                           to_string(e.received_at) + ' ' + payload_digest(e.message.payload) +
                           (e.result.delivered ? "" : " REFUSED"));
  }
  check(r.add_text("verdict", to_string(t.verdict.kind)), std::nullopt, t.verdict.accepted());
  r.add("n", config.n);
  r.add("bit", config.bit);
  r.add("checked_positions", static_cast<double>(t.verdict.checked_positions));
  r.add("error_fraction_q0", t.verdict.error_fraction_q0).reference = config.tolerance;
  r.add("error_fraction_q1", t.verdict.error_fraction_q1).reference = config.tolerance;
  r.add("loss_fraction", t.verdict.loss_fraction).reference = config.max_loss;
  r.add("wing_mismatches", static_cast<double>(t.verdict.mismatch_positions.size()));
  bool causal = true;
  for (const auto& e : t.events) causal = causal && causally_reaches(e.emitted_at, e.received_at);
  check(r.add("messages", static_cast<double>(t.events.size())), std::nullopt, causal);
  return r;
}

Report cmd_cheat_run(const CheatRunOptions& opt) {
  const AttackStrategy strategy = parse_attack(opt.strategy);
  Report r;
  r.command = "cheat-run";
  r.seed = opt.seed;
  const auto rep = estimate_cheat_probability(strategy, opt.n, opt.trials, opt.tolerance, opt.seed);
  r.add_text("strategy", rep.strategy);
  r.add("n", opt.n);
  r.add("tolerance", opt.tolerance);
  stochastic(check(r.add("cheat_probability", rep.estimate), rep.bound, !rep.bound_violated), rep.trials,
             rep.standard_error);
  r.add("bound_mu^n", rep.bound);
  if (!opt.tolerances.empty()) {
    const auto curve = cheat_with_tolerance_curve(strategy, opt.n, opt.tolerances, opt.trials, opt.seed);
    for (const auto& p : curve) {
      auto& row = r.add("cheat_probability(t=" + format_number(p.tolerance) + ")", p.estimate);
      stochastic(row, opt.trials, p.standard_error);
      if (p.azuma) check(row, *p.azuma, !p.bound_violated);
    }
  }
  return r;
}

Report cmd_loss_check(const LossCheckOptions& opt) {
  const auto rep = loss_attack_check(opt.loss, opt.n, opt.trials, opt.seed);
  Report r;
  r.command = "loss-check";
  r.seed = opt.seed;
  r.add("loss", rep.loss);
  r.add("n", rep.n);
  r.add("mean_surviving", rep.mean_surviving);
  stochastic(check(r.add("cheat_probability", rep.estimate), rep.observed_bound, !rep.bound_violated),
             rep.trials, rep.standard_error);
  const bool matches = std::abs(rep.estimate - rep.mixture_oracle) <= kSigmaSlack * rep.standard_error;
  stochastic(check(r.add("binomial_mixture_E[mu^M]", rep.mixture_oracle), rep.estimate, matches), rep.trials,
             rep.standard_error);
  return r;
}

Report cmd_collective_check(const CollectiveCheckOptions& opt) {
  const GuessingStrategy optimal = optimal_povm();
  const auto cc = opt.corrupt ? collective_certificate(optimal, constant_guess(1), opt.tol)
                              : collective_certificate(optimal, optimal, opt.tol);
  constexpr double kGamma2 = (1.0 + 1.0 / std::numbers::sqrt2) * (1.0 + 1.0 / std::numbers::sqrt2) / 64.0;
  Report r;
  r.command = "collective-check";
  const double dev = cc.gamma.max_abs_diff(kGamma2 * Operator::identity(4));
  check(r.add("gamma2_00", cc.gamma(0, 0).real()), kGamma2, dev <= 1e-12);
  check(r.add("gamma2_max_deviation", dev), 0.0, dev <= 1e-12);
  check(r.add("worst_min_eigenvalue", cc.certificate.worst_eigenvalue), 0.0, cc.certificate.passed);
  r.add("worst_hypothesis", cc.certificate.worst_index);
  check(r.add("win_probability_2", cc.win_probability), kMu * kMu,
        std::abs(cc.win_probability - kMu * kMu) <= 1e-12);
  return r;
}

Report cmd_lemma2_demo(const Lemma2Options& opt) {
  if (opt.trials < 1) throw DomainError("lemma2-demo: --trials must be positive");
  const auto s = run_lemma2_demo(opt.n, opt.trials, opt.seed);
  Report r;
  r.command = "lemma2-demo";
  r.seed = opt.seed;
  r.add("n", opt.n);
  auto& freq = r.add("conditional_success", s.success_frequency);
  stochastic(check(freq, kMu, s.success_frequency <= kMu + kSigmaSlack * s.standard_error), s.runs,
             s.standard_error);
  const double accept_ref = opt.n == 1 ? 1.0 : std::pow(kMu, opt.n - 1);
  r.add("acceptance_probability", s.acceptance_probability).reference = accept_ref;
  r.add("mean_iterations", s.mean_iterations).reference = 1.0 / accept_ref;
  return r;
}

namespace {

struct CommonOptions {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t trials = kDefaultTrials;
  std::string output;
  std::string format = "text";
};

void add_common(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sub->add_option("--trials", c.trials, "Monte Carlo trials / runs")->capture_default_str();
  sub->add_option("--output", c.output, "Write the report to this file instead of stdout");
  sub->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relativistic quantum bit commitment: protocol simulator and security checks", "rqbc"};
  app.set_config("--config", "", "Read options from an INI/TOML file ([subcommand] sections)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  CommonOptions common;
  std::function<Report()> action;

  VerifyPovmOptions verify;
  auto* verify_cmd = app.add_subcommand("verify-povm", "Certify the optimal subset-guessing POVM");
  verify_cmd->add_option("--perturb", verify.perturb, "Offset added to theta_1 (debug)");
  verify_cmd->add_option("--tol", verify.tol, "Eigenvalue tolerance")->capture_default_str();
  add_common(verify_cmd, common);
  verify_cmd->callback([&] { action = [&] { return cmd_verify_povm(verify); }; });

  SecurityTableOptions table;
  auto* table_cmd = app.add_subcommand("security-table", "mu^N for N = 1..n_max, plus Azuma rows");
  table_cmd->add_option("--n-max", table.n_max)->capture_default_str();
  table_cmd->add_option("--azuma", table.azuma_pairs, "Azuma rows as N:eps")->delimiter(',');
  add_common(table_cmd, common);
  table_cmd->callback([&] { action = [&] { return cmd_security_table(table); }; });

  AzumaTableOptions azuma;
  auto* azuma_cmd = app.add_subcommand("azuma-table", "Azuma-Hoeffding tail bounds over an (N, eps) grid");
  azuma_cmd->add_option("--n", azuma.ns, "State counts")->delimiter(',')->capture_default_str();
  azuma_cmd->add_option("--eps", azuma.epsilons, "Deviations")->delimiter(',')->capture_default_str();
  azuma_cmd->add_flag("--empirical", azuma.empirical, "Add Monte Carlo tail rows for the optimal attack");
  add_common(azuma_cmd, common);
  azuma_cmd->callback([&] {
    action = [&] {
      azuma.trials = common.trials;
      azuma.seed = common.seed;
      return cmd_azuma_table(azuma);
    };
  });

  RunConfig honest;
  auto* honest_cmd = app.add_subcommand("honest-run", "One honest commit/unveil run");
  honest_cmd->add_option("--n", honest.n)->capture_default_str();
  honest_cmd->add_option("--bit", honest.bit)->capture_default_str();
  honest_cmd->add_option("--separation", honest.separation)->capture_default_str();
  honest_cmd->add_option("--noise", honest.noise, "Depolarizing parameter p")->capture_default_str();
  honest_cmd->add_option("--loss", honest.loss, "Per-state loss probability f")->capture_default_str();
  honest_cmd->add_option("--tolerance", honest.tolerance)->capture_default_str();
  honest_cmd->add_option("--max-loss", honest.max_loss)->capture_default_str();
  add_common(honest_cmd, common);
  honest_cmd->callback([&] {
    action = [&] {
      honest.seed = common.seed;
      return cmd_honest_run(honest);
    };
  });

  CheatRunOptions cheat;
  auto* cheat_cmd = app.add_subcommand("cheat-run", "Monte Carlo estimate of a cheating strategy");
  cheat_cmd->add_option("--strategy", cheat.strategy)
      ->check(CLI::IsMember({"optimal", "uniform", "fixed-z", "fixed-x"}))
      ->capture_default_str();
  cheat_cmd->add_option("--n", cheat.n)->capture_default_str();
  cheat_cmd->add_option("--tolerance", cheat.tolerance)->capture_default_str();
  cheat_cmd->add_option("--tolerances", cheat.tolerances, "Also report the tolerance curve")->delimiter(',');
  add_common(cheat_cmd, common);
  cheat_cmd->callback([&] {
    action = [&] {
      cheat.trials = common.trials;
      cheat.seed = common.seed;
      return cmd_cheat_run(cheat);
    };
  });

  LossCheckOptions loss;
  auto* loss_cmd = app.add_subcommand("loss-check", "Optimal attack with declared losses");
  loss_cmd->add_option("--loss", loss.loss)->capture_default_str();
  loss_cmd->add_option("--n", loss.n)->capture_default_str();
  add_common(loss_cmd, common);
  loss_cmd->callback([&] {
    action = [&] {
      loss.trials = common.trials;
      loss.seed = common.seed;
      return cmd_loss_check(loss);
    };
  });

  CollectiveCheckOptions collective;
  auto* collective_cmd = app.add_subcommand("collective-check", "Two-state product POVM optimality");
  collective_cmd->add_option("--tol", collective.tol)->capture_default_str();
  collective_cmd->add_flag("--corrupt", collective.corrupt, "Replace one factor by always-S_1");
  add_common(collective_cmd, common);
  collective_cmd->callback([&] { action = [&] { return cmd_collective_check(collective); }; });

  Lemma2Options lemma2;
  auto* lemma2_cmd = app.add_subcommand("lemma2-demo", "Teleportation-based rejection-sampling reduction");
  lemma2_cmd->add_option("--n", lemma2.n)->check(CLI::Range(1, 3))->capture_default_str();
  add_common(lemma2_cmd, common);
  lemma2_cmd->callback([&] {
    action = [&] {
      lemma2.trials = common.trials;
      lemma2.seed = common.seed;
      return cmd_lemma2_demo(lemma2);
    };
  });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Report report;
  try {
    report = action();
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  report.seed = common.seed;

  const std::string rendered = render(report, parse_format(common.format));
  if (common.output.empty()) {
    out << rendered;
  } else {
    std::ofstream file(common.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << common.output << '\n';
      return kExitUsage;
    }
    file << rendered;
  }
  return report.all_passed() ? kExitPass : kExitCheckFailed;
}

}  // namespace rqbc
