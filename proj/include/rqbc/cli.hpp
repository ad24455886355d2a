#pragma once

// Command implementations behind the `rqbc` executable. Each command builds
// a Report; run_cli parses arguments, renders the report and maps the
// outcome onto the exit code contract (0 pass, 1 check failed, 2 usage).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rqbc/protocol.hpp"
#include "rqbc/report.hpp"

namespace rqbc {

inline constexpr std::uint64_t kDefaultSeed = 2012;
inline constexpr std::uint64_t kDefaultTrials = 100000;

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct VerifyPovmOptions {
  double perturb = 0.0;  // offset added to theta_1
  double tol = 1e-10;
};
Report cmd_verify_povm(const VerifyPovmOptions& opt);

struct SecurityTableOptions {
  int n_max = 10;
  std::vector<std::string> azuma_pairs;  // "N:eps"
};
Report cmd_security_table(const SecurityTableOptions& opt);

struct AzumaTableOptions {
  std::vector<int> ns = {100, 200, 500, 1000};
  std::vector<double> epsilons = {0.02, 0.05, 0.1};
  bool empirical = false;  // add Monte Carlo tail rows for the optimal attack
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
};
Report cmd_azuma_table(const AzumaTableOptions& opt);

Report cmd_honest_run(const RunConfig& config);

struct CheatRunOptions {
  std::string strategy = "optimal";
  int n = 1;
  std::uint64_t trials = kDefaultTrials;
  double tolerance = 0.0;
  std::vector<double> tolerances;  // non-empty: emit the tolerance curve
  std::uint64_t seed = kDefaultSeed;
};
Report cmd_cheat_run(const CheatRunOptions& opt);

struct LossCheckOptions {
  double loss = 0.5;
  int n = 20;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
};
Report cmd_loss_check(const LossCheckOptions& opt);

struct CollectiveCheckOptions {
  double tol = 1e-10;
  bool corrupt = false;  // second factor replaced by "always guess S_1"
};
Report cmd_collective_check(const CollectiveCheckOptions& opt);

struct Lemma2Options {
  int n = 1;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
};
Report cmd_lemma2_demo(const Lemma2Options& opt);

/// Full command line, args[0] being the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rqbc
