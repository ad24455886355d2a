#pragma once

// Cheating Alice. Any attempt to unveil 0 at Q0 and 1 at Q1 reduces to
// announcing, for every state, one subset guess S_i at P: its computational
// member is the Z record sent to Q0 and its Hadamard member the X record
// sent to Q1. Monte Carlo estimates here are compared against mu^n and the
// Azuma tail.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rqbc/discrimination.hpp"
#include "rqbc/protocol.hpp"
#include "rqbc/random.hpp"

namespace rqbc {

enum class AttackKind { OptimalSubsetGuess, FixedBasisThenFabricate, UniformGuess, CustomPovm };

struct AttackStrategy {
  AttackKind kind = AttackKind::OptimalSubsetGuess;
  /// Measured basis for FixedBasisThenFabricate; the other wing is invented.
  Basis fixed_basis = Basis::Computational;
  /// Required for CustomPovm.
  std::optional<GuessingStrategy> custom;

  static AttackStrategy optimal();
  static AttackStrategy uniform();
  static AttackStrategy fixed_basis_then_fabricate(Basis measured = Basis::Computational);
  static AttackStrategy custom_povm(GuessingStrategy s);
};

std::string to_string(const AttackStrategy& s);

/// Parses optimal | uniform | fixed-z | fixed-x.
AttackStrategy parse_attack(const std::string& name);

struct CheatTrial {
  int n = 0;
  std::vector<int> guesses;     // subset index per state, 1..4
  OutcomeRecord z_outcomes;     // unveiled at Q0 as bit 0
  OutcomeRecord x_outcomes;     // unveiled at Q1 as bit 1
  std::vector<bool> lost;       // declared at P; all false unless a loss model is used
  ConsistencyReport q0;
  ConsistencyReport q1;
  std::size_t correct_guesses = 0;  // non-lost states whose guess holds the prepared state
  std::size_t surviving = 0;        // non-lost states
  bool success_q0 = false;
  bool success_q1 = false;
  bool success = false;             // both wings pass
};

/// One dual unveiling against `prepared`. Success at a wing means the
/// fabricated record passes consistency_check for that wing's bit at
/// `tolerance`.
CheatTrial run_cheat_trial(const AttackStrategy& strategy, const PreparedStates& prepared,
                           double tolerance, RandomSource& rng);

/// Subset guess the strategy announces for one state with the given index.
int draw_subset_guess(const AttackStrategy& strategy, int prepared_index, RandomSource& rng);

struct MonteCarloReport {
  std::string strategy;
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;  // mu^n
  bool bound_violated = false;  // estimate > bound + 4 * standard_error
};

inline constexpr double kSigmaSlack = 4.0;

/// sqrt(p(1-p)/trials)
double binomial_stderr(double p, std::uint64_t trials);

/// Independent trials, trial r using RandomSource::derive(seed, r) for both
/// Bob's preparation and the attack. Requires trials >= 100.
MonteCarloReport estimate_cheat_probability(const AttackStrategy& strategy, int n,
                                            std::uint64_t trials, double tolerance,
                                            std::uint64_t seed);

struct ToleranceCurvePoint {
  double tolerance = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::optional<double> epsilon;      // (1 - t) - mu when positive
  std::optional<double> azuma;        // azuma_bound(n, epsilon)
  bool bound_violated = false;        // estimate > azuma + 4 * stderr
};

/// Success at tolerance t: the fraction of wrong subset guesses among
/// checked positions is at most t. Requires every t in [0, 1).
std::vector<ToleranceCurvePoint> cheat_with_tolerance_curve(const AttackStrategy& strategy, int n,
                                                            const std::vector<double>& tolerances,
                                                            std::uint64_t trials, std::uint64_t seed);

struct AzumaTailPoint {
  double epsilon = 0.0;
  double threshold = 0.0;   // n (mu + eps)
  double tail_fraction = 0.0;
  double standard_error = 0.0;
  double azuma = 0.0;
  bool satisfied = false;   // tail_fraction <= azuma + 4 * stderr
};

struct AzumaTailReport {
  std::string strategy;
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double mean_successes = 0.0;
  std::vector<AzumaTailPoint> points;
};

/// Distribution of per-trial correct-guess counts checked against
/// exp(-n eps^2 / (2 mu^2)) for each eps.
AzumaTailReport azuma_tail_check(const AttackStrategy& strategy, int n,
                                 const std::vector<double>& epsilons, std::uint64_t trials,
                                 std::uint64_t seed);

struct LossAttackReport {
  double loss = 0.0;
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double mean_surviving = 0.0;
  double observed_bound = 0.0;   // mean over trials of mu^M
  double mixture_oracle = 0.0;   // sum_m C(n,m)(1-f)^m f^(n-m) mu^m
  bool bound_violated = false;   // estimate > observed_bound + 4 * stderr
};

/// Optimal-POVM attack where each state is declared lost at P with
/// probability f after its outcome is known. Success: every surviving guess
/// holds its prepared state.
LossAttackReport loss_attack_check(double f, int n, std::uint64_t trials, std::uint64_t seed);

}  // namespace rqbc
