#pragma once

// The subset-guessing game on a single BB84 state and the analytic security
// quantities derived from it.
//
// Guess S_i (i = 1..4) names the pair {|e_i>, |e_{i+1}>} with indices taken
// mod 4, so every guess holds one computational-basis state and one
// Hadamard-basis state. A guessing strategy is a 4-outcome qubit POVM whose
// element k announces S_k.

#include <array>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "rqbc/qcore.hpp"
#include "rqbc/random.hpp"

namespace rqbc {

/// Per-state cheating ceiling (1 + 1/sqrt2) / 2.
inline constexpr double kMu = 0.5 * (1.0 + 1.0 / std::numbers::sqrt2);
/// Largest total error rate under which the noisy bound still bites.
inline constexpr double kNoiseThreshold = 0.5 - 1.0 / (2.0 * std::numbers::sqrt2);

struct SecurityConstants {
  double mu = kMu;
  double noise_threshold = kNoiseThreshold;
};

/// Wraps a 1-based BB84 index into 1..4 (so 5 -> 1, 0 -> 4).
int wrap_index(int index);

class SubsetGuess {
 public:
  explicit SubsetGuess(int index);

  int index() const { return index_; }
  /// The two member indices {i, i+1}.
  std::array<int, 2> members() const { return {index_, wrap_index(index_ + 1)}; }
  bool contains(int bb84_index) const;
  /// Member in {|0>, |1>}: 1 or 3.
  int computational_member() const;
  /// Member in {|+>, |->}: 2 or 4.
  int hadamard_member() const;

  friend bool operator==(const SubsetGuess&, const SubsetGuess&) = default;

 private:
  int index_;
};

/// Guess containing both the given computational (1/3) and Hadamard (2/4)
/// states. Every such pair is exactly one S_i.
SubsetGuess subset_from_members(int computational, int hadamard);

class GuessingStrategy {
 public:
  /// Requires a valid qubit POVM with exactly four elements.
  explicit GuessingStrategy(Povm povm);

  const Povm& povm() const { return povm_; }
  /// Element announcing S_k, k = 1..4 (wrapping).
  const Operator& element(int k) const;

 private:
  Povm povm_;
};

/// rho_i = |e_i><e_i| for i in 1..4, wrapping.
const Operator& bb84_density(int index);

/// Elements (1/2)|phi_i><phi_i|, phi_i = cos(t_i)|0> + sin(t_i)|1>,
/// t_i = i*pi/4 - pi/8. `theta1_offset` shifts t_1 only and exists to
/// exercise the failure paths; the result is then no longer a POVM.
std::vector<Operator> optimal_povm_elements(double theta1_offset = 0.0);

GuessingStrategy optimal_povm();

/// Pure strategy "always announce S_k".
GuessingStrategy constant_guess(int k);

/// {I/4, I/4, I/4, I/4}
GuessingStrategy uniform_guess_strategy();

/// Four elements drawn as G^dagger G and normalised to sum to I.
GuessingStrategy random_strategy(RandomSource& rng);

/// (1/4) sum_i Tr(rho_i (pi_i + pi_{i-1})) with uniform priors.
double win_probability(const GuessingStrategy& strategy);
double win_probability(std::span<const Operator> elements);

/// Gamma = (1/4) sum_i (rho_i/2 + rho_{i+1}/2) pi_i, left-multiplied exactly
/// as written; not symmetrised.
Operator gamma_operator(const GuessingStrategy& strategy);
Operator gamma_operator(std::span<const Operator> elements);

struct CertificateResult {
  bool passed = false;
  double worst_eigenvalue = 0.0;
  int worst_index = 0;                  // 1-based hypothesis index
  std::vector<double> min_eigenvalues;  // one per hypothesis
};

/// Minimum-error optimality check: passes iff for every i,
/// min eig(Gamma - (rho_i + rho_{i+1}) / 8) >= -tol. Throws
/// InconsistencyError if Gamma is not Hermitian within 1e-10.
CertificateResult holevo_certificate(const GuessingStrategy& strategy, double tol);
CertificateResult holevo_certificate(std::span<const Operator> elements, double tol);

/// Tr(A (rho_i + rho_{i+1}) / 4) / (Tr(A) / 2): the probability that guess
/// S_i is right given outcome operator A.
double max_confidence_ratio(const Operator& a, int i);

/// mu^n by repeated multiplication.
double security_bound(int n);

/// exp(-n eps^2 / (2 mu^2))
double azuma_bound(int n, double eps);

struct CollectiveCertificate {
  CertificateResult certificate;
  Operator gamma;           // Gamma_2 on dim 4
  double win_probability;   // 2 * 2 * Tr(Gamma_2)
};

/// Two-state collective check for the product POVM {pi_i (x) pi'_j} against
/// the 16 equiprobable hypotheses (rho_i+rho_{i+1})/2 (x) (rho_j+rho_{j+1})/2.
CollectiveCertificate collective_certificate(const GuessingStrategy& first,
                                             const GuessingStrategy& second, double tol);

/// collective_certificate(optimal_povm(), optimal_povm(), tol)
CollectiveCertificate collective_certificate_n2(double tol);

struct Lemma2Run {
  std::uint64_t iterations = 0;  // singlet preparations until acceptance
  bool success = false;          // final single-state guess contained |psi>
  int unknown_index = 0;         // the unknown BB84 state
  int guess_index = 0;           // recovered guess for it
};

inline constexpr std::uint64_t kLemma2IterationCap = 1'000'000;

/// One run of the rejection-sampling reduction with the product optimal
/// strategy on n - 1 known BB84 states plus one half of a singlet. A run is
/// accepted once every known-state guess contains its known state; then a
/// fresh unknown BB84 state is teleported into the singlet and the guess on
/// the measured half is mapped back through the teleportation unitary.
/// Requires 1 <= n <= 3.
Lemma2Run lemma2_demo(int n, RandomSource& rng);

struct Lemma2Summary {
  int n = 0;
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;
  std::uint64_t total_iterations = 0;
  double success_frequency = 0.0;
  double standard_error = 0.0;
  double mean_iterations = 0.0;
  double acceptance_probability = 0.0;  // runs / total_iterations
};

/// Independent runs, run r drawing from RandomSource::derive(seed, r).
Lemma2Summary run_lemma2_demo(int n, std::uint64_t runs, std::uint64_t seed);

}  // namespace rqbc
