#include "rqbc/adversary.hpp"

#include <array>
#include <cmath>

#include "rqbc/errors.hpp"
#include "rqbc/parallel.hpp"

namespace rqbc {

AttackStrategy AttackStrategy::optimal() {
  return AttackStrategy{AttackKind::OptimalSubsetGuess, Basis::Computational, std::nullopt};
}

AttackStrategy AttackStrategy::uniform() {
  return AttackStrategy{AttackKind::UniformGuess, Basis::Computational, std::nullopt};
}

AttackStrategy AttackStrategy::fixed_basis_then_fabricate(Basis measured) {
  return AttackStrategy{AttackKind::FixedBasisThenFabricate, measured, std::nullopt};
}

AttackStrategy AttackStrategy::custom_povm(GuessingStrategy s) {
  return AttackStrategy{AttackKind::CustomPovm, Basis::Computational, std::move(s)};
}

std::string to_string(const AttackStrategy& s) {
  switch (s.kind) {
    case AttackKind::OptimalSubsetGuess: return "optimal";
    case AttackKind::UniformGuess: return "uniform";
    case AttackKind::FixedBasisThenFabricate:
      return s.fixed_basis == Basis::Computational ? "fixed-z" : "fixed-x";
    case AttackKind::CustomPovm: return "custom";
  }
  return "?";
}

AttackStrategy parse_attack(const std::string& name) {
  if (name == "optimal") return AttackStrategy::optimal();
  if (name == "uniform") return AttackStrategy::uniform();
  if (name == "fixed-z") return AttackStrategy::fixed_basis_then_fabricate(Basis::Computational);
  if (name == "fixed-x") return AttackStrategy::fixed_basis_then_fabricate(Basis::Hadamard);
  throw DomainError("unknown strategy '" + name + "' (expected optimal, uniform, fixed-z, fixed-x)");
}

double binomial_stderr(double p, std::uint64_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

namespace {

// Born probabilities Tr(rho_j pi_k) tabulated once per strategy, so the
// Monte Carlo loops sample without revalidating operators per draw.
class GuessSampler {
 public:
  explicit GuessSampler(const AttackStrategy& s) : kind_(s.kind), basis_(s.fixed_basis) {
    const Povm* povm = nullptr;
    switch (kind_) {
      case AttackKind::OptimalSubsetGuess: {
        static const GuessingStrategy optimal = optimal_povm();
        povm = &optimal.povm();
        break;
      }
      case AttackKind::CustomPovm:
        if (!s.custom) throw DomainError("CustomPovm attack needs a guessing strategy");
        povm = &s.custom->povm();
        break;
      case AttackKind::FixedBasisThenFabricate:
        povm = &basis_povm(basis_);
        break;
      case AttackKind::UniformGuess:
        return;
    }
    for (int j = 1; j <= 4; ++j) {
      const auto p = born_probabilities(bb84_density(j), *povm);
      auto& row = table_[static_cast<std::size_t>(j - 1)];
      row.fill(0.0);
      for (std::size_t k = 0; k < p.size(); ++k) row[k] = p[k];
    }
  }

  int draw(int prepared_index, RandomSource& rng) const {
    const auto& row = table_[static_cast<std::size_t>(prepared_index - 1)];
    switch (kind_) {
      case AttackKind::UniformGuess:
        return static_cast<int>(rng.uniform_int(1, 4));
      case AttackKind::OptimalSubsetGuess:
      case AttackKind::CustomPovm:
        return static_cast<int>(sample_index(row, rng)) + 1;
      case AttackKind::FixedBasisThenFabricate: {
        const int outcome = static_cast<int>(sample_index(std::span(row.data(), 2), rng));
        const int invented = static_cast<int>(rng.uniform_int(0, 1));
        if (basis_ == Basis::Computational) {
          return subset_from_members(outcome == 0 ? 1 : 3, invented == 0 ? 2 : 4).index();
        }
        return subset_from_members(invented == 0 ? 1 : 3, outcome == 0 ? 2 : 4).index();
      }
    }
    return 1;
  }

 private:
  AttackKind kind_;
  Basis basis_;
  std::array<std::array<double, 4>, 4> table_{};
};

struct TrialCounts {
  int n = 0;
  int failures_z = 0;
  int checked_z = 0;
  int failures_x = 0;
  int checked_x = 0;

  int correct() const { return n - failures_z - failures_x; }
  bool passes(double tolerance) const {
    auto ok = [tolerance](int f, int c) { return c == 0 || static_cast<double>(f) / c <= tolerance; };
    return ok(failures_z, checked_z) && ok(failures_x, checked_x);
  }
};

// Same RNG consumption as bob_prepare followed by run_cheat_trial.
TrialCounts sample_trial(const GuessSampler& sampler, int n, RandomSource& rng) {
  const auto indices = draw_bb84_indices(n, rng);
  TrialCounts c;
  c.n = n;
  for (int idx : indices) {
    const SubsetGuess g(sampler.draw(idx, rng));
    const bool hit = g.contains(idx);
    if (index_in_basis(idx, Basis::Computational)) {
      ++c.checked_z;
      c.failures_z += hit ? 0 : 1;
    } else {
      ++c.checked_x;
      c.failures_x += hit ? 0 : 1;
    }
  }
  return c;
}

void require_trials(std::uint64_t trials) {
  if (trials < 100) throw DomainError("Monte Carlo estimates need at least 100 trials");
}

}  // namespace

int draw_subset_guess(const AttackStrategy& strategy, int prepared_index, RandomSource& rng) {
  if (prepared_index < 1 || prepared_index > 4) throw DomainError("draw_subset_guess: index not in 1..4");
  return GuessSampler(strategy).draw(prepared_index, rng);
}

CheatTrial run_cheat_trial(const AttackStrategy& strategy, const PreparedStates& prepared,
                           double tolerance, RandomSource& rng) {
  if (!(tolerance >= 0.0 && tolerance < 1.0)) throw DomainError("run_cheat_trial: tolerance must lie in [0, 1)");
  const GuessSampler sampler(strategy);
  CheatTrial t;
  t.n = static_cast<int>(prepared.size());
  t.lost.assign(prepared.size(), false);
  for (int idx : prepared.indices) {
    const SubsetGuess g(sampler.draw(idx, rng));
    t.guesses.push_back(g.index());
    t.z_outcomes.push_back(eigen_outcome(g.computational_member()) == 0 ? Outcome::Zero : Outcome::One);
    t.x_outcomes.push_back(eigen_outcome(g.hadamard_member()) == 0 ? Outcome::Zero : Outcome::One);
    if (g.contains(idx)) ++t.correct_guesses;
  }
  t.surviving = prepared.size();
  t.q0 = consistency_check(0, t.z_outcomes, prepared.indices, tolerance);
  t.q1 = consistency_check(1, t.x_outcomes, prepared.indices, tolerance);
  t.success_q0 = t.q0.passed;
  t.success_q1 = t.q1.passed;
  t.success = t.success_q0 && t.success_q1;
  return t;
}

MonteCarloReport estimate_cheat_probability(const AttackStrategy& strategy, int n,
                                            std::uint64_t trials, double tolerance,
                                            std::uint64_t seed) {
  require_trials(trials);
  if (n < 1) throw DomainError("estimate_cheat_probability: n must be positive");
  if (!(tolerance >= 0.0 && tolerance < 1.0)) throw DomainError("estimate_cheat_probability: tolerance must lie in [0, 1)");
  const GuessSampler sampler(strategy);
  const auto partial = parallel_chunks<std::uint64_t>(trials, [&](std::uint64_t b, std::uint64_t e, std::uint64_t& acc) {
    for (std::uint64_t r = b; r < e; ++r) {
      RandomSource rng = RandomSource::derive(seed, r);
      if (sample_trial(sampler, n, rng).passes(tolerance)) ++acc;
    }
  });

  MonteCarloReport rep;
  rep.strategy = to_string(strategy);
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  rep.tolerance = tolerance;
  for (auto s : partial) rep.successes += s;
  rep.estimate = static_cast<double>(rep.successes) / static_cast<double>(trials);
  rep.standard_error = binomial_stderr(rep.estimate, trials);
  rep.bound = security_bound(n);
  rep.bound_violated = rep.estimate > rep.bound + kSigmaSlack * rep.standard_error;
  return rep;
}

std::vector<ToleranceCurvePoint> cheat_with_tolerance_curve(const AttackStrategy& strategy, int n,
                                                            const std::vector<double>& tolerances,
                                                            std::uint64_t trials, std::uint64_t seed) {
  require_trials(trials);
  if (n < 1) throw DomainError("cheat_with_tolerance_curve: n must be positive");
  for (double t : tolerances) {
    if (!(t >= 0.0 && t < 1.0)) throw DomainError("cheat_with_tolerance_curve: tolerances must lie in [0, 1)");
  }
  const GuessSampler sampler(strategy);
  // Histogram of failure counts; every tolerance is evaluated on the same trials.
  const auto partial = parallel_chunks<std::vector<std::uint64_t>>(
      trials, [&](std::uint64_t b, std::uint64_t e, std::vector<std::uint64_t>& hist) {
        hist.assign(static_cast<std::size_t>(n) + 1, 0);
        for (std::uint64_t r = b; r < e; ++r) {
          RandomSource rng = RandomSource::derive(seed, r);
          ++hist[static_cast<std::size_t>(n - sample_trial(sampler, n, rng).correct())];
        }
      });
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& h : partial)
    for (std::size_t k = 0; k < h.size(); ++k) hist[k] += h[k];

  std::vector<ToleranceCurvePoint> curve;
  for (double t : tolerances) {
    ToleranceCurvePoint p;
    p.tolerance = t;
    std::uint64_t ok = 0;
    for (std::size_t f = 0; f < hist.size(); ++f) {
      if (static_cast<double>(f) / n <= t) ok += hist[f];
    }
    p.estimate = static_cast<double>(ok) / static_cast<double>(trials);
    p.standard_error = binomial_stderr(p.estimate, trials);
    const double eps = (1.0 - t) - kMu;
    if (eps > 0.0) {
      p.epsilon = eps;
      p.azuma = azuma_bound(n, eps);
      p.bound_violated = p.estimate > *p.azuma + kSigmaSlack * p.standard_error;
    }
    curve.push_back(p);
  }
  return curve;
}

AzumaTailReport azuma_tail_check(const AttackStrategy& strategy, int n,
                                 const std::vector<double>& epsilons, std::uint64_t trials,
                                 std::uint64_t seed) {
  require_trials(trials);
  if (n < 1) throw DomainError("azuma_tail_check: n must be positive");
  const GuessSampler sampler(strategy);
  const auto partial = parallel_chunks<std::vector<std::uint64_t>>(
      trials, [&](std::uint64_t b, std::uint64_t e, std::vector<std::uint64_t>& hist) {
        hist.assign(static_cast<std::size_t>(n) + 1, 0);
        for (std::uint64_t r = b; r < e; ++r) {
          RandomSource rng = RandomSource::derive(seed, r);
          ++hist[static_cast<std::size_t>(sample_trial(sampler, n, rng).correct())];
        }
      });
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& h : partial)
    for (std::size_t k = 0; k < h.size(); ++k) hist[k] += h[k];

  AzumaTailReport rep;
  rep.strategy = to_string(strategy);
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  double total = 0.0;
  for (std::size_t k = 0; k < hist.size(); ++k) total += static_cast<double>(k) * static_cast<double>(hist[k]);
  rep.mean_successes = total / static_cast<double>(trials);

  for (double eps : epsilons) {
    AzumaTailPoint p;
    p.epsilon = eps;
    p.threshold = n * (kMu + eps);
    std::uint64_t tail = 0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
      if (static_cast<double>(k) >= p.threshold) tail += hist[k];
    }
    p.tail_fraction = static_cast<double>(tail) / static_cast<double>(trials);
    p.standard_error = binomial_stderr(p.tail_fraction, trials);
    p.azuma = azuma_bound(n, eps);
    p.satisfied = p.tail_fraction <= p.azuma + kSigmaSlack * p.standard_error;
    rep.points.push_back(p);
  }
  return rep;
}

LossAttackReport loss_attack_check(double f, int n, std::uint64_t trials, std::uint64_t seed) {
  require_trials(trials);
  if (!(f >= 0.0 && f < 1.0)) throw DomainError("loss_attack_check: f must lie in [0, 1)");
  if (n < 1 || n * (1.0 - f) < 1.0) throw DomainError("loss_attack_check: expected surviving count below 1");
  const GuessSampler sampler(AttackStrategy::optimal());

  struct Acc {
    std::uint64_t successes = 0;
    double bound_sum = 0.0;
    std::uint64_t surviving = 0;
  };
  const auto partial = parallel_chunks<Acc>(trials, [&](std::uint64_t b, std::uint64_t e, Acc& acc) {
    for (std::uint64_t r = b; r < e; ++r) {
      RandomSource rng = RandomSource::derive(seed, r);
      const auto indices = draw_bb84_indices(n, rng);
      int surviving = 0;
      bool all_correct = true;
      for (int idx : indices) {
        const SubsetGuess g(sampler.draw(idx, rng));
        // The loss declaration at P comes after the outcome is known.
        if (f > 0.0 && rng.bernoulli(f)) continue;
        ++surviving;
        if (!g.contains(idx)) all_correct = false;
      }
      if (all_correct) ++acc.successes;
      acc.surviving += static_cast<std::uint64_t>(surviving);
      acc.bound_sum += std::pow(kMu, surviving);
    }
  });

  LossAttackReport rep;
  rep.loss = f;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  double bound_sum = 0.0;
  std::uint64_t surviving = 0;
  for (const auto& a : partial) {
    rep.successes += a.successes;
    bound_sum += a.bound_sum;
    surviving += a.surviving;
  }
  const double trials_d = static_cast<double>(trials);
  rep.estimate = static_cast<double>(rep.successes) / trials_d;
  rep.standard_error = binomial_stderr(rep.estimate, trials);
  rep.mean_surviving = static_cast<double>(surviving) / trials_d;
  rep.observed_bound = bound_sum / trials_d;

  // E[mu^M] for M ~ Binomial(n, 1 - f), summed term by term in log space.
  double mixture = 0.0;
  for (int m = 0; m <= n; ++m) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
    const double log_term = log_choose + m * std::log1p(-f) + (f > 0.0 ? (n - m) * std::log(f) : (m == n ? 0.0 : -INFINITY)) +
                            m * std::log(kMu);
    mixture += std::exp(log_term);
  }
  rep.mixture_oracle = mixture;
  rep.bound_violated = rep.estimate > rep.observed_bound + kSigmaSlack * rep.standard_error;
  return rep;
}

}  // namespace rqbc
