#include "rqbc/discrimination.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rqbc/errors.hpp"

namespace rqbc {

int wrap_index(int index) { return ((index - 1) % 4 + 4) % 4 + 1; }

SubsetGuess::SubsetGuess(int index) : index_(index) {
  if (index < 1 || index > 4) {
    throw DomainError("SubsetGuess: index " + std::to_string(index) + " not in 1..4");
  }
}

bool SubsetGuess::contains(int bb84_index) const {
  return bb84_index == index_ || bb84_index == wrap_index(index_ + 1);
}

int SubsetGuess::computational_member() const {
  return index_ % 2 == 1 ? index_ : wrap_index(index_ + 1);
}

int SubsetGuess::hadamard_member() const {
  return index_ % 2 == 0 ? index_ : wrap_index(index_ + 1);
}

SubsetGuess subset_from_members(int computational, int hadamard) {
  if ((computational != 1 && computational != 3) || (hadamard != 2 && hadamard != 4)) {
    throw DomainError("subset_from_members: need one computational and one Hadamard index");
  }
  // S_i and S_{i-1} are the two guesses holding e_i; pick the one holding the other.
  const SubsetGuess up(computational);
  return up.contains(hadamard) ? up : SubsetGuess(wrap_index(computational - 1));
}

GuessingStrategy::GuessingStrategy(Povm povm) : povm_(std::move(povm)) {
  if (povm_.dim() != 2 || povm_.size() != 4) {
    throw DomainError("GuessingStrategy: need a 4-element qubit POVM");
  }
}

const Operator& GuessingStrategy::element(int k) const {
  return povm_[static_cast<std::size_t>(wrap_index(k) - 1)];
}

const Operator& bb84_density(int index) {
  static const std::array<Operator, 4> rho = {projector(bb84_state(1)), projector(bb84_state(2)),
                                              projector(bb84_state(3)), projector(bb84_state(4))};
  return rho[static_cast<std::size_t>(wrap_index(index) - 1)];
}

std::vector<Operator> optimal_povm_elements(double theta1_offset) {
  std::vector<Operator> elements;
  elements.reserve(4);
  for (int i = 1; i <= 4; ++i) {
    double theta = i * (std::numbers::pi / 4.0) - std::numbers::pi / 8.0;
    if (i == 1) theta += theta1_offset;
    const PureState phi({std::cos(theta), std::sin(theta)});
    elements.push_back(0.5 * projector(phi));
  }
  return elements;
}

GuessingStrategy optimal_povm() { return GuessingStrategy(Povm(optimal_povm_elements())); }

GuessingStrategy constant_guess(int k) {
  std::vector<Operator> elements(4, Operator::zero(2));
  elements[static_cast<std::size_t>(wrap_index(k) - 1)] = Operator::identity(2);
  return GuessingStrategy(Povm(std::move(elements)));
}

GuessingStrategy uniform_guess_strategy() {
  return GuessingStrategy(Povm(std::vector<Operator>(4, 0.25 * Operator::identity(2))));
}

GuessingStrategy random_strategy(RandomSource& rng) { return GuessingStrategy(random_povm(2, 4, rng)); }

namespace {

void require_four_qubit_elements(std::span<const Operator> elements, const char* who) {
  if (elements.size() != 4) throw DomainError(std::string(who) + ": need exactly 4 elements");
  for (const auto& e : elements) {
    if (e.dim() != 2) throw DomainError(std::string(who) + ": elements must act on a qubit");
  }
}

const Operator& cyclic(std::span<const Operator> elements, int k) {
  return elements[static_cast<std::size_t>(wrap_index(k) - 1)];
}

// (rho_i + rho_{i+1}) / 2
Operator pair_state(int i) { return 0.5 * (bb84_density(i) + bb84_density(i + 1)); }

}  // namespace

double win_probability(std::span<const Operator> elements) {
  require_four_qubit_elements(elements, "win_probability");
  double total = 0.0;
  for (int i = 1; i <= 4; ++i) {
    total += trace_of_product(bb84_density(i), cyclic(elements, i) + cyclic(elements, i - 1)).real();
  }
  return 0.25 * total;
}

double win_probability(const GuessingStrategy& strategy) {
  return win_probability(strategy.povm().elements());
}

Operator gamma_operator(std::span<const Operator> elements) {
  require_four_qubit_elements(elements, "gamma_operator");
  Operator gamma = Operator::zero(2);
  for (int i = 1; i <= 4; ++i) gamma += pair_state(i) * cyclic(elements, i);
  return 0.25 * gamma;
}

Operator gamma_operator(const GuessingStrategy& strategy) {
  return gamma_operator(strategy.povm().elements());
}

namespace {

// Shared by the single-state and collective checks: Gamma - prior * sigma_j >= -tol.
CertificateResult certify(const Operator& gamma, std::span<const Operator> weighted_states, double tol) {
  if (!(tol > 0.0)) throw DomainError("certificate: tol must be positive");
  if (!gamma.is_hermitian(kPsdTol)) {
    throw InconsistencyError("certificate: Gamma is not Hermitian");
  }
  const Operator gamma_h = 0.5 * (gamma + gamma.adjoint());
  CertificateResult result;
  result.passed = true;
  result.min_eigenvalues.reserve(weighted_states.size());
  for (std::size_t j = 0; j < weighted_states.size(); ++j) {
    const double m = min_eigenvalue(gamma_h - weighted_states[j]);
    result.min_eigenvalues.push_back(m);
    if (j == 0 || m < result.worst_eigenvalue) {
      result.worst_eigenvalue = m;
      result.worst_index = static_cast<int>(j) + 1;
    }
    if (m < -tol) result.passed = false;
  }
  return result;
}

}  // namespace

CertificateResult holevo_certificate(std::span<const Operator> elements, double tol) {
  const Operator gamma = gamma_operator(elements);
  std::vector<Operator> weighted;
  weighted.reserve(4);
  for (int i = 1; i <= 4; ++i) weighted.push_back(0.125 * (bb84_density(i) + bb84_density(i + 1)));
  return certify(gamma, weighted, tol);
}

CertificateResult holevo_certificate(const GuessingStrategy& strategy, double tol) {
  return holevo_certificate(strategy.povm().elements(), tol);
}

double max_confidence_ratio(const Operator& a, int i) {
  if (a.dim() != 2) throw DomainError("max_confidence_ratio: A must act on a qubit");
  if (i < 1 || i > 4) throw DomainError("max_confidence_ratio: i not in 1..4");
  if (!a.is_hermitian(kPsdTol)) throw DomainError("max_confidence_ratio: A is not Hermitian");
  const double tr = a.trace().real();
  if (!(tr > 1e-12)) throw DomainError("max_confidence_ratio: Tr(A) must be positive");
  if (min_eigenvalue(a) < -kPsdTol) throw DomainError("max_confidence_ratio: A is not PSD");
  const double numerator = 0.25 * trace_of_product(a, bb84_density(i) + bb84_density(i + 1)).real();
  return numerator / (0.5 * tr);
}

double security_bound(int n) {
  if (n < 1) throw DomainError("security_bound: n must be positive");
  double p = 1.0;
  for (int k = 0; k < n; ++k) p *= kMu;
  return p;
}

double azuma_bound(int n, double eps) {
  if (n < 1) throw DomainError("azuma_bound: n must be positive");
  if (!(eps > 0.0)) throw DomainError("azuma_bound: eps must be positive");
  return std::exp(-static_cast<double>(n) * eps * eps / (2.0 * kMu * kMu));
}

CollectiveCertificate collective_certificate(const GuessingStrategy& first,
                                             const GuessingStrategy& second, double tol) {
  constexpr double kPrior = 1.0 / 16.0;
  Operator gamma = Operator::zero(4);
  std::vector<Operator> weighted;
  weighted.reserve(16);
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      const Operator sigma = tensor(pair_state(i), pair_state(j));
      gamma += kPrior * (sigma * tensor(first.element(i), second.element(j)));
      weighted.push_back(kPrior * sigma);
    }
  }
  CertificateResult cert = certify(gamma, weighted, tol);
  const double win = 4.0 * gamma.trace().real();
  return CollectiveCertificate{std::move(cert), std::move(gamma), win};
}

CollectiveCertificate collective_certificate_n2(double tol) {
  const GuessingStrategy optimal = optimal_povm();
  return collective_certificate(optimal, optimal, tol);
}

namespace {

int bb84_index_of(const PureState& s) {
  for (int k = 1; k <= 4; ++k) {
    if (fidelity(s, bb84_state(k)) > 1.0 - 1e-9) return k;
  }
  throw InconsistencyError("lemma2_demo: mapped guess member is not a BB84 state");
}

}  // namespace

Lemma2Run lemma2_demo(int n, RandomSource& rng) {
  if (n < 1 || n > 3) throw DomainError("lemma2_demo: n must be in 1..3");
  static const GuessingStrategy strategy = optimal_povm();
  static const std::vector<Operator> kraus = [] {
    std::vector<Operator> k;
    for (int i = 1; i <= 4; ++i) k.push_back(psd_sqrt(strategy.element(i)));
    return k;
  }();

  // Conditioning tuple: the known states, reused on every restart.
  std::vector<int> known(static_cast<std::size_t>(n - 1));
  for (auto& k : known) k = static_cast<int>(rng.uniform_int(1, 4));

  const PureState singlet = singlet_state();  // qubit order (B, A)
  Lemma2Run run;
  while (true) {
    if (run.iterations >= kLemma2IterationCap) {
      throw NonTerminationError("lemma2_demo: conditioning event not reached within 10^6 iterations");
    }
    ++run.iterations;

    bool accepted = true;
    for (int idx : known) {
      const auto k = born_sample(bb84_density(idx), strategy.povm(), rng);
      if (!SubsetGuess(static_cast<int>(k) + 1).contains(idx)) accepted = false;
    }

    // Strategy on the singlet half A: Kraus sqrt(pi_k) on the second qubit.
    std::array<std::vector<Complex>, 4> branches;
    std::array<double, 4> probabilities{};
    for (std::size_t k = 0; k < 4; ++k) {
      branches[k] = tensor(Operator::identity(2), kraus[k]).apply_raw(singlet.amplitudes());
      double norm = 0.0;
      for (const auto& z : branches[k]) norm += std::norm(z);
      probabilities[k] = norm;
    }
    const auto guess_on_half = sample_index(probabilities, rng);
    if (!accepted) continue;

    const PureState post = PureState::normalized(branches[guess_on_half]);
    run.unknown_index = static_cast<int>(rng.uniform_int(1, 4));
    const PureState joint = tensor(bb84_state(run.unknown_index), post);  // (psi, B, A)

    const auto& bells = bell_states();
    std::array<double, 4> bell_prob{};
    for (std::size_t m = 0; m < 4; ++m) {
      double norm = 0.0;
      for (std::size_t c = 0; c < 2; ++c) {
        Complex s{0.0, 0.0};
        for (std::size_t ab = 0; ab < 4; ++ab) s += std::conj(bells[m][ab]) * joint[ab * 2 + c];
        norm += std::norm(s);
      }
      bell_prob[m] = norm;
    }
    const auto m = sample_index(bell_prob, rng);

    // The half holds U|psi>; the guess for |psi> is U^dagger applied to S_k.
    const Operator u_dag = teleport_byproduct(static_cast<int>(m)).adjoint();
    const SubsetGuess on_half(static_cast<int>(guess_on_half) + 1);
    const int comp = bb84_index_of(u_dag.apply(bb84_state(on_half.computational_member())));
    const int had = bb84_index_of(u_dag.apply(bb84_state(on_half.hadamard_member())));
    const SubsetGuess recovered = subset_from_members(comp % 2 == 1 ? comp : had, comp % 2 == 1 ? had : comp);
    run.guess_index = recovered.index();
    run.success = recovered.contains(run.unknown_index);
    return run;
  }
}

Lemma2Summary run_lemma2_demo(int n, std::uint64_t runs, std::uint64_t seed) {
  if (runs == 0) throw DomainError("run_lemma2_demo: runs must be positive");
  Lemma2Summary s;
  s.n = n;
  s.runs = runs;
  for (std::uint64_t r = 0; r < runs; ++r) {
    RandomSource rng = RandomSource::derive(seed, r);
    const Lemma2Run run = lemma2_demo(n, rng);
    s.total_iterations += run.iterations;
    if (run.success) ++s.successes;
  }
  const double runs_d = static_cast<double>(runs);
  s.success_frequency = static_cast<double>(s.successes) / runs_d;
  s.standard_error = std::sqrt(s.success_frequency * (1.0 - s.success_frequency) / runs_d);
  s.mean_iterations = static_cast<double>(s.total_iterations) / runs_d;
  s.acceptance_probability = runs_d / static_cast<double>(s.total_iterations);
  return s;
}

}  // namespace rqbc
