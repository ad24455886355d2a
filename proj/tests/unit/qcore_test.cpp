#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rqbc/discrimination.hpp"
#include "rqbc/errors.hpp"
#include "rqbc/qcore.hpp"

using namespace rqbc;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Operator diag(std::initializer_list<double> v) {
  std::vector<double> d(v);
  return Operator::diagonal(d);
}

// U diag(values) U^dagger for a random unitary from Gram-Schmidt on Gaussian
// columns; the spectrum is known by construction.
Operator with_spectrum(const std::vector<double>& values, RandomSource& rng) {
  const std::size_t n = values.size();
  std::vector<std::vector<Complex>> cols;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Complex> v(n);
    for (auto& z : v) z = Complex{rng.normal(), rng.normal()};
    for (const auto& u : cols) {
      Complex d{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) d += std::conj(u[i]) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= d * u[i];
    }
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    for (auto& z : v) z /= std::sqrt(norm);
    cols.push_back(v);
  }
  Operator h = Operator::zero(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h.at(i, j) += values[k] * cols[k][i] * std::conj(cols[k][j]);
  return 0.5 * (h + h.adjoint());
}

}  // namespace

TEST(qcore, bb84_states_match_their_definitions) {
  const auto e1 = bb84_state(1);
  EXPECT_EQ(e1[0], Complex(1.0, 0.0));
  EXPECT_EQ(e1[1], Complex(0.0, 0.0));
  const auto e2 = bb84_state(2);
  EXPECT_NEAR(e2[0].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(e2[1].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(std::abs(inner(bb84_state(1), bb84_state(3))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inner(bb84_state(2), bb84_state(4))), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(bb84_state(1), bb84_state(2)), 0.5, 1e-15);
}

TEST(qcore, bb84_state_rejects_out_of_range_index) {
  EXPECT_THROW(bb84_state(0), DomainError);
  EXPECT_THROW(bb84_state(5), DomainError);
}

TEST(qcore, pure_state_invariants) {
  EXPECT_THROW(PureState({1.0, 1.0}), DomainError);
  EXPECT_THROW(PureState({1.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(PureState({Complex(NAN, 0.0), 0.0}), DomainError);
  EXPECT_THROW(PureState::normalized({0.0, 0.0}), DomainError);
  std::vector<Complex> big(32, 0.0);
  big[0] = 1.0;
  EXPECT_THROW(PureState{big}, CapacityError);
}

TEST(qcore, projector_examples) {
  EXPECT_LE(projector(bb84_state(1)).max_abs_diff(diag({1.0, 0.0})), 1e-15);
  const Operator plus(2, {0.5, 0.5, 0.5, 0.5});
  EXPECT_LE(projector(bb84_state(2)).max_abs_diff(plus), 1e-15);
}

TEST(qcore, projector_is_idempotent_hermitian_unit_trace) {
  RandomSource rng(11);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t dim = std::size_t{2} << (k % 4);
    const Operator p = projector(random_state(dim, rng));
    ASSERT_LE((p * p).max_abs_diff(p), 1e-12);
    ASSERT_TRUE(p.is_hermitian());
    ASSERT_NEAR(p.trace().real(), 1.0, 1e-12);
  }
}

TEST(qcore, tensor_examples) {
  EXPECT_LE(tensor(Operator::identity(2), Operator::identity(2)).max_abs_diff(Operator::identity(4)), 0.0);
  const Operator p0 = projector(bb84_state(1));
  EXPECT_LE(tensor(p0, p0).max_abs_diff(diag({1.0, 0.0, 0.0, 0.0})), 0.0);
  EXPECT_THROW(tensor(Operator::identity(8), Operator::identity(4)), CapacityError);
}

TEST(qcore, tensor_trace_is_multiplicative) {
  RandomSource rng(12);
  for (int k = 0; k < 200; ++k) {
    const Operator a = random_hermitian(2, rng);
    const Operator b = random_hermitian(k % 2 ? 2 : 4, rng);
    const Complex lhs = tensor(a, b).trace();
    const Complex rhs = a.trace() * b.trace();
    ASSERT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
  }
}

TEST(qcore, tensor_is_associative_up_to_dim16) {
  RandomSource rng(13);
  for (int k = 0; k < 200; ++k) {
    const Operator a = random_hermitian(2, rng);
    const Operator b = random_hermitian(2, rng);
    const Operator c = random_hermitian(k % 2 ? 2 : 4, rng);
    ASSERT_LE(tensor(tensor(a, b), c).max_abs_diff(tensor(a, tensor(b, c))), 1e-12);
  }
}

TEST(qcore, tensor_preserves_positivity) {
  RandomSource rng(14);
  for (int k = 0; k < 100; ++k) {
    ASSERT_GE(min_eigenvalue(tensor(random_psd(2, rng), random_psd(4, rng))), -1e-10);
  }
}

TEST(qcore, povm_constructor_enforces_invariants) {
  EXPECT_NO_THROW(Povm({projector(bb84_state(1)), projector(bb84_state(3))}));
  EXPECT_THROW(Povm({projector(bb84_state(1))}), DomainError);
  EXPECT_THROW(Povm({diag({1.5, 1.0}), diag({-0.5, 0.0})}), DomainError);
  EXPECT_THROW(Povm({Operator(2, {0.5, 0.5, 0.0, 0.5}), Operator(2, {0.5, -0.5, 0.0, 0.5})}), DomainError);
  EXPECT_THROW(Povm(std::vector<Operator>{}), DomainError);
}

TEST(qcore, random_povm_is_valid) {
  RandomSource rng(15);
  for (int k = 0; k < 100; ++k) {
    const Povm p = random_povm(k % 2 ? 2 : 4, 3 + k % 3, rng);
    Operator total = Operator::zero(p.dim());
    for (const auto& e : p.elements()) total += e;
    ASSERT_LE(total.max_abs_diff(Operator::identity(p.dim())), 1e-10);
  }
}

TEST(qcore, born_sample_eigenstate_is_deterministic) {
  const Povm z({projector(bb84_state(1)), projector(bb84_state(3))});
  RandomSource rng(1);
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(born_sample(projector(bb84_state(1)), z, rng), 0u);
}

TEST(qcore, born_sample_plus_in_z_basis_is_unbiased) {
  const Povm z({projector(bb84_state(1)), projector(bb84_state(3))});
  const Operator rho = projector(bb84_state(2));
  RandomSource rng(2);
  int zeros = 0;
  constexpr int kDraws = 1'000'000;
  for (int k = 0; k < kDraws; ++k) zeros += born_sample(rho, z, rng) == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(zeros) / kDraws, 0.5, 0.002);
}

TEST(qcore, born_sample_optimal_povm_on_zero_matches_trace_oracle) {
  // Oracle: Tr(|0><0| (1/2)|phi_i><phi_i|) = cos^2(theta_i) / 2.
  std::array<double, 4> expected{};
  for (int i = 1; i <= 4; ++i) {
    const double theta = i * std::numbers::pi / 4 - std::numbers::pi / 8;
    expected[static_cast<std::size_t>(i - 1)] = 0.5 * std::cos(theta) * std::cos(theta);
  }
  EXPECT_NEAR(expected[0], 0.42677669529663687, 1e-15);
  EXPECT_NEAR(expected[1], 0.07322330470336315, 1e-15);

  const GuessingStrategy optimal = optimal_povm();
  const Povm& povm = optimal.povm();
  const Operator rho = projector(bb84_state(1));
  RandomSource rng(3);
  std::array<int, 4> counts{};
  constexpr int kDraws = 1'000'000;
  for (int k = 0; k < kDraws; ++k) ++counts[born_sample(rho, povm, rng)];
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(static_cast<double>(counts[i]) / kDraws, expected[i], 0.002) << "outcome " << i + 1;
  }
}

TEST(qcore, born_sample_frequencies_within_four_standard_errors) {
  RandomSource gen(16);
  constexpr int kDraws = 1'000'000;
  for (int pair = 0; pair < 10; ++pair) {
    const std::size_t dim = pair % 2 ? 2 : 4;
    const Operator rho = projector(random_state(dim, gen));
    const Povm povm = random_povm(dim, 4, gen);
    std::vector<double> exact;
    for (const auto& e : povm.elements()) exact.push_back(trace_of_product(rho, e).real());

    RandomSource rng = RandomSource::derive(99, static_cast<std::uint64_t>(pair));
    std::vector<int> counts(povm.size(), 0);
    for (int k = 0; k < kDraws; ++k) ++counts[born_sample(rho, povm, rng)];
    for (std::size_t i = 0; i < povm.size(); ++i) {
      const double se = std::sqrt(exact[i] * (1 - exact[i]) / kDraws);
      ASSERT_NEAR(static_cast<double>(counts[i]) / kDraws, exact[i], 4 * se + 1e-12)
          << "pair " << pair << " outcome " << i;
    }
  }
}

TEST(qcore, born_probabilities_reject_inconsistent_totals) {
  const Povm z({projector(bb84_state(1)), projector(bb84_state(3))});
  EXPECT_THROW(born_probabilities(diag({0.6, 0.6}), z), NumericalError);
  RandomSource rng(4);
  EXPECT_THROW(born_sample(diag({0.6, 0.6}), z, rng), DomainError);
}

TEST(qcore, min_eigenvalue_examples) {
  EXPECT_DOUBLE_EQ(min_eigenvalue(diag({3.0, -1.0})), -1.0);
  EXPECT_NEAR(min_eigenvalue(Operator::identity(4)), 1.0, 1e-15);
  EXPECT_THROW(min_eigenvalue(Operator(2, {0.0, 1.0, 0.0, 0.0})), DomainError);
}

TEST(qcore, min_eigenvalue_bounds_rayleigh_quotients) {
  RandomSource rng(17);
  for (int k = 0; k < 40; ++k) {
    const std::size_t dim = std::size_t{2} << (k % 4);
    const Operator h = random_hermitian(dim, rng);
    const double lo = min_eigenvalue(h);
    for (int v = 0; v < 100; ++v) ASSERT_LE(lo, expectation(h, random_state(dim, rng)) + 1e-12);
  }
}

TEST(qcore, jacobi_recovers_known_spectra) {
  RandomSource rng(18);
  for (std::size_t dim : {4u, 8u, 16u}) {
    std::vector<double> values;
    for (std::size_t i = 0; i < dim; ++i) values.push_back(-2.0 + 0.37 * static_cast<double>(i * i % 11));
    const Operator h = with_spectrum(values, rng);
    auto got = hermitian_eigenvalues(h);
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i < dim; ++i) EXPECT_NEAR(got[i], values[i], 1e-10) << "dim " << dim;
  }
}

TEST(qcore, eigensystem_reconstructs_operator) {
  RandomSource rng(19);
  for (std::size_t dim : {2u, 4u, 8u, 16u}) {
    const Operator h = random_hermitian(dim, rng);
    const auto es = hermitian_eigensystem(h);
    Operator rebuilt = Operator::zero(dim);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          rebuilt.at(i, j) += es.values[k] * es.vectors(i, k) * std::conj(es.vectors(j, k));
    EXPECT_LE(rebuilt.max_abs_diff(h), 1e-10) << "dim " << dim;
    // Closed form and Jacobi agree at dim 2.
    if (dim == 2) EXPECT_NEAR(es.values[0], min_eigenvalue(h), 1e-12);
  }
}

TEST(qcore, psd_sqrt_squares_back) {
  RandomSource rng(20);
  const Operator a = random_psd(4, rng);
  const Operator s = psd_sqrt(a);
  EXPECT_LE((s * s).max_abs_diff(a), 1e-10);
}

TEST(qcore, teleport_byproducts_are_unitary) {
  for (int m = 0; m < 4; ++m) {
    const Operator u = teleport_byproduct(m);
    EXPECT_LE((u.adjoint() * u).max_abs_diff(Operator::identity(2)), 1e-12) << "outcome " << m;
  }
  EXPECT_THROW(teleport_byproduct(4), DomainError);
}

TEST(qcore, teleport_demo_on_bb84_states) {
  RandomSource rng(5);
  for (int k = 0; k < 100; ++k) {
    EXPECT_NEAR(fidelity(teleport_demo(bb84_state(2), rng), bb84_state(2)), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(teleport_demo(bb84_state(1), rng), bb84_state(1)), 1.0, 1e-12);
  }
}

TEST(qcore, teleport_random_states_hits_every_bell_outcome) {
  RandomSource rng(6);
  std::array<int, 4> seen{};
  constexpr int kReps = 1000;
  for (int k = 0; k < kReps; ++k) {
    const PureState psi = random_state(2, rng);
    const auto t = teleport(psi, rng);
    ASSERT_NEAR(fidelity(t.recovered, psi), 1.0, 1e-12);
    ASSERT_NEAR(fidelity(t.received, t.byproduct.apply(psi)), 1.0, 1e-12);
    ++seen[static_cast<std::size_t>(t.bell_outcome)];
  }
  for (int c : seen) EXPECT_NEAR(static_cast<double>(c) / kReps, 0.25, 0.05);
  EXPECT_THROW(teleport_demo(random_state(4, rng), rng), DomainError);
}
