#pragma once

// Small dense complex linear algebra for qubit registers of up to 4 qubits,
// plus the handful of quantum primitives the protocol analysis needs.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rqbc/random.hpp"

namespace rqbc {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 16;
inline constexpr double kEqualityTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kProbabilityTol = 1e-9;

/// True for 2, 4, 8, 16 (and 1, which no public type accepts).
bool is_supported_dim(std::size_t dim);

/// Unit vector in C^dim. Construction rejects non-finite amplitudes and
/// norms further than 1e-12 from one.
class PureState {
 public:
  explicit PureState(std::vector<Complex> amplitudes);

  /// Scales `amplitudes` to unit norm first; rejects the zero vector.
  static PureState normalized(std::vector<Complex> amplitudes);

  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

 private:
  std::vector<Complex> amplitudes_;
};

/// <a|b>
Complex inner(const PureState& a, const PureState& b);

/// |<a|b>|^2, the phase-insensitive comparison used everywhere.
double fidelity(const PureState& a, const PureState& b);

/// Dense dim x dim complex matrix, row-major.
class Operator {
 public:
  Operator(std::size_t dim, std::vector<Complex> entries);

  static Operator zero(std::size_t dim);
  static Operator identity(std::size_t dim);
  static Operator diagonal(std::span<const double> values);

  std::size_t dim() const { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  Complex& at(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const std::vector<Complex>& entries() const { return entries_; }

  Complex trace() const;
  Operator adjoint() const;
  bool is_hermitian(double tol = kEqualityTol) const;

  /// Largest |a_ij - b_ij|.
  double max_abs_diff(const Operator& other) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);

  PureState apply(const PureState& v) const;
  /// A|v> without renormalising.
  std::vector<Complex> apply_raw(std::span<const Complex> v) const;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

/// Tr(a b) without forming the product.
Complex trace_of_product(const Operator& a, const Operator& b);

/// <v|h|v>, real part.
double expectation(const Operator& h, const PureState& v);

/// Positive operators summing to the identity.
class Povm {
 public:
  /// Throws DomainError unless every element is Hermitian PSD (min eigenvalue
  /// >= -1e-10) and the elements sum to I entrywise within 1e-10.
  explicit Povm(std::vector<Operator> elements);

  std::size_t dim() const { return elements_.front().dim(); }
  std::size_t size() const { return elements_.size(); }
  const Operator& operator[](std::size_t k) const { return elements_[k]; }
  const std::vector<Operator>& elements() const { return elements_; }

 private:
  std::vector<Operator> elements_;
};

/// Basis state |e_index> for index 1..4: |0>, |+>, |1>, |->.
PureState bb84_state(int index);

/// |psi><psi|
Operator projector(const PureState& state);

/// Kronecker product; throws CapacityError past dimension 16.
Operator tensor(const Operator& a, const Operator& b);
PureState tensor(const PureState& a, const PureState& b);

/// Tr(rho pi_k) for every element, clamped at zero and renormalised.
/// Throws NumericalError when the raw total misses 1 by more than 1e-9 or an
/// entry is below -1e-9.
std::vector<double> born_probabilities(const Operator& rho, const Povm& povm);

/// Index drawn from a probability vector that already sums to one.
std::size_t sample_index(std::span<const double> probabilities, RandomSource& rng);

/// Outcome index k (0-based) with probability Tr(rho pi_k). `rho` must be a
/// density operator: Hermitian, PSD and trace one.
std::size_t born_sample(const Operator& rho, const Povm& povm, RandomSource& rng);

struct Eigensystem {
  std::vector<double> values;  // ascending
  Operator vectors;            // column k is the eigenvector of values[k]
};

/// Full eigendecomposition of a Hermitian operator by cyclic complex Jacobi
/// rotations, iterated until the off-diagonal Frobenius norm drops below
/// 1e-13 (relative to max(1, ||h||_F)).
Eigensystem hermitian_eigensystem(const Operator& h);

/// Eigenvalues in ascending order. Closed form for dim 2, Jacobi otherwise.
std::vector<double> hermitian_eigenvalues(const Operator& h);

/// Smallest eigenvalue of a Hermitian operator; DomainError otherwise.
double min_eigenvalue(const Operator& h);

/// Principal square root of a PSD operator (eigenvalues clamped at zero).
Operator psd_sqrt(const Operator& h);

/// Result of one teleportation of a qubit through a singlet.
struct TeleportResult {
  int bell_outcome;             // 0..3 in the order Phi+, Phi-, Psi+, Psi-
  Operator byproduct;           // U with received = U|psi> up to phase
  PureState received;           // receiving qubit before any correction
  PureState recovered;          // U^dagger applied to `received`
};

/// Teleportation unitary for a Bell outcome when the resource is the singlet
/// (|01> - |10>)/sqrt2. Derived from the Bell basis, not tabulated.
Operator teleport_byproduct(int bell_outcome);

/// The four Bell states on two qubits, ordered Phi+, Phi-, Psi+, Psi-.
const std::vector<PureState>& bell_states();

PureState singlet_state();

TeleportResult teleport(const PureState& state, RandomSource& rng);

/// Teleports `state` and undoes the byproduct; returns the recovered qubit.
PureState teleport_demo(const PureState& state, RandomSource& rng);

/// Haar-like random qubit / qudit state from Gaussian amplitudes.
PureState random_state(std::size_t dim, RandomSource& rng);

/// Random Hermitian operator with Gaussian entries.
Operator random_hermitian(std::size_t dim, RandomSource& rng);

/// G^dagger G for a Gaussian G: random PSD operator.
Operator random_psd(std::size_t dim, RandomSource& rng);

/// Random POVM with `outcomes` elements: G_k^dagger G_k normalised by
/// S^{-1/2} (.) S^{-1/2}, S = sum of the raw elements.
Povm random_povm(std::size_t dim, std::size_t outcomes, RandomSource& rng);

/// Inverse square root of a positive definite Hermitian operator.
Operator inverse_sqrt(const Operator& h);

}  // namespace rqbc
