#include "rqbc/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rqbc/errors.hpp"

namespace rqbc {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_dim(std::size_t dim, const char* who) {
  if (dim > kMaxDim) {
    throw CapacityError(std::string(who) + ": dimension " + std::to_string(dim) + " exceeds 16");
  }
  if (!is_supported_dim(dim) || dim < 2) {
    throw DomainError(std::string(who) + ": dimension " + std::to_string(dim) +
                      " is not 2, 4, 8 or 16");
  }
}

void require_same_dim(const Operator& a, const Operator& b, const char* who) {
  if (a.dim() != b.dim()) throw DomainError(std::string(who) + ": dimension mismatch");
}

double frobenius_sq(const std::vector<Complex>& m) {
  double s = 0.0;
  for (const auto& z : m) s += std::norm(z);
  return s;
}

}  // namespace

bool is_supported_dim(std::size_t dim) {
  return dim >= 1 && dim <= kMaxDim && (dim & (dim - 1)) == 0;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  require_dim(amplitudes_.size(), "PureState");
  for (const auto& a : amplitudes_) {
    if (!finite(a)) throw DomainError("PureState: non-finite amplitude");
  }
  const double norm = std::sqrt(frobenius_sq(amplitudes_));
  if (std::abs(norm - 1.0) > kEqualityTol) {
    throw DomainError("PureState: norm " + std::to_string(norm) + " is not 1");
  }
}

PureState PureState::normalized(std::vector<Complex> amplitudes) {
  const double norm = std::sqrt(frobenius_sq(amplitudes));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("PureState: cannot normalise");
  for (auto& a : amplitudes) a /= norm;
  return PureState(std::move(amplitudes));
}

Complex inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DomainError("inner: dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  require_dim(dim_, "Operator");
  if (entries_.size() != dim_ * dim_) throw DomainError("Operator: entry count != dim^2");
  for (const auto& z : entries_) {
    if (!finite(z)) throw DomainError("Operator: non-finite entry");
  }
}

Operator Operator::zero(std::size_t dim) {
  return Operator(dim, std::vector<Complex>(dim * dim, Complex{0.0, 0.0}));
}

Operator Operator::identity(std::size_t dim) {
  Operator id = zero(dim);
  for (std::size_t i = 0; i < dim; ++i) id.at(i, i) = 1.0;
  return id;
}

Operator Operator::diagonal(std::span<const double> values) {
  Operator d = zero(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d.at(i, i) = values[i];
  return d;
}

Complex Operator::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Operator Operator::adjoint() const {
  Operator r = zero(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r.at(i, j) = std::conj((*this)(j, i));
  return r;
}

bool Operator::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

double Operator::max_abs_diff(const Operator& other) const {
  require_same_dim(*this, other, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k)
    m = std::max(m, std::abs(entries_[k] - other.entries_[k]));
  return m;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  for (auto& z : entries_) z *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator*");
  const std::size_t n = a.dim();
  Operator r = Operator::zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) r.at(i, j) += aik * b(k, j);
    }
  return r;
}

std::vector<Complex> Operator::apply_raw(std::span<const Complex> v) const {
  if (v.size() != dim_) throw DomainError("apply: dimension mismatch");
  std::vector<Complex> out(dim_, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

PureState Operator::apply(const PureState& v) const {
  return PureState::normalized(apply_raw(v.amplitudes()));
}

Complex trace_of_product(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "trace_of_product");
  const std::size_t n = a.dim();
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) t += a(i, k) * b(k, i);
  return t;
}

double expectation(const Operator& h, const PureState& v) {
  const auto hv = h.apply_raw(v.amplitudes());
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < v.dim(); ++i) s += std::conj(v[i]) * hv[i];
  return s.real();
}

// ---------------------------------------------------------------------------
// Povm

Povm::Povm(std::vector<Operator> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw DomainError("Povm: no elements");
  const std::size_t dim = elements_.front().dim();
  Operator total = Operator::zero(dim);
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const auto& e = elements_[k];
    if (e.dim() != dim) throw DomainError("Povm: elements differ in dimension");
    if (!e.is_hermitian(kPsdTol)) {
      throw DomainError("Povm: element " + std::to_string(k) + " is not Hermitian");
    }
    if (min_eigenvalue(e) < -kPsdTol) {
      throw DomainError("Povm: element " + std::to_string(k) + " is not positive semidefinite");
    }
    total += e;
  }
  if (total.max_abs_diff(Operator::identity(dim)) > kPsdTol) {
    throw DomainError("Povm: elements do not sum to the identity");
  }
}

// ---------------------------------------------------------------------------
// Quantum primitives

PureState bb84_state(int index) {
  const double h = std::numbers::sqrt2 / 2.0;
  switch (index) {
    case 1: return PureState({1.0, 0.0});
    case 2: return PureState({h, h});
    case 3: return PureState({0.0, 1.0});
    case 4: return PureState({h, -h});
    default:
      throw DomainError("bb84_state: index " + std::to_string(index) + " not in 1..4");
  }
}

Operator projector(const PureState& state) {
  const std::size_t n = state.dim();
  Operator p = Operator::zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.at(i, j) = state[i] * std::conj(state[j]);
  return p;
}

Operator tensor(const Operator& a, const Operator& b) {
  const std::size_t n = a.dim() * b.dim();
  if (n > kMaxDim) throw CapacityError("tensor: result dimension " + std::to_string(n) + " exceeds 16");
  Operator r = Operator::zero(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l)
          r.at(i * b.dim() + k, j * b.dim() + l) = aij * b(k, l);
    }
  return r;
}

PureState tensor(const PureState& a, const PureState& b) {
  const std::size_t n = a.dim() * b.dim();
  if (n > kMaxDim) throw CapacityError("tensor: result dimension " + std::to_string(n) + " exceeds 16");
  std::vector<Complex> amps(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < b.dim(); ++k) amps[i * b.dim() + k] = a[i] * b[k];
  return PureState::normalized(std::move(amps));
}

std::vector<double> born_probabilities(const Operator& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) throw DomainError("born_probabilities: dimension mismatch");
  std::vector<double> p(povm.size());
  double total = 0.0;
  for (std::size_t k = 0; k < povm.size(); ++k) {
    p[k] = trace_of_product(rho, povm[k]).real();
    if (p[k] < -kProbabilityTol) {
      throw NumericalError("born_probabilities: outcome " + std::to_string(k) +
                           " has probability " + std::to_string(p[k]));
    }
    p[k] = std::max(p[k], 0.0);
    total += p[k];
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    throw NumericalError("born_probabilities: total " + std::to_string(total) + " is not 1");
  }
  for (auto& x : p) x /= total;
  return p;
}

std::size_t sample_index(std::span<const double> probabilities, RandomSource& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) continue;
    acc += probabilities[k];
    last_nonzero = k;
    if (u < acc) return k;
  }
  return last_nonzero;
}

std::size_t born_sample(const Operator& rho, const Povm& povm, RandomSource& rng) {
  if (!rho.is_hermitian(kPsdTol)) throw DomainError("born_sample: rho is not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kPsdTol) {
    throw DomainError("born_sample: rho does not have unit trace");
  }
  if (min_eigenvalue(rho) < -kPsdTol) throw DomainError("born_sample: rho is not PSD");
  const auto p = born_probabilities(rho, povm);
  return sample_index(p, rng);
}

// ---------------------------------------------------------------------------
// Eigenvalues

Eigensystem hermitian_eigensystem(const Operator& h) {
  if (!h.is_hermitian(kPsdTol)) throw DomainError("eigensystem: operator is not Hermitian");
  const std::size_t n = h.dim();
  std::vector<Complex> a = h.entries();
  std::vector<Complex> v = Operator::identity(n).entries();
  auto A = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };
  auto V = [&](std::size_t i, std::size_t j) -> Complex& { return v[i * n + j]; };

  // Symmetrise the input so rounding in the lower triangle cannot bias the sweep.
  for (std::size_t i = 0; i < n; ++i) {
    A(i, i) = A(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex m = 0.5 * (A(i, j) + std::conj(A(j, i)));
      A(i, j) = m;
      A(j, i) = std::conj(m);
    }
  }

  const double threshold = 1e-13 * std::max(1.0, std::sqrt(frobenius_sq(a)));
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(A(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() >= threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = A(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;

        // Phase rotation on index q makes the (p, q) entry real and positive.
        const Complex phase = apq / mag;
        for (std::size_t k = 0; k < n; ++k) {
          A(q, k) *= phase;
          A(k, q) *= std::conj(phase);
          V(k, q) *= std::conj(phase);
        }

        // Real Jacobi rotation annihilating the now-real off-diagonal pair.
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = A(k, p);
          const Complex akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
          const Complex vkp = V(k, p);
          const Complex vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = A(p, k);
          const Complex aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = A(p, p).real();
        A(q, q) = A(q, q).real();
      }
    }
  }
  if (off_norm() >= threshold) throw NumericalError("eigensystem: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return A(x, x).real() < A(y, y).real(); });

  std::vector<double> values(n);
  Operator vectors = Operator::zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = A(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) vectors.at(i, k) = V(i, order[k]);
  }
  return Eigensystem{std::move(values), std::move(vectors)};
}

std::vector<double> hermitian_eigenvalues(const Operator& h) {
  if (h.dim() == 2) {
    if (!h.is_hermitian(kPsdTol)) throw DomainError("eigenvalues: operator is not Hermitian");
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
    return {mean - radius, mean + radius};
  }
  return hermitian_eigensystem(h).values;
}

double min_eigenvalue(const Operator& h) { return hermitian_eigenvalues(h).front(); }

namespace {

Operator spectral_map(const Operator& h, double (*f)(double)) {
  const auto es = hermitian_eigensystem(h);
  const std::size_t n = h.dim();
  Operator r = Operator::zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(es.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r.at(i, j) += fk * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  return r;
}

}  // namespace

Operator psd_sqrt(const Operator& h) {
  if (min_eigenvalue(h) < -kPsdTol) throw DomainError("psd_sqrt: operator is not PSD");
  return spectral_map(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

Operator inverse_sqrt(const Operator& h) {
  if (min_eigenvalue(h) <= 0.0) throw DomainError("inverse_sqrt: operator is not positive definite");
  return spectral_map(h, [](double x) { return 1.0 / std::sqrt(x); });
}

// ---------------------------------------------------------------------------
// Teleportation

const std::vector<PureState>& bell_states() {
  static const std::vector<PureState> states = [] {
    const double h = std::numbers::sqrt2 / 2.0;
    return std::vector<PureState>{
        PureState({h, 0.0, 0.0, h}),   // Phi+
        PureState({h, 0.0, 0.0, -h}),  // Phi-
        PureState({0.0, h, h, 0.0}),   // Psi+
        PureState({0.0, h, -h, 0.0}),  // Psi-
    };
  }();
  return states;
}

PureState singlet_state() { return bell_states()[3]; }

Operator teleport_byproduct(int bell_outcome) {
  if (bell_outcome < 0 || bell_outcome > 3) throw DomainError("teleport_byproduct: outcome not in 0..3");
  // (<beta|_{in,B} (x) I_A)(|psi>_in (x) |singlet>_{BA}) = U|psi> / 2.
  const PureState& beta = bell_states()[static_cast<std::size_t>(bell_outcome)];
  const PureState singlet = singlet_state();
  Operator u = Operator::zero(2);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t a = 0; a < 2; ++a) {
      Complex s{0.0, 0.0};
      for (std::size_t b = 0; b < 2; ++b) s += std::conj(beta[a * 2 + b]) * singlet[b * 2 + c];
      u.at(c, a) = 2.0 * s;
    }
  return u;
}

TeleportResult teleport(const PureState& state, RandomSource& rng) {
  if (state.dim() != 2) throw DomainError("teleport: input must be a qubit");
  // Qubit order (input, sender half B, receiver half A), input most significant.
  const PureState joint = tensor(state, singlet_state());
  const auto& bells = bell_states();

  std::vector<std::vector<Complex>> branches(4, std::vector<Complex>(2));
  std::vector<double> probabilities(4);
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t c = 0; c < 2; ++c) {
      Complex s{0.0, 0.0};
      for (std::size_t ab = 0; ab < 4; ++ab) s += std::conj(bells[m][ab]) * joint[ab * 2 + c];
      branches[m][c] = s;
    }
    probabilities[m] = frobenius_sq(branches[m]);
  }
  const auto m = sample_index(probabilities, rng);
  PureState received = PureState::normalized(branches[m]);
  Operator u = teleport_byproduct(static_cast<int>(m));
  PureState recovered = u.adjoint().apply(received);
  return TeleportResult{static_cast<int>(m), std::move(u), std::move(received), std::move(recovered)};
}

PureState teleport_demo(const PureState& state, RandomSource& rng) {
  return teleport(state, rng).recovered;
}

// ---------------------------------------------------------------------------
// Random instances

PureState random_state(std::size_t dim, RandomSource& rng) {
  std::vector<Complex> amps(dim);
  for (auto& a : amps) a = Complex{rng.normal(), rng.normal()};
  return PureState::normalized(std::move(amps));
}

Operator random_hermitian(std::size_t dim, RandomSource& rng) {
  Operator h = Operator::zero(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    h.at(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < dim; ++j) {
      const Complex z{rng.normal(), rng.normal()};
      h.at(i, j) = z;
      h.at(j, i) = std::conj(z);
    }
  }
  return h;
}

Operator random_psd(std::size_t dim, RandomSource& rng) {
  Operator g = Operator::zero(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g.at(i, j) = Complex{rng.normal(), rng.normal()};
  Operator p = g.adjoint() * g;
  // Force exact Hermiticity; the product is Hermitian up to rounding.
  return 0.5 * (p + p.adjoint());
}

Povm random_povm(std::size_t dim, std::size_t outcomes, RandomSource& rng) {
  std::vector<Operator> raw;
  raw.reserve(outcomes);
  Operator total = Operator::zero(dim);
  for (std::size_t k = 0; k < outcomes; ++k) {
    raw.push_back(random_psd(dim, rng));
    total += raw.back();
  }
  const Operator w = inverse_sqrt(total);
  std::vector<Operator> elements;
  elements.reserve(outcomes);
  for (const auto& r : raw) {
    Operator e = w * r * w;
    elements.push_back(0.5 * (e + e.adjoint()));
  }
  return Povm(std::move(elements));
}

}  // namespace rqbc
