#include "rqbc/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rqbc/errors.hpp"

namespace rqbc {

Basis basis_for_bit(int bit) {
  if (bit == 0) return Basis::Computational;
  if (bit == 1) return Basis::Hadamard;
  throw DomainError("basis_for_bit: bit must be 0 or 1");
}

bool index_in_basis(int bb84_index, Basis basis) {
  const bool computational = bb84_index == 1 || bb84_index == 3;
  return basis == Basis::Computational ? computational : !computational;
}

int eigen_outcome(int bb84_index) {
  switch (bb84_index) {
    case 1:
    case 2: return 0;
    case 3:
    case 4: return 1;
    default: throw DomainError("eigen_outcome: index not in 1..4");
  }
}

std::vector<int> draw_bb84_indices(int n, RandomSource& rng) {
  if (n < 1) throw DomainError("bob_prepare: n must be positive");
  std::vector<int> indices(static_cast<std::size_t>(n));
  for (auto& i : indices) i = static_cast<int>(rng.uniform_int(1, 4));
  return indices;
}

PreparedStates bob_prepare(int n, RandomSource& rng) {
  PreparedStates prepared;
  prepared.indices = draw_bb84_indices(n, rng);
  prepared.states.reserve(prepared.indices.size());
  for (int i : prepared.indices) prepared.states.push_back(bb84_state(i));
  return prepared;
}

const Povm& basis_povm(Basis basis) {
  static const Povm computational({projector(bb84_state(1)), projector(bb84_state(3))});
  static const Povm hadamard({projector(bb84_state(2)), projector(bb84_state(4))});
  return basis == Basis::Computational ? computational : hadamard;
}

OutcomeRecord alice_commit(int bit, std::span<const PureState> states, RandomSource& rng,
                           const NoiseModel& noise, const LossModel& loss) {
  const Povm& povm = basis_povm(basis_for_bit(bit));
  const double p = noise.depolarizing;
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("alice_commit: noise must lie in [0, 1]");
  if (!(loss.loss >= 0.0 && loss.loss < 1.0)) throw DomainError("alice_commit: loss must lie in [0, 1)");
  const Operator mixed = 0.5 * Operator::identity(2);

  OutcomeRecord record;
  record.reserve(states.size());
  for (const auto& s : states) {
    if (s.dim() != 2) throw DomainError("alice_commit: states must be qubits");
    if (loss.loss > 0.0 && rng.bernoulli(loss.loss)) {
      record.push_back(Outcome::Lost);
      continue;
    }
    Operator rho = projector(s);
    if (p > 0.0) rho = (1.0 - p) * rho + p * mixed;
    record.push_back(born_sample(rho, povm, rng) == 0 ? Outcome::Zero : Outcome::One);
  }
  return record;
}

std::vector<std::uint8_t> encode_record(const OutcomeRecord& record) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(record.size());
  for (auto o : record) bytes.push_back(static_cast<std::uint8_t>(o));
  return bytes;
}

OutcomeRecord decode_record(std::span<const std::uint8_t> bytes) {
  OutcomeRecord record;
  record.reserve(bytes.size());
  for (auto b : bytes) {
    if (b > 2) throw DomainError("decode_record: byte is not an outcome");
    record.push_back(static_cast<Outcome>(b));
  }
  return record;
}

std::string to_string(Wing w) { return w == Wing::Q0 ? "Q0" : "Q1"; }

PadChannel::PadChannel(std::vector<std::uint8_t> pad, std::string sender, std::string receiver,
                       EventPoint emit, EventPoint receive)
    : pad_(std::move(pad)),
      sender_(std::move(sender)),
      receiver_(std::move(receiver)),
      emit_(emit),
      receive_(receive) {}

PadChannel PadChannel::random(std::size_t length, std::string sender, std::string receiver,
                              EventPoint emit, EventPoint receive, RandomSource& rng) {
  std::vector<std::uint8_t> pad(length);
  for (auto& b : pad) b = rng.byte();
  return PadChannel(std::move(pad), std::move(sender), std::move(receiver), emit, receive);
}

std::vector<std::uint8_t> PadChannel::encrypt(std::span<const std::uint8_t> plaintext) {
  if (consumed_) throw ProtocolFault("PadChannel: one-time pad already used");
  if (plaintext.size() > pad_.size()) throw ProtocolFault("PadChannel: pad shorter than message");
  consumed_ = true;
  std::vector<std::uint8_t> out(plaintext.size());
  for (std::size_t i = 0; i < plaintext.size(); ++i) out[i] = plaintext[i] ^ pad_[i];
  return out;
}

std::vector<std::uint8_t> PadChannel::decrypt(std::span<const std::uint8_t> ciphertext) const {
  if (ciphertext.size() > pad_.size()) throw ProtocolFault("PadChannel: pad shorter than message");
  std::vector<std::uint8_t> out(ciphertext.size());
  for (std::size_t i = 0; i < ciphertext.size(); ++i) out[i] = ciphertext[i] ^ pad_[i];
  return out;
}

RelayResult relay_outcomes(const OutcomeRecord& record, PadChannel& channel, DeliveryLog* log) {
  RelayResult result;
  result.ciphertext = channel.encrypt(encode_record(record));
  Message msg{channel.sender(), channel.receiver(), "pad-encrypted-outcomes", result.ciphertext};
  result.delivery = log ? log->send(std::move(msg), channel.emit_point(), channel.receive_point())
                        : deliver(msg, channel.emit_point(), channel.receive_point());
  if (result.delivery.delivered) result.decrypted = decode_record(channel.decrypt(result.ciphertext));
  return result;
}

std::string to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Accept: return "Accept";
    case VerdictKind::RejectWingMismatch: return "RejectWingMismatch";
    case VerdictKind::RejectInconsistent: return "RejectInconsistent";
    case VerdictKind::RejectTiming: return "RejectTiming";
  }
  return "?";
}

ConsistencyReport consistency_check(int bit, const OutcomeRecord& outcomes,
                                    std::span<const int> prepared_indices, double tolerance) {
  if (outcomes.size() != prepared_indices.size()) {
    throw DomainError("consistency_check: record length differs from prepared count");
  }
  const Basis basis = basis_for_bit(bit);
  ConsistencyReport r;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (outcomes[k] == Outcome::Lost) continue;
    const int idx = prepared_indices[k];
    if (!index_in_basis(idx, basis)) continue;
    ++r.checked;
    if (static_cast<int>(outcomes[k]) != eigen_outcome(idx)) {
      ++r.errors;
      r.error_positions.push_back(k);
    }
  }
  r.error_fraction = r.checked == 0 ? 0.0 : static_cast<double>(r.errors) / static_cast<double>(r.checked);
  r.passed = r.error_fraction <= tolerance;
  return r;
}

Verdict bob_verify(const UnveilingClaim& claim0, const UnveilingClaim& claim1,
                   const PreparedStates& prepared, double tolerance, double max_loss) {
  if (claim0.wing != Wing::Q0 || claim1.wing != Wing::Q1) {
    throw DomainError("bob_verify: claims must come from Q0 and Q1 respectively");
  }
  if (!(tolerance >= 0.0 && tolerance < 1.0)) throw DomainError("bob_verify: tolerance must lie in [0, 1)");
  if (!(max_loss >= 0.0 && max_loss < 1.0)) throw DomainError("bob_verify: max_loss must lie in [0, 1)");
  const std::size_t n = prepared.size();
  if (claim0.outcomes.size() != n || claim1.outcomes.size() != n) {
    throw DomainError("bob_verify: record length differs from prepared count");
  }

  Verdict v;
  for (std::size_t k = 0; k < n; ++k) {
    if (claim0.outcomes[k] != claim1.outcomes[k]) v.mismatch_positions.push_back(k);
  }
  if (claim0.claimed_bit != claim1.claimed_bit || !v.mismatch_positions.empty()) {
    v.kind = VerdictKind::RejectWingMismatch;
    return v;
  }

  std::size_t lost = 0;
  for (auto o : claim0.outcomes) lost += o == Outcome::Lost ? 1 : 0;
  v.loss_fraction = n == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(n);
  if (v.loss_fraction > max_loss) {
    v.kind = VerdictKind::RejectInconsistent;
    return v;
  }

  const auto c0 = consistency_check(claim0.claimed_bit, claim0.outcomes, prepared.indices, tolerance);
  const auto c1 = consistency_check(claim1.claimed_bit, claim1.outcomes, prepared.indices, tolerance);
  v.error_fraction_q0 = c0.error_fraction;
  v.error_fraction_q1 = c1.error_fraction;
  v.checked_positions = c0.checked;
  v.error_positions = c0.error_positions;
  v.kind = c0.passed && c1.passed ? VerdictKind::Accept : VerdictKind::RejectInconsistent;
  return v;
}

Verdict bob_verify(const UnveilingClaim& claim0, const UnveilingClaim& claim1,
                   const PreparedStates& prepared, double tolerance, double max_loss,
                   const Geometry& geometry) {
  if (!(claim0.revealed_at == geometry.q0) || !(claim1.revealed_at == geometry.q1)) {
    Verdict v;
    v.kind = VerdictKind::RejectTiming;
    return v;
  }
  return bob_verify(claim0, claim1, prepared, tolerance, max_loss);
}

void RunConfig::validate() const {
  if (n < 1) throw DomainError("config: n must be positive");
  if (bit != 0 && bit != 1) throw DomainError("config: bit must be 0 or 1");
  if (!(separation > 0.0) || !std::isfinite(separation)) throw DomainError("config: separation must be positive");
  if (!(noise >= 0.0 && noise <= 1.0)) throw DomainError("config: noise must lie in [0, 1]");
  if (!(loss >= 0.0 && loss < 1.0)) throw DomainError("config: loss must lie in [0, 1)");
  if (!(tolerance >= 0.0 && tolerance < 1.0)) throw DomainError("config: tolerance must lie in [0, 1)");
  if (!(max_loss >= 0.0 && max_loss < 1.0)) throw DomainError("config: max_loss must lie in [0, 1)");
}

namespace {

constexpr const char* kAliceP = "Alice@P";
constexpr const char* kAliceQ0 = "Alice@Q0";
constexpr const char* kAliceQ1 = "Alice@Q1";
constexpr const char* kBobP = "Bob@P";
constexpr const char* kBobQ0 = "Bob@Q0";
constexpr const char* kBobQ1 = "Bob@Q1";
constexpr const char* kBobCompare = "Bob@compare";

std::vector<std::uint8_t> claim_payload(const UnveilingClaim& c) {
  std::vector<std::uint8_t> bytes{static_cast<std::uint8_t>(c.claimed_bit)};
  const auto rec = encode_record(c.outcomes);
  bytes.insert(bytes.end(), rec.begin(), rec.end());
  return bytes;
}

}  // namespace

Transcript run_honest(const RunConfig& config, RandomSource& rng) {
  config.validate();
  const Geometry geometry = standard_geometry(config.separation);
  DeliveryLog log;

  PreparedStates prepared = bob_prepare(config.n, rng);
  OutcomeRecord outcomes = alice_commit(config.bit, prepared.states, rng, NoiseModel{config.noise},
                                        LossModel{config.loss});

  // Which positions produced no result is fixed at P, before any unveiling.
  std::vector<std::uint8_t> loss_report;
  loss_report.reserve(outcomes.size());
  for (auto o : outcomes) loss_report.push_back(o == Outcome::Lost ? 1 : 0);
  log.send(Message{kAliceP, kBobP, "loss-report", std::move(loss_report)}, geometry.p, geometry.p);

  PadChannel pad0 = PadChannel::random(outcomes.size(), kAliceP, kAliceQ0, geometry.p, geometry.q0, rng);
  PadChannel pad1 = PadChannel::random(outcomes.size(), kAliceP, kAliceQ1, geometry.p, geometry.q1, rng);
  const RelayResult relay0 = relay_outcomes(outcomes, pad0, &log);
  const RelayResult relay1 = relay_outcomes(outcomes, pad1, &log);

  Transcript t{config, geometry, std::move(prepared), std::move(outcomes), relay0.ciphertext,
               relay1.ciphertext, {}, Verdict{}, {}};

  if (!relay0.delivery.delivered || !relay1.delivery.delivered) {
    t.verdict.kind = VerdictKind::RejectTiming;
    t.events = log.entries();
    return t;
  }

  UnveilingClaim claim0{Wing::Q0, config.bit, *relay0.decrypted, geometry.q0};
  UnveilingClaim claim1{Wing::Q1, config.bit, *relay1.decrypted, geometry.q1};
  log.send(Message{kAliceQ0, kBobQ0, "unveil", claim_payload(claim0)}, geometry.q0, geometry.q0);
  log.send(Message{kAliceQ1, kBobQ1, "unveil", claim_payload(claim1)}, geometry.q1, geometry.q1);
  log.send(Message{kBobQ0, kBobCompare, "forward-claim", claim_payload(claim0)}, geometry.q0,
           geometry.joint_future());
  log.send(Message{kBobQ1, kBobCompare, "forward-claim", claim_payload(claim1)}, geometry.q1,
           geometry.joint_future());

  t.verdict = bob_verify(claim0, claim1, t.prepared, config.tolerance, config.max_loss, geometry);
  t.claims = {std::move(claim0), std::move(claim1)};
  t.events = log.entries();
  return t;
}

std::string payload_digest(std::span<const std::uint8_t> payload) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : payload) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string transcript_text(const Transcript& t) {
  std::ostringstream os;
  for (const auto& e : t.events) {
    os << e.message.sender << ' ' << e.message.receiver << ' ' << to_string(e.emitted_at) << ' '
       << to_string(e.received_at) << ' ' << payload_digest(e.message.payload) << '\n';
  }
  return os.str();
}

}  // namespace rqbc
