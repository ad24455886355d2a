#pragma once

// Honest parties of the two-wing relativistic commitment: Bob prepares BB84
// states at P, Alice measures them in the basis named by her bit and relays
// the pad-encrypted outcomes to her agents at Q0 and Q1, who unveil to Bob's
// agents there. Bob compares both wings at a point in their joint future.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rqbc/qcore.hpp"
#include "rqbc/random.hpp"
#include "rqbc/spacetime.hpp"

namespace rqbc {

enum class Basis { Computational, Hadamard };

/// Bit 0 -> {|0>,|1>}, bit 1 -> {|+>,|->}.
Basis basis_for_bit(int bit);

/// BB84 indices lying in `basis`: {1,3} or {2,4}.
bool index_in_basis(int bb84_index, Basis basis);

/// Outcome an honest measurement in the index's own basis returns:
/// 0 for |0>/|+>, 1 for |1>/|->.
int eigen_outcome(int bb84_index);

struct PreparedStates {
  std::vector<int> indices;  // Bob's secret record, 1..4
  std::vector<PureState> states;

  std::size_t size() const { return indices.size(); }
};

/// n i.i.d. uniform BB84 indices, without building states.
std::vector<int> draw_bb84_indices(int n, RandomSource& rng);

PreparedStates bob_prepare(int n, RandomSource& rng);

enum class Outcome : std::uint8_t { Zero = 0, One = 1, Lost = 2 };

using OutcomeRecord = std::vector<Outcome>;

struct NoiseModel {
  double depolarizing = 0.0;  // p: rho -> (1-p) rho + p I/2
};

struct LossModel {
  double loss = 0.0;  // f: each state lost independently
};

/// Two-element projective measurement for the bit's basis.
const Povm& basis_povm(Basis basis);

/// Measures each state in the basis for `bit` after the depolarizing channel.
/// Lost positions are drawn first and never measured.
OutcomeRecord alice_commit(int bit, std::span<const PureState> states, RandomSource& rng,
                           const NoiseModel& noise = {}, const LossModel& loss = {});

/// One byte per position: 0, 1 or 2 (lost).
std::vector<std::uint8_t> encode_record(const OutcomeRecord& record);
OutcomeRecord decode_record(std::span<const std::uint8_t> bytes);

enum class Wing { Q0, Q1 };

std::string to_string(Wing w);

/// One-time pad between two agents along a fixed route.
class PadChannel {
 public:
  PadChannel(std::vector<std::uint8_t> pad, std::string sender, std::string receiver,
             EventPoint emit, EventPoint receive);

  /// Fresh uniform pad of `length` bytes.
  static PadChannel random(std::size_t length, std::string sender, std::string receiver,
                           EventPoint emit, EventPoint receive, RandomSource& rng);

  const std::vector<std::uint8_t>& pad() const { return pad_; }
  const std::string& sender() const { return sender_; }
  const std::string& receiver() const { return receiver_; }
  const EventPoint& emit_point() const { return emit_; }
  const EventPoint& receive_point() const { return receive_; }
  bool consumed() const { return consumed_; }

  /// XOR with the pad and mark it used. ProtocolFault on reuse or when the
  /// pad is shorter than the message.
  std::vector<std::uint8_t> encrypt(std::span<const std::uint8_t> plaintext);
  /// Receiver side; does not consume.
  std::vector<std::uint8_t> decrypt(std::span<const std::uint8_t> ciphertext) const;

 private:
  std::vector<std::uint8_t> pad_;
  std::string sender_;
  std::string receiver_;
  EventPoint emit_;
  EventPoint receive_;
  bool consumed_ = false;
};

struct RelayResult {
  DeliveryResult delivery;
  std::vector<std::uint8_t> ciphertext;
  std::optional<OutcomeRecord> decrypted;  // empty when delivery was refused
};

/// Encrypts the record, checks the route against causality and decrypts at
/// the far end. The attempt is appended to `log` when one is given.
RelayResult relay_outcomes(const OutcomeRecord& record, PadChannel& channel,
                           DeliveryLog* log = nullptr);

struct UnveilingClaim {
  Wing wing;
  int claimed_bit;
  OutcomeRecord outcomes;
  EventPoint revealed_at;
};

enum class VerdictKind { Accept, RejectWingMismatch, RejectInconsistent, RejectTiming };

std::string to_string(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::Accept;
  double error_fraction_q0 = 0.0;
  double error_fraction_q1 = 0.0;
  double loss_fraction = 0.0;
  std::size_t checked_positions = 0;
  std::vector<std::size_t> mismatch_positions;  // wing disagreements
  std::vector<std::size_t> error_positions;     // in-basis outcome errors

  bool accepted() const { return kind == VerdictKind::Accept; }
};

/// Per-wing consistency of a record with the prepared indices for one bit.
struct ConsistencyReport {
  std::size_t checked = 0;  // non-lost positions prepared in the claimed basis
  std::size_t errors = 0;
  double error_fraction = 0.0;  // 0 when nothing is checked
  bool passed = false;          // error_fraction <= tolerance
  std::vector<std::size_t> error_positions;
};

ConsistencyReport consistency_check(int bit, const OutcomeRecord& outcomes,
                                    std::span<const int> prepared_indices, double tolerance);

/// Checks in order: identical claims on both wings, loss fraction within
/// max_loss, then in-basis error fraction within tolerance.
Verdict bob_verify(const UnveilingClaim& claim0, const UnveilingClaim& claim1,
                   const PreparedStates& prepared, double tolerance, double max_loss);

/// As above, first rejecting with RejectTiming if either claim was not
/// revealed at its own wing's point.
Verdict bob_verify(const UnveilingClaim& claim0, const UnveilingClaim& claim1,
                   const PreparedStates& prepared, double tolerance, double max_loss,
                   const Geometry& geometry);

struct RunConfig {
  int n = 100;
  int bit = 0;
  double separation = 1.0;
  double noise = 0.0;
  double loss = 0.0;
  double tolerance = 0.0;
  double max_loss = 0.0;
  std::uint64_t seed = 2012;

  /// DomainError on any out-of-range field.
  void validate() const;
};

struct Transcript {
  RunConfig config;
  Geometry geometry;
  PreparedStates prepared;
  OutcomeRecord outcomes;
  std::vector<std::uint8_t> ciphertext_q0;
  std::vector<std::uint8_t> ciphertext_q1;
  std::vector<UnveilingClaim> claims;
  Verdict verdict;
  std::vector<LoggedMessage> events;
};

/// prepare -> commit -> relay to both wings -> unveil -> verify, logging
/// every classical message with its emission and reception events.
Transcript run_honest(const RunConfig& config, RandomSource& rng);

/// 64-bit FNV-1a, hex encoded.
std::string payload_digest(std::span<const std::uint8_t> payload);

/// One line per message: sender receiver emit receive digest.
std::string transcript_text(const Transcript& t);

}  // namespace rqbc
