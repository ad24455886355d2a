#pragma once

// Flat Minkowski geometry in units where signals travel at speed 1, and a
// message layer that refuses deliveries outside the sender's future light cone.

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace rqbc {

/// Coordinates in the agreed frame, (x, y, z, t) order.
struct EventPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;

  /// Throws DomainError on non-finite coordinates.
  static EventPoint at(double x, double y, double z, double t);

  friend bool operator==(const EventPoint&, const EventPoint&) = default;
};

std::string to_string(const EventPoint& e);

enum class CausalRelation { CausallyPrecedes, CausallyFollows, Spacelike, Coincident };

std::string to_string(CausalRelation r);

/// Intervals within this distance of zero count as lightlike.
inline constexpr double kLightlikeTol = 1e-12;

/// (dt)^2 - (dx)^2 - (dy)^2 - (dz)^2
double interval(const EventPoint& a, const EventPoint& b);

/// Light-cone order of b relative to a. Lightlike separation is causal.
CausalRelation causal_relation(const EventPoint& a, const EventPoint& b);

/// a == b or a causally precedes b.
bool causally_reaches(const EventPoint& a, const EventPoint& b);

/// P at the origin, Q0 = (x,0,0,x), Q1 = (-x,0,0,x).
struct Geometry {
  double separation;
  EventPoint p;
  EventPoint q0;
  EventPoint q1;

  /// (0, 0, 0, 2x): in the causal future of both Q0 and Q1.
  EventPoint joint_future() const;
};

/// Builds and checks the standard configuration; x must be positive.
Geometry standard_geometry(double x);

struct Message {
  std::string sender;
  std::string receiver;
  std::string label;
  std::vector<std::uint8_t> payload;
};

struct DeliveryResult {
  bool delivered = false;
  CausalRelation relation = CausalRelation::Coincident;
};

/// Delivered iff the reception event is the emission event or lies in its
/// causal future. A refused delivery is a result, not an exception; an
/// unnamed sender or receiver is a DomainError.
DeliveryResult deliver(const Message& message, const EventPoint& emitted_at,
                       const EventPoint& received_at);

struct LoggedMessage {
  Message message;
  EventPoint emitted_at;
  EventPoint received_at;
  DeliveryResult result;
};

/// Append-only record of every delivery attempt. Appends are serialised.
class DeliveryLog {
 public:
  DeliveryLog() = default;
  DeliveryLog(const DeliveryLog& other);
  DeliveryLog& operator=(const DeliveryLog& other);

  /// deliver() and record the attempt whatever the outcome.
  DeliveryResult send(Message message, const EventPoint& emitted_at, const EventPoint& received_at);

  std::vector<LoggedMessage> entries() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::vector<LoggedMessage> entries_;
};

}  // namespace rqbc
