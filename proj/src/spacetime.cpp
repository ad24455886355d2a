#include "rqbc/spacetime.hpp"

#include <cmath>
#include <sstream>

#include "rqbc/errors.hpp"

namespace rqbc {

EventPoint EventPoint::at(double x, double y, double z, double t) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) || !std::isfinite(t)) {
    throw DomainError("EventPoint: coordinates must be finite");
  }
  return EventPoint{x, y, z, t};
}

std::string to_string(const EventPoint& e) {
  std::ostringstream os;
  os.precision(10);
  os << '(' << e.x << ',' << e.y << ',' << e.z << ',' << e.t << ')';
  return os.str();
}

std::string to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::CausallyPrecedes: return "CausallyPrecedes";
    case CausalRelation::CausallyFollows: return "CausallyFollows";
    case CausalRelation::Spacelike: return "Spacelike";
    case CausalRelation::Coincident: return "Coincident";
  }
  return "?";
}

double interval(const EventPoint& a, const EventPoint& b) {
  const double dt = b.t - a.t;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  return dt * dt - dx * dx - dy * dy - dz * dz;
}

CausalRelation causal_relation(const EventPoint& a, const EventPoint& b) {
  if (a == b) return CausalRelation::Coincident;
  const double s = interval(a, b);
  if (s < -kLightlikeTol) return CausalRelation::Spacelike;
  // Timelike or lightlike. Equal times with zero interval only happen for
  // coincident points, which are handled above.
  if (b.t > a.t) return CausalRelation::CausallyPrecedes;
  if (b.t < a.t) return CausalRelation::CausallyFollows;
  return CausalRelation::Spacelike;
}

bool causally_reaches(const EventPoint& a, const EventPoint& b) {
  const auto r = causal_relation(a, b);
  return r == CausalRelation::Coincident || r == CausalRelation::CausallyPrecedes;
}

EventPoint Geometry::joint_future() const { return EventPoint{0.0, 0.0, 0.0, 2.0 * separation}; }

Geometry standard_geometry(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("standard_geometry: separation must be positive");
  Geometry g{x, EventPoint{}, EventPoint::at(x, 0.0, 0.0, x), EventPoint::at(-x, 0.0, 0.0, x)};
  if (causal_relation(g.p, g.q0) != CausalRelation::CausallyPrecedes ||
      causal_relation(g.p, g.q1) != CausalRelation::CausallyPrecedes ||
      causal_relation(g.q0, g.q1) != CausalRelation::Spacelike) {
    throw InconsistencyError("standard_geometry: configuration violates its invariants");
  }
  return g;
}

DeliveryResult deliver(const Message& message, const EventPoint& emitted_at,
                       const EventPoint& received_at) {
  if (message.sender.empty() || message.receiver.empty()) {
    throw DomainError("deliver: message needs a sender and a receiver");
  }
  const auto relation = causal_relation(emitted_at, received_at);
  const bool ok = relation == CausalRelation::CausallyPrecedes || relation == CausalRelation::Coincident;
  return DeliveryResult{ok, relation};
}

DeliveryLog::DeliveryLog(const DeliveryLog& other) : entries_(other.entries()) {}

DeliveryLog& DeliveryLog::operator=(const DeliveryLog& other) {
  if (this != &other) {
    auto copy = other.entries();
    std::lock_guard lock(mutex_);
    entries_ = std::move(copy);
  }
  return *this;
}

DeliveryResult DeliveryLog::send(Message message, const EventPoint& emitted_at,
                                 const EventPoint& received_at) {
  const DeliveryResult result = deliver(message, emitted_at, received_at);
  std::lock_guard lock(mutex_);
  entries_.push_back(LoggedMessage{std::move(message), emitted_at, received_at, result});
  return result;
}

std::vector<LoggedMessage> DeliveryLog::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::size_t DeliveryLog::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace rqbc
