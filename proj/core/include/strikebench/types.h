#ifndef STRIKEBENCH_TYPES_H_
#define STRIKEBENCH_TYPES_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace strikebench {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
// Signed so that window arithmetic (t - w) never wraps.
using TimeIndex = std::int64_t;

/// One timestamped fact (s, r, o, t) in integer-id space.
struct Quadruple {
  EntityId subject = 0;
  RelationId relation = 0;
  EntityId object = 0;
  TimeIndex timestamp = 0;

  friend auto operator<=>(const Quadruple&, const Quadruple&) = default;
};

/// Which side of a test fact is being predicted. `kTail` asks (s, r, ?, t);
/// `kHead` asks (?, r, o, t) and is answered through the inverse fact.
enum class Direction : std::uint8_t { kTail, kHead };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

/// The element of an event replaced when forming peer events.
enum class Element : std::uint8_t { kSubject, kObject, kRelation };

std::string_view to_string(Element e);

/// Identifies one evaluated query: a row of a split and a direction.
struct QueryKey {
  std::size_t query_index = 0;
  Direction direction = Direction::kTail;

  friend auto operator<=>(const QueryKey&, const QueryKey&) = default;
};

struct QueryKeyHash {
  std::size_t operator()(const QueryKey& k) const noexcept {
    return std::hash<std::size_t>{}(k.query_index * 2 +
                                    (k.direction == Direction::kHead ? 1 : 0));
  }
};

/// Grounding window. An empty optional means the full history before t.
using Window = std::optional<TimeIndex>;

inline TimeIndex window_start(const Window& w, TimeIndex query_time) {
  return w ? query_time - *w : std::numeric_limits<TimeIndex>::min();
}

}  // namespace strikebench

#endif  // STRIKEBENCH_TYPES_H_
