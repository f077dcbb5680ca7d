#include "strikebench/types.h"

#include <string>

#include "strikebench/error.h"

namespace strikebench {

std::string_view to_string(Direction d) {
  return d == Direction::kTail ? "tail" : "head";
}

Direction parse_direction(std::string_view text) {
  if (text == "tail") return Direction::kTail;
  if (text == "head") return Direction::kHead;
  throw ValidationError("unknown direction '" + std::string(text) +
                        "' (expected head or tail)");
}

std::string_view to_string(Element e) {
  switch (e) {
    case Element::kSubject:
      return "subject";
    case Element::kObject:
      return "object";
    case Element::kRelation:
      return "relation";
  }
  return "?";
}

}  // namespace strikebench
