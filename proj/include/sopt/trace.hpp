#pragma once

#include <cstdint>
#include <vector>

#include "sopt/natural.hpp"

namespace sopt {

struct QueryEvent {
  Natural step = 0;  // 1-based index of the query step
  Natural query_length = 0;
  Natural answer_length = 0;
  bool operator==(const QueryEvent&) const = default;
};

/// Event log of one run. Steps not listed in `queries` are plain steps; the
/// final step is a halt event when `halted` is set. time == number of events.
struct Trace {
  Natural input_length = 0;
  Natural time = 0;
  bool halted = false;
  std::vector<QueryEvent> queries;
  bool operator==(const Trace&) const = default;
};

}  // namespace sopt
