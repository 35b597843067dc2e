#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eos/order_term.hpp"

namespace eos {

// One realized block of a sum: where it sits in the term, when it first
// appears, its anchors, and the number of interior points it contributes at
// each stage from `first_stage` on. The overhangs count, at the last stage,
// the interior points lying in the class of the entry anchor (l) and of the
// exit anchor (g).
struct BlockRecord {
  Address path;
  int first_stage = 1;
  std::string anchor_in;
  std::string anchor_out;
  std::vector<std::size_t> sizes;
  std::size_t overhang_in = 0;
  std::size_t overhang_out = 0;
};

template <class Point>
struct ConstructionTrace {
  std::unordered_map<Point, Address> addresses;
  std::vector<std::pair<Address, Point>> anchors;
  std::vector<BlockRecord> blocks;
  // Per stage: 2 endpoints + the interior sizes of the top-level pieces.
  std::vector<std::size_t> predicted_sizes;
};

}  // namespace eos
