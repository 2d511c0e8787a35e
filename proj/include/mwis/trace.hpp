#pragma once

#include <algorithm>
#include <cstdint>

namespace mwis {

// Cost summary of one synchronous execution. Composing two runs that happen
// one after the other adds rounds and message counts; the word bound is the
// max since it is a per-edge-per-round quantity.
struct RoundTrace {
  std::int64_t rounds = 0;
  std::int64_t max_words = 0;
  std::int64_t total_messages = 0;

  RoundTrace& operator+=(const RoundTrace& o) {
    rounds += o.rounds;
    max_words = std::max(max_words, o.max_words);
    total_messages += o.total_messages;
    return *this;
  }
  friend RoundTrace operator+(RoundTrace a, const RoundTrace& b) { return a += b; }
  bool operator==(const RoundTrace&) const = default;
};

}  // namespace mwis
