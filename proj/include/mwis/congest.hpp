#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "mwis/graph.hpp"
#include "mwis/trace.hpp"
#include "mwis/util.hpp"

namespace mwis {

// One O(log n)-bit message word: either a node identifier (or any small
// integer: tags, counters, colors) or one weight value.
struct Word {
  enum class Kind : std::uint8_t { Id, Weight };
  Kind kind;
  union {
    NodeId i;
    double f;
  };

  static Word id(NodeId v) {
    Word w;
    w.kind = Kind::Id;
    w.i = v;
    return w;
  }
  static Word wt(double v) {
    Word w;
    w.kind = Kind::Weight;
    w.f = v;
    return w;
  }
  NodeId as_id() const {
    ensure(kind == Kind::Id, "message word is not an identifier");
    return i;
  }
  double as_wt() const {
    ensure(kind == Kind::Weight, "message word is not a weight");
    return f;
  }
  bool operator==(const Word& o) const {
    if (kind != o.kind) return false;
    return kind == Kind::Id ? i == o.i : f == o.f;
  }
};

using Message = boost::container::small_vector<Word, 8>;

// A message delivered this round, tagged with the local port it arrived on.
struct Arrival {
  std::size_t port;
  Message payload;
};

enum class StepOrder { forward, reverse, shuffled };

struct EngineOptions {
  std::int64_t word_budget = 8;
  std::int64_t round_cap = -1;  // -1 means 10*n + 1'000'000
  StepOrder step_order = StepOrder::forward;
  std::uint64_t shuffle_seed = 0;
};

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExceeded : EngineError {
  std::int64_t round;
  NodeId from, to;
  std::int64_t words, budget;
  BudgetExceeded(std::int64_t r, NodeId u, NodeId v, std::int64_t got, std::int64_t limit)
      : EngineError("word budget exceeded in round " + std::to_string(r) + " on edge (" +
                    std::to_string(u) + ", " + std::to_string(v) + "): " + std::to_string(got) +
                    " words > budget " + std::to_string(limit)),
        round(r), from(u), to(v), words(got), budget(limit) {}
};

struct RoundCapExceeded : EngineError {
  std::int64_t cap;
  explicit RoundCapExceeded(std::int64_t c)
      : EngineError("round cap exceeded: execution needs more than " + std::to_string(c) +
                    " rounds"),
        cap(c) {}
};

struct EngineStalled : EngineError {
  std::int64_t round;
  explicit EngineStalled(std::int64_t r)
      : EngineError("execution stalled after round " + std::to_string(r) +
                    ": nodes are waiting for messages but none are in flight"),
        round(r) {}
};

namespace detail {
class EngineCore;
}

// Per-node handle passed into a program's initialize/step. Exposes exactly the
// local knowledge the model grants: own identifier and weight, incident ports
// with the neighbor identifier per port, and the global scalars n and max
// degree. Anything else must arrive in messages.
class NodeApi {
 public:
  NodeId id() const;
  double weight() const;
  std::size_t degree() const;
  NodeId neighbor(std::size_t port) const;
  std::size_t n() const;
  std::size_t max_degree() const;
  std::int64_t round() const;  // 0 during initialize

  std::span<const Arrival> inbox() const;  // port-ascending; empty in initialize

  void send(std::size_t port, Message msg);
  void broadcast(const Message& msg);  // send a copy on every port
  void halt();                         // final; node never runs again

  // Scheduling hints. By default a node that returns from step without halting
  // runs again next round. A delivered message always wakes a node.
  void idle_until_message();
  void wake_at(std::int64_t round);

 private:
  friend class detail::EngineCore;
  NodeApi(detail::EngineCore& core, std::size_t idx) : core_(core), idx_(idx) {}
  detail::EngineCore& core_;
  std::size_t idx_;
};

namespace detail {

class EngineCore {
 public:
  EngineCore(const WeightedGraph& g, const EngineOptions& opt) : g_(g), opt_(opt) {
    const std::size_t n = g.n();
    cap_ = opt.round_cap >= 0 ? opt.round_cap
                              : static_cast<std::int64_t>(10 * n) + 1'000'000;
    require(opt.word_budget >= 1, "word budget must be at least 1");
    halted_.assign(n, 0);
    wake_.assign(n, NEVER);
    inbox_.resize(n);
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + g.degree(i);
    peer_port_.resize(offsets_[n]);
    for (std::size_t i = 0; i < n; ++i) {
      auto nb = g.neighbors(i);
      for (std::size_t p = 0; p < nb.size(); ++p) {
        auto back = g.neighbors(nb[p]);
        std::size_t q = static_cast<std::size_t>(
            std::lower_bound(back.begin(), back.end(), i) - back.begin());
        peer_port_[offsets_[i] + p] = q;
      }
    }
  }

  template <class Fn>
  void drive(Fn&& fn) {
    const std::size_t n = g_.n();
    round_ = 0;
    halted_count_ = 0;
    woken_.resize(n);
    for (std::size_t i = 0; i < n; ++i) woken_[i] = i;
    run_phase(fn, true);
    deliver();
    while (halted_count_ < n) {
      std::int64_t next;
      if (!touched_.empty()) {
        next = round_ + 1;
      } else {
        next = next_timer_wake();
        if (next == NEVER) throw EngineStalled(round_);
      }
      if (next > cap_) throw RoundCapExceeded(cap_);
      round_ = next;
      trace.rounds = round_;
      collect_woken();
      run_phase(fn, false);
      deliver();
    }
  }

  RoundTrace trace;

 private:
  friend class mwis::NodeApi;
  static constexpr std::int64_t NEVER = std::numeric_limits<std::int64_t>::max();

  struct Send {
    std::size_t to;
    std::size_t port_at_to;
    Message payload;
  };

  std::int64_t next_timer_wake() {
    while (!timers_.empty()) {
      auto [r, i] = timers_.top();
      if (halted_[i] || wake_[i] != r) {
        timers_.pop();
        continue;
      }
      return r;
    }
    return NEVER;
  }

  void collect_woken() {
    woken_.clear();
    for (std::size_t i : touched_)
      if (!halted_[i]) woken_.push_back(i);
    while (!timers_.empty()) {
      auto [r, i] = timers_.top();
      if (halted_[i] || wake_[i] != r) {
        timers_.pop();
        continue;
      }
      if (r != round_) break;
      timers_.pop();
      if (inbox_[i].empty()) woken_.push_back(i);  // message wake already listed
      wake_[i] = NEVER;
    }
    std::sort(woken_.begin(), woken_.end());
  }

  template <class Fn>
  void run_phase(Fn&& fn, bool init) {
    switch (opt_.step_order) {
      case StepOrder::forward:
        break;
      case StepOrder::reverse:
        std::reverse(woken_.begin(), woken_.end());
        break;
      case StepOrder::shuffled: {
        std::mt19937_64 rng(opt_.shuffle_seed ^ static_cast<std::uint64_t>(round_ + 1));
        for (std::size_t k = woken_.size(); k > 1; --k) {
          std::size_t j = static_cast<std::size_t>(rng() % k);
          std::swap(woken_[k - 1], woken_[j]);
        }
        break;
      }
    }
    for (std::size_t i : woken_) {
      if (halted_[i]) continue;
      // Defaults for this step: run again next round unless the program says
      // otherwise. A message wake cancels any pending timer.
      wake_[i] = round_ + 1;
      step_sends_from_ = outbox_.size();
      NodeApi api(*this, i);
      if (init)
        fn(i, api, true);
      else
        fn(i, api, false);
      if (!halted_[i] && wake_[i] != NEVER) timers_.emplace(wake_[i], i);
      if (!inbox_[i].empty()) inbox_[i].clear();
    }
  }

  void deliver() {
    for (std::size_t i : touched_) inbox_[i].clear();  // dropped at halted nodes
    touched_.clear();
    for (Send& s : outbox_) {
      if (halted_[s.to]) continue;
      if (inbox_[s.to].empty()) touched_.push_back(s.to);
      inbox_[s.to].push_back(Arrival{s.port_at_to, std::move(s.payload)});
    }
    outbox_.clear();
    for (std::size_t i : touched_)
      std::sort(inbox_[i].begin(), inbox_[i].end(),
                [](const Arrival& a, const Arrival& b) { return a.port < b.port; });
  }

  // --- NodeApi backends ---

  void send_from(std::size_t i, std::size_t port, Message msg) {
    require(!halted_[i], "halted node cannot send");
    require(port < g_.degree(i), "send port out of range");
    std::size_t to = g_.neighbors(i)[port];
    if (static_cast<std::int64_t>(msg.size()) > opt_.word_budget)
      throw BudgetExceeded(round_, g_.id(i), g_.id(to),
                           static_cast<std::int64_t>(msg.size()), opt_.word_budget);
    for (std::size_t k = step_sends_from_; k < outbox_.size(); ++k)
      require(outbox_[k].to != to, "one message per port per round");
    trace.max_words = std::max(trace.max_words, static_cast<std::int64_t>(msg.size()));
    trace.total_messages += 1;
    outbox_.push_back(Send{to, peer_port_[offsets_[i] + port], std::move(msg)});
  }

  void halt_node(std::size_t i) {
    if (halted_[i]) return;
    halted_[i] = 1;
    ++halted_count_;
    wake_[i] = NEVER;
  }

  const WeightedGraph& g_;
  EngineOptions opt_;
  std::int64_t cap_ = 0;
  std::int64_t round_ = 0;
  std::vector<char> halted_;
  std::size_t halted_count_ = 0;
  std::vector<std::int64_t> wake_;
  std::priority_queue<std::pair<std::int64_t, std::size_t>,
                      std::vector<std::pair<std::int64_t, std::size_t>>,
                      std::greater<>>
      timers_;
  std::vector<std::vector<Arrival>> inbox_;
  std::vector<std::size_t> touched_;
  std::vector<Send> outbox_;
  std::size_t step_sends_from_ = 0;
  std::vector<std::size_t> woken_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> peer_port_;
};

}  // namespace detail

inline NodeId NodeApi::id() const { return core_.g_.id(idx_); }
inline double NodeApi::weight() const { return core_.g_.weight(idx_); }
inline std::size_t NodeApi::degree() const { return core_.g_.degree(idx_); }
inline NodeId NodeApi::neighbor(std::size_t port) const {
  require(port < degree(), "neighbor port out of range");
  return core_.g_.id(core_.g_.neighbors(idx_)[port]);
}
inline std::size_t NodeApi::n() const { return core_.g_.n(); }
inline std::size_t NodeApi::max_degree() const { return core_.g_.max_degree(); }
inline std::int64_t NodeApi::round() const { return core_.round_; }
inline std::span<const Arrival> NodeApi::inbox() const { return core_.inbox_[idx_]; }
inline void NodeApi::send(std::size_t port, Message msg) {
  core_.send_from(idx_, port, std::move(msg));
}
inline void NodeApi::broadcast(const Message& msg) {
  for (std::size_t p = 0; p < degree(); ++p) send(p, msg);
}
inline void NodeApi::halt() { core_.halt_node(idx_); }
inline void NodeApi::idle_until_message() {
  core_.wake_[idx_] = detail::EngineCore::NEVER;
}
inline void NodeApi::wake_at(std::int64_t round) {
  require(round > core_.round_, "wake_at needs a future round");
  core_.wake_[idx_] = round;
}

template <class P>
struct RunResult {
  std::vector<P> programs;
  RoundTrace trace;
};

// Executes one synchronous run: every node gets a program from make(index),
// initialize happens in round 0 (sends allowed, inbox empty), then rounds run
// until every node has halted. Messages sent in round r are readable in round
// r+1 only. Returns the final program states plus the cost trace.
template <class P, class F>
RunResult<P> run_programs(const WeightedGraph& g, F&& make, const EngineOptions& opt = {}) {
  detail::EngineCore core(g, opt);
  std::vector<P> programs;
  programs.reserve(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) programs.push_back(make(i));
  core.drive([&](std::size_t i, NodeApi& api, bool init) {
    if (init)
      programs[i].initialize(api);
    else
      programs[i].step(api);
  });
  return RunResult<P>{std::move(programs), core.trace};
}

// Convenience wrapper for programs exposing `std::int64_t output() const`.
template <class P, class F>
std::pair<std::vector<std::int64_t>, RoundTrace> run_outputs(const WeightedGraph& g, F&& make,
                                                             const EngineOptions& opt = {}) {
  auto result = run_programs<P>(g, std::forward<F>(make), opt);
  std::vector<std::int64_t> out;
  out.reserve(result.programs.size());
  for (const P& p : result.programs) out.push_back(p.output());
  return {std::move(out), result.trace};
}

}  // namespace mwis
