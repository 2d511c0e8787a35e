#include <doctest.h>

#include "helpers.hpp"
#include "mwis/congest.hpp"

using namespace mwis;
using namespace testing_support;

namespace {

// Halts during initialize; output is the node's own identifier.
struct HaltNow {
  NodeId out = -1;
  void initialize(NodeApi& api) {
    out = api.id();
    api.halt();
  }
  void step(NodeApi&) {}
  std::int64_t output() const { return out; }
};

// Classic flooding of the maximum identifier; everyone halts after n-1 rounds.
struct FloodMax {
  NodeId best = -1;
  std::int64_t deadline = 0;
  void initialize(NodeApi& api) {
    best = api.id();
    deadline = static_cast<std::int64_t>(api.n()) - 1;
    if (deadline <= 0) {
      api.halt();
      return;
    }
    api.broadcast({Word::id(best)});
  }
  void step(NodeApi& api) {
    bool improved = false;
    for (const Arrival& a : api.inbox()) {
      NodeId v = a.payload.at(0).as_id();
      if (v > best) {
        best = v;
        improved = true;
      }
    }
    if (api.round() >= deadline) {
      api.halt();
      return;
    }
    if (improved) api.broadcast({Word::id(best)});
  }
  std::int64_t output() const { return best; }
};

struct OverBudget {
  void initialize(NodeApi& api) {
    if (api.id() == 0) {
      Message m;
      for (int k = 0; k < 9; ++k) m.push_back(Word::id(k));
      api.send(0, m);
    }
    api.halt();
  }
  void step(NodeApi&) {}
};

struct DoubleSend {
  void initialize(NodeApi& api) {
    if (api.id() == 0) {
      api.send(0, {Word::id(1)});
      api.send(0, {Word::id(2)});
    }
    api.halt();
  }
  void step(NodeApi&) {}
};

// Node 0 pings at round 0 and notes the reply round; node 1 notes the arrival
// round of the ping. Verifies the one-round delivery delay in both directions.
struct SynchronyProbe {
  std::int64_t saw_at = -1;
  void initialize(NodeApi& api) {
    if (api.id() == 0)
      api.send(0, {Word::id(7)});
    api.idle_until_message();
  }
  void step(NodeApi& api) {
    if (!api.inbox().empty()) {
      saw_at = api.round();
      if (api.id() == 1) api.send(0, {Word::id(8)});
      api.halt();
      return;
    }
    api.idle_until_message();
  }
  std::int64_t output() const { return saw_at; }
};

struct PingForever {
  void initialize(NodeApi& api) {
    if (api.degree() > 0) api.send(0, {Word::id(0)});
  }
  void step(NodeApi& api) {
    if (api.degree() > 0) api.send(0, {Word::id(0)});
  }
};

struct IdleForever {
  void initialize(NodeApi& api) { api.idle_until_message(); }
  void step(NodeApi& api) { api.idle_until_message(); }
};

struct WakeLate {
  std::int64_t woke = -1;
  void initialize(NodeApi& api) { api.wake_at(5); }
  void step(NodeApi& api) {
    woke = api.round();
    api.halt();
  }
  std::int64_t output() const { return woke; }
};

// Node 1 halts after round 1; node 0 keeps sending to it through round 4.
struct TalkToTheHalted {
  void initialize(NodeApi& api) {
    if (api.id() == 1) api.idle_until_message();
  }
  void step(NodeApi& api) {
    if (api.id() == 1) {
      api.halt();
      return;
    }
    api.send(0, {Word::id(api.round())});
    if (api.round() >= 4) api.halt();
  }
};

}  // namespace

TEST_CASE("halt in initialize gives zero rounds") {
  WeightedGraph g = path_graph(4);
  auto [out, trace] = run_outputs<HaltNow>(g, [](std::size_t) { return HaltNow{}; });
  CHECK(out == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(trace.rounds == 0);
  CHECK(trace.total_messages == 0);
  CHECK(trace.max_words == 0);
}

TEST_CASE("flooding the maximum identifier on a path takes n-1 rounds") {
  WeightedGraph g = path_graph(6);
  auto [out, trace] = run_outputs<FloodMax>(g, [](std::size_t) { return FloodMax{}; });
  CHECK(out == std::vector<std::int64_t>(6, 5));
  CHECK(trace.rounds == 5);
  CHECK(trace.max_words == 1);
  auto [out1, trace1] = run_outputs<FloodMax>(WeightedGraph(1, {}),
                                              [](std::size_t) { return FloodMax{}; });
  CHECK(out1 == std::vector<std::int64_t>{0});
  CHECK(trace1.rounds == 0);
}

TEST_CASE("word budget is enforced with round and edge reported") {
  WeightedGraph g = path_graph(2);
  try {
    run_programs<OverBudget>(g, [](std::size_t) { return OverBudget{}; });
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.round == 0);
    CHECK(e.from == 0);
    CHECK(e.to == 1);
    CHECK(e.words == 9);
    CHECK(e.budget == 8);
  }
  EngineOptions roomy;
  roomy.word_budget = 9;
  CHECK_NOTHROW(run_programs<OverBudget>(g, [](std::size_t) { return OverBudget{}; }, roomy));
}

TEST_CASE("two sends on one port in one round are rejected") {
  WeightedGraph g = path_graph(2);
  CHECK_THROWS_AS(run_programs<DoubleSend>(g, [](std::size_t) { return DoubleSend{}; }),
                  std::invalid_argument);
}

TEST_CASE("messages sent in round r are readable in round r+1 only") {
  WeightedGraph g = path_graph(2);
  auto [out, trace] = run_outputs<SynchronyProbe>(g, [](std::size_t) { return SynchronyProbe{}; });
  CHECK(out[1] == 1);  // ping sent in round 0 arrives in round 1
  CHECK(out[0] == 2);  // reply sent in round 1 arrives in round 2
  CHECK(trace.rounds == 2);
}

TEST_CASE("outputs and traces do not depend on step order") {
  WeightedGraph g = random_graph(40, 0.1, 99);
  auto [base, base_trace] = run_outputs<FloodMax>(g, [](std::size_t) { return FloodMax{}; });
  auto [again, again_trace] = run_outputs<FloodMax>(g, [](std::size_t) { return FloodMax{}; });
  CHECK(base == again);
  CHECK(base_trace == again_trace);
  for (StepOrder order : {StepOrder::reverse, StepOrder::shuffled}) {
    EngineOptions opt;
    opt.step_order = order;
    opt.shuffle_seed = 12345;
    auto [out, trace] = run_outputs<FloodMax>(g, [](std::size_t) { return FloodMax{}; }, opt);
    CHECK(out == base);
    CHECK(trace == base_trace);
  }
}

TEST_CASE("round cap aborts runaway executions") {
  WeightedGraph g = path_graph(2);
  EngineOptions opt;
  opt.round_cap = 100;
  CHECK_THROWS_AS(run_programs<PingForever>(g, [](std::size_t) { return PingForever{}; }, opt),
                  RoundCapExceeded);
}

TEST_CASE("deadlocked executions are reported as stalled") {
  WeightedGraph g = path_graph(3);
  CHECK_THROWS_AS(run_programs<IdleForever>(g, [](std::size_t) { return IdleForever{}; }),
                  EngineStalled);
}

TEST_CASE("timer wake fast-forwards while keeping the round count") {
  WeightedGraph g(3, {});
  auto [out, trace] = run_outputs<WakeLate>(g, [](std::size_t) { return WakeLate{}; });
  CHECK(out == std::vector<std::int64_t>{5, 5, 5});
  CHECK(trace.rounds == 5);
}

TEST_CASE("messages to halted nodes count as sent and are dropped") {
  WeightedGraph g = path_graph(2);
  auto result = run_programs<TalkToTheHalted>(g, [](std::size_t) { return TalkToTheHalted{}; });
  // Node 0 sends in rounds 1..4; node 1 halts at round 2 after the first ping.
  CHECK(result.trace.total_messages == 4);
  CHECK(result.trace.rounds == 4);
}
