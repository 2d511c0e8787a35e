#include "mwis/coloring.hpp"

#include <bit>
#include <cmath>
#include <memory>

namespace mwis {

bool is_proper(const WeightedGraph& g, const Coloring& c) {
  if (c.color.size() != g.n()) return false;
  for (std::int64_t x : c.color)
    if (x < 0 || x >= c.palette) return false;
  for (const auto& [i, j] : g.edges())
    if (c.color[i] == c.color[j]) return false;
  return true;
}

int log_star(double x) {
  int k = 0;
  while (x > 1.0) {
    x = std::log2(x);
    ++k;
  }
  return k;
}

namespace {

bool is_prime(std::int64_t x) {
  if (x < 2) return false;
  for (std::int64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

std::int64_t next_prime(std::int64_t x) {
  while (!is_prime(x)) ++x;
  return x;
}

// base^exp >= m, evaluated without overflow.
bool pow_at_least(std::int64_t base, std::int64_t exp, std::int64_t m) {
  __int128 v = 1;
  for (std::int64_t k = 0; k < exp; ++k) {
    v *= base;
    if (v >= m) return true;
  }
  return v >= m;
}

struct PaletteStep {
  std::int64_t d, p;  // polynomial degree and field size; new palette p*p
};

// Reduction schedule from `id_bound` colors down to at most the square of the
// smallest prime >= 2*max_degree + 1. Each step needs (d*deg+1)^(d+1) >= m so
// that m colors embed into degree-d polynomials over GF(p) while any two
// distinct ones collide on at most d points per neighbor.
std::vector<PaletteStep> palette_schedule(std::int64_t id_bound, std::int64_t max_degree) {
  std::int64_t de = std::max<std::int64_t>(max_degree, 1);
  std::int64_t target_p = next_prime(2 * de + 1);
  std::int64_t target = target_p * target_p;
  std::vector<PaletteStep> steps;
  std::int64_t m = id_bound;
  while (m > target) {
    std::int64_t d = 1;
    while (!pow_at_least(d * de + 1, d + 1, m)) ++d;
    std::int64_t p = next_prime(d * de + 1);
    std::int64_t next_m = p * p;
    ensure(next_m < m, "palette reduction step failed to shrink the palette");
    steps.push_back({d, p});
    m = next_m;
  }
  return steps;
}

std::vector<std::int64_t> base_p_digits(std::int64_t value, std::int64_t p, std::int64_t count) {
  std::vector<std::int64_t> digits(count);
  for (std::int64_t k = 0; k < count; ++k) {
    digits[k] = value % p;
    value /= p;
  }
  ensure(value == 0, "color does not fit the digit budget");
  return digits;
}

std::int64_t poly_eval(const std::vector<std::int64_t>& digits, std::int64_t a, std::int64_t p) {
  std::int64_t v = 0;
  for (std::size_t k = digits.size(); k-- > 0;) v = (v * a + digits[k]) % p;
  return v;
}

// One palette-reduction step: pick the smallest evaluation point where this
// node's polynomial differs from every neighbor's, and encode (point, value).
std::int64_t palette_recolor(std::int64_t own, const std::vector<std::int64_t>& nb,
                             std::int64_t d, std::int64_t p) {
  auto own_digits = base_p_digits(own, p, d + 1);
  std::vector<std::vector<std::int64_t>> nb_digits;
  nb_digits.reserve(nb.size());
  for (std::int64_t c : nb)
    if (c >= 0) nb_digits.push_back(base_p_digits(c, p, d + 1));
  for (std::int64_t a = 0; a < p; ++a) {
    std::int64_t fa = poly_eval(own_digits, a, p);
    bool good = true;
    for (const auto& other : nb_digits)
      if (poly_eval(other, a, p) == fa) {
        good = false;
        break;
      }
    if (good) return a * p + fa;
  }
  ensure(false, "no separating evaluation point exists");
  return -1;
}

struct PaletteProgram {
  std::shared_ptr<const std::vector<PaletteStep>> schedule;
  std::int64_t color = 0;
  std::size_t at = 0;
  std::vector<std::int64_t> nb;

  void initialize(NodeApi& api) {
    if (api.max_degree() == 0) {
      color = 0;
      api.halt();
      return;
    }
    color = api.id();
    if (schedule->empty()) {
      api.halt();
      return;
    }
    nb.assign(api.degree(), -1);
    api.broadcast({Word::id(color)});
  }

  void step(NodeApi& api) {
    for (const Arrival& a : api.inbox()) nb[a.port] = a.payload.at(0).as_id();
    const PaletteStep& s = (*schedule)[at];
    color = palette_recolor(color, nb, s.d, s.p);
    ++at;
    if (at == schedule->size()) {
      api.halt();
      return;
    }
    api.broadcast({Word::id(color)});
  }
};

}  // namespace

std::pair<Coloring, RoundTrace> linial_coloring(const WeightedGraph& g) {
  if (g.n() == 0) return {Coloring{{}, 1}, RoundTrace{}};
  const std::int64_t de = std::max<std::int64_t>(static_cast<std::int64_t>(g.max_degree()), 1);
  const std::int64_t id_bound = g.id(g.n() - 1) + 1;
  auto schedule = std::make_shared<const std::vector<PaletteStep>>(
      palette_schedule(id_bound, static_cast<std::int64_t>(g.max_degree())));
  auto result = run_programs<PaletteProgram>(g, [&](std::size_t) {
    PaletteProgram p;
    p.schedule = schedule;
    return p;
  });
  Coloring out;
  out.palette = g.max_degree() == 0 ? 1
                : schedule->empty() ? id_bound
                                    : schedule->back().p * schedule->back().p;
  out.color.reserve(g.n());
  for (const PaletteProgram& p : result.programs) out.color.push_back(p.color);
  ensure(out.palette <= 36 * de * de, "palette exceeds the 36 * max(degree,1)^2 bound");
  ensure(is_proper(g, out), "palette reduction produced an improper coloring");
  return {std::move(out), result.trace};
}

CvSchedule cv_schedule(std::int64_t id_bound) {
  require(id_bound >= 1, "identifier bound must be positive");
  std::uint64_t max_id = static_cast<std::uint64_t>(id_bound - 1);
  std::int64_t len = std::max<std::int64_t>(3, std::bit_width(max_id));
  std::int64_t iters = 1;  // one extra pass maps 3-bit colors into palette 6
  while (len > 3) {
    len = 1 + std::bit_width(static_cast<std::uint64_t>(len - 1));
    ++iters;
  }
  return CvSchedule{iters, iters + 6};
}

std::int64_t cv_tick(const CvSchedule& s, std::int64_t t, std::int64_t own_prev,
                     std::int64_t own_prev2, std::int64_t parent_prev, bool is_root) {
  require(t >= 1 && t <= s.total, "tick out of schedule");
  if (t <= s.iters) {
    std::int64_t pc = is_root ? (own_prev ^ 1) : parent_prev;
    ensure(pc != own_prev, "equal colors across an oriented edge");
    std::int64_t i = std::countr_zero(static_cast<std::uint64_t>(own_prev ^ pc));
    return 2 * i + ((own_prev >> i) & 1);
  }
  const std::int64_t k = t - s.iters;  // 1..6
  if (k % 2 == 1) {                    // shift down: adopt the parent's color
    if (!is_root) return parent_prev;
    for (std::int64_t c = 0; c < 3; ++c)
      if (c != own_prev) return c;
  }
  const std::int64_t victim = 5 - (k / 2 - 1);  // eliminate 5, then 4, then 3
  if (own_prev != victim) return own_prev;
  for (std::int64_t c = 0; c < 3; ++c)
    if (c != own_prev2 && c != parent_prev) return c;
  ensure(false, "no free color among {0,1,2}");
  return -1;
}

namespace {

constexpr std::size_t NO_PORT = static_cast<std::size_t>(-1);

struct CvProgram {
  CvSchedule sched;
  std::size_t parent_port = NO_PORT;
  std::int64_t color = 0;
  std::int64_t prev = -1;
  std::int64_t parent_val = -1;

  void send_to_children(NodeApi& api) {
    for (std::size_t p = 0; p < api.degree(); ++p)
      if (p != parent_port) api.send(p, {Word::id(color)});
  }

  void initialize(NodeApi& api) {
    color = api.id();
    send_to_children(api);
  }

  void step(NodeApi& api) {
    for (const Arrival& a : api.inbox()) {
      ensure(a.port == parent_port, "tree coloring message from a non-parent");
      parent_val = a.payload.at(0).as_id();
    }
    std::int64_t t = api.round();
    std::int64_t next = cv_tick(sched, t, color, prev, parent_val, parent_port == NO_PORT);
    prev = color;
    color = next;
    if (t == sched.total) {
      api.halt();
      return;
    }
    send_to_children(api);
  }
};

}  // namespace

std::pair<Coloring, RoundTrace> cole_vishkin_3color(const WeightedGraph& forest,
                                                    std::span<const NodeId> parent) {
  const std::size_t n = forest.n();
  require(parent.size() == n, "parent map size must match n");
  require(is_forest(forest), "input graph must be a forest");
  if (n == 0) return {Coloring{{}, 3}, RoundTrace{}};

  // Every forest edge must be oriented by the parent map exactly once.
  std::vector<std::size_t> parent_port(n, NO_PORT);
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] < 0) continue;
    std::size_t j = forest.index_of(parent[i]);
    require(forest.has_edge(i, j), "parent must be a neighbor");
    auto nb = forest.neighbors(i);
    parent_port[i] =
        static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), j) - nb.begin());
  }
  for (const auto& [i, j] : forest.edges()) {
    bool iup = parent[i] == forest.id(j);
    bool jup = parent[j] == forest.id(i);
    require(iup != jup, "each forest edge needs exactly one parent orientation");
  }

  const std::int64_t id_bound = forest.id(n - 1) + 1;
  const CvSchedule sched = cv_schedule(id_bound);
  auto result = run_programs<CvProgram>(forest, [&](std::size_t i) {
    CvProgram p;
    p.sched = sched;
    p.parent_port = parent_port[i];
    return p;
  });
  Coloring out;
  out.palette = 3;
  out.color.reserve(n);
  for (const CvProgram& p : result.programs) out.color.push_back(p.color);
  ensure(is_proper(forest, out), "tree coloring is not proper");
  ensure(result.trace.rounds <= 8 + 2 * log_star(static_cast<double>(id_bound)),
         "tree coloring exceeded its round bound");
  return {std::move(out), result.trace};
}

namespace {

struct CompactProgram {
  std::int64_t color = 0;
  std::int64_t palette = 0;
  std::int64_t target = 0;
  std::vector<std::int64_t> nb;

  void initialize(NodeApi& api) {
    if (palette <= target) {
      api.halt();
      return;
    }
    nb.assign(api.degree(), -1);
    api.broadcast({Word::id(color)});
  }

  void step(NodeApi& api) {
    for (const Arrival& a : api.inbox()) nb[a.port] = a.payload.at(0).as_id();
    const std::int64_t victim = palette - api.round();
    if (color == victim) {
      std::vector<char> used(static_cast<std::size_t>(target), 0);
      for (std::int64_t c : nb)
        if (c >= 0 && c < target) used[static_cast<std::size_t>(c)] = 1;
      std::int64_t pick = -1;
      for (std::int64_t c = 0; c < target; ++c)
        if (!used[static_cast<std::size_t>(c)]) {
          pick = c;
          break;
        }
      ensure(pick >= 0, "no free color below the target palette");
      color = pick;
    }
    if (victim == target) {
      api.halt();
      return;
    }
    api.broadcast({Word::id(color)});
  }
};

}  // namespace

std::pair<Coloring, RoundTrace> reduce_colors(const WeightedGraph& g, const Coloring& c,
                                              std::int64_t target_palette) {
  require(target_palette >= static_cast<std::int64_t>(g.max_degree()) + 1,
          "target palette must be at least max_degree + 1");
  require(is_proper(g, c), "input coloring must be proper");
  if (c.palette <= target_palette) return {c, RoundTrace{}};
  if (g.n() == 0) return {Coloring{{}, target_palette}, RoundTrace{}};

  auto result = run_programs<CompactProgram>(g, [&](std::size_t i) {
    CompactProgram p;
    p.color = c.color[i];
    p.palette = c.palette;
    p.target = target_palette;
    return p;
  });
  Coloring out;
  out.palette = target_palette;
  out.color.reserve(g.n());
  for (const CompactProgram& p : result.programs) out.color.push_back(p.color);
  ensure(is_proper(g, out), "palette compaction broke properness");
  ensure(result.trace.rounds == c.palette - target_palette,
         "palette compaction used an unexpected number of rounds");
  return {std::move(out), result.trace};
}

}  // namespace mwis
