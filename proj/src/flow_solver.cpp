#include "bvlab/flow_solver.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace bvlab {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Dinic solver over a CSR arc layout (arcs of a node are contiguous, paired
// arcs linked by an index array). Nodes are the free cells plus a contracted
// super-source and super-sink. Built in two passes: declare_edge counts
// degrees, add_edge fills.
class Dinic {
 public:
  explicit Dinic(int nodes)
      : n_(nodes), degree_(nodes, 0), start_(nodes + 1, 0), level_(nodes), it_(nodes) {}

  void declare_edge(int u, int v) {
    ++degree_[u];
    ++degree_[v];
  }

  void finish_declarations() {
    for (int u = 0; u < n_; ++u) start_[u + 1] = start_[u] + degree_[u];
    to_.assign(start_[n_], 0);
    rev_.assign(start_[n_], 0);
    cap_.assign(start_[n_], 0);
    fill_ = start_;
  }

  void add_edge(int u, int v, std::int64_t cap_uv, std::int64_t cap_vu) {
    int a = fill_[u]++;
    int b = fill_[v]++;
    to_[a] = v;
    rev_[a] = b;
    cap_[a] = cap_uv;
    to_[b] = u;
    rev_[b] = a;
    cap_[b] = cap_vu;
  }

  std::int64_t max_flow(int s, int t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      it_ = start_;
      std::int64_t f;
      while ((f = dfs(s, t, kInf)) > 0) flow += f;
    }
    return flow;
  }

  // cells reachable from s in the residual network
  std::vector<std::uint8_t> residual_reachable(int s) const {
    std::vector<std::uint8_t> seen(n_, 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int a = start_[u]; a < start_[u + 1]; ++a) {
        if (cap_[a] > 0 && !seen[to_[a]]) {
          seen[to_[a]] = 1;
          stack.push_back(to_[a]);
        }
      }
    }
    return seen;
  }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    queue_.clear();
    queue_.push_back(s);
    level_[s] = 0;
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      int u = queue_[qi];
      for (int a = start_[u]; a < start_[u + 1]; ++a) {
        if (cap_[a] > 0 && level_[to_[a]] < 0) {
          level_[to_[a]] = level_[u] + 1;
          queue_.push_back(to_[a]);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t limit) {
    if (u == t) return limit;
    for (int& a = it_[u]; a < start_[u + 1]; ++a) {
      int v = to_[a];
      if (cap_[a] <= 0 || level_[v] != level_[u] + 1) continue;
      std::int64_t f = dfs(v, t, std::min(limit, cap_[a]));
      if (f > 0) {
        cap_[a] -= f;
        cap_[rev_[a]] += f;
        return f;
      }
    }
    level_[u] = -1;
    return 0;
  }

  int n_;
  std::vector<int> degree_, start_, fill_, to_, rev_, level_, it_, queue_;
  std::vector<std::int64_t> cap_;
};

void validate(const CutProblem& p) {
  if (!p.space) throw InvalidArgument("cut problem has no space");
  if (p.sources.space().get() != p.space.get() || p.sinks.space().get() != p.space.get()) {
    throw InvalidArgument("cut problem sets from another space");
  }
  if (!p.sources.set_intersect(p.sinks).empty()) {
    throw InvalidArgument("sources and sinks overlap");
  }
}

enum Role : std::uint8_t { kFree = 0, kSource = 1, kSink = 2 };

std::vector<std::uint8_t> roles(const CutProblem& p) {
  std::vector<std::uint8_t> r(p.space->cell_count(), kFree);
  for (int c = 0; c < p.space->cell_count(); ++c) {
    if (p.sources.contains(c)) r[c] = kSource;
    else if (p.sinks.contains(c)) r[c] = kSink;
  }
  return r;
}

std::vector<std::pair<int, int>> cut_edges(const GridSpace& g, const CellSet& set) {
  std::vector<std::pair<int, int>> out;
  for (int c = 0; c < g.cell_count(); ++c) {
    for (int axis = 0; axis < g.dim(); ++axis) {
      if (!g.has_edge(c, axis)) continue;
      int nb = axis == 0 ? c + 1 : c + g.resolution();
      if (set.contains(c) != set.contains(nb)) out.emplace_back(c, nb);
    }
  }
  return out;
}

}  // namespace

CutResult min_cut(const CutProblem& problem) {
  validate(problem);
  const GridSpace& g = *problem.space;
  std::vector<std::uint8_t> role = roles(problem);

  CutResult res;
  res.set = CellSet(problem.space);
  if (problem.sources.empty()) return res;  // value 0, empty set
  if (problem.sinks.empty()) {
    // no cut needed; everything that is not a sink is reachable
    res.set = problem.sinks.complement();
    return res;
  }

  // node ids: free cells get dense ids, then super-source S and super-sink T
  std::vector<int> id(g.cell_count(), -1);
  int m = 0;
  for (int c = 0; c < g.cell_count(); ++c) {
    if (role[c] == kFree) id[c] = m++;
  }
  int s_node = m, t_node = m + 1;
  Dinic net(m + 2);

  std::int64_t base = 0;  // edges forced across the cut (source next to sink)
  auto visit_edges = [&](auto&& emit) {
    for (int c = 0; c < g.cell_count(); ++c) {
      for (int axis = 0; axis < g.dim(); ++axis) {
        if (!g.has_edge(c, axis)) continue;
        int nb = axis == 0 ? c + 1 : c + g.resolution();
        std::uint8_t rc = role[c], rn = role[nb];
        if (rc == rn && rc != kFree) continue;  // both contracted to one node
        int u = rc == kFree ? id[c] : (rc == kSource ? s_node : t_node);
        int v = rn == kFree ? id[nb] : (rn == kSource ? s_node : t_node);
        if ((u == s_node && v == t_node) || (u == t_node && v == s_node)) continue;
        emit(u, v, c, axis);
      }
    }
  };
  for (int c = 0; c < g.cell_count(); ++c) {
    for (int axis = 0; axis < g.dim(); ++axis) {
      if (!g.has_edge(c, axis)) continue;
      int nb = axis == 0 ? c + 1 : c + g.resolution();
      if ((role[c] == kSource && role[nb] == kSink) ||
          (role[c] == kSink && role[nb] == kSource)) {
        base += g.scaled_edge_weight(c, axis);
      }
    }
  }
  visit_edges([&](int u, int v, int, int) { net.declare_edge(u, v); });
  net.finish_declarations();
  visit_edges([&](int u, int v, int c, int axis) {
    std::int64_t cap = g.scaled_edge_weight(c, axis);
    net.add_edge(u, v, cap, cap);
  });

  std::int64_t flow = net.max_flow(s_node, t_node);
  std::vector<std::uint8_t> reach = net.residual_reachable(s_node);

  res.value = static_cast<double>(flow + base) / g.capacity_scale();
  res.set = CellSet(problem.space);
  for (int c = 0; c < g.cell_count(); ++c) {
    if (role[c] == kSource || (role[c] == kFree && reach[id[c]])) res.set.add(c);
  }
  res.saturated_edges = cut_edges(g, res.set);

  // duality certificate: the residual cut must weigh exactly the flow value
  std::int64_t check = 0;
  for (auto [a, b] : res.saturated_edges) {
    int axis = b == a + 1 ? 0 : 1;
    check += g.scaled_edge_weight(a, axis);
  }
  assert(check == flow + base);
  (void)check;
  return res;
}

CutResult enumerate_oracle(const CutProblem& problem) {
  validate(problem);
  const GridSpace& g = *problem.space;
  std::vector<std::uint8_t> role = roles(problem);

  std::vector<int> free_cells;
  for (int c = 0; c < g.cell_count(); ++c) {
    if (role[c] == kFree) free_cells.push_back(c);
  }
  if (free_cells.size() > 20) throw Unsupported("enumerate_oracle limited to 20 free cells");

  // collect edges once, with scaled capacities
  struct Edge { int a, b; std::int64_t cap; };
  std::vector<Edge> edges;
  for (int c = 0; c < g.cell_count(); ++c) {
    for (int axis = 0; axis < g.dim(); ++axis) {
      if (!g.has_edge(c, axis)) continue;
      int nb = axis == 0 ? c + 1 : c + g.resolution();
      edges.push_back({c, nb, g.scaled_edge_weight(c, axis)});
    }
  }
  std::vector<int> pos(g.cell_count(), -1);
  for (std::size_t i = 0; i < free_cells.size(); ++i) pos[free_cells[i]] = static_cast<int>(i);

  auto side = [&](int c, std::uint32_t mask) {
    if (role[c] == kSource) return true;
    if (role[c] == kSink) return false;
    return ((mask >> pos[c]) & 1u) != 0;
  };

  std::uint32_t nmask = free_cells.empty() ? 1u : (1u << free_cells.size());
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::uint32_t best_mask = 0;
  long long best_card = -1;
  bool has_source = !problem.sources.empty();
  for (std::uint32_t mask = 0; mask < nmask; ++mask) {
    std::int64_t cut = 0;
    for (const Edge& e : edges) {
      if (side(e.a, mask) != side(e.b, mask)) cut += e.cap;
    }
    long long card = static_cast<long long>(__builtin_popcount(mask));
    if (cut < best || (cut == best && (card < best_card ||
        (card == best_card && mask < best_mask)))) {
      best = cut;
      best_mask = mask;
      best_card = card;
    }
  }

  CutResult res;
  res.set = CellSet(problem.space);
  if (!has_source && best == 0 && best_card == 0) {
    res.value = 0.0;
    return res;
  }
  res.value = static_cast<double>(best) / g.capacity_scale();
  for (int c = 0; c < g.cell_count(); ++c) {
    if (side(c, best_mask)) res.set.add(c);
  }
  res.saturated_edges = cut_edges(g, res.set);
  return res;
}

}  // namespace bvlab
