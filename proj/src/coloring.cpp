#include "coflow/coloring.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace coflow {

std::vector<std::vector<std::size_t>> MatchingDecomposition::matchings() const {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(static_cast<std::size_t>(degree));
  for (const ColorClass& c : classes)
    for (std::int64_t k = 0; k < c.count; ++k) out.push_back(c.items);
  return out;
}

namespace {

constexpr std::size_t kDummy = std::numeric_limits<std::size_t>::max();

struct Edge {
  std::size_t left;
  std::size_t right;
  std::int64_t weight;
  std::size_t item;
};

class Peeler {
 public:
  Peeler(std::size_t side, std::vector<Edge> edges) : side_(side), edges_(std::move(edges)), adj_(side) {
    for (std::size_t e = 0; e < edges_.size(); ++e) adj_[edges_[e].left].push_back(e);
    match_left_.assign(side_, kDummy);
    match_right_.assign(side_, kDummy);
  }

  std::vector<ColorClass> run() {
    std::vector<ColorClass> out;
    while (any_weight()) {
      for (std::size_t u = 0; u < side_; ++u) {
        if (match_left_[u] != kDummy) continue;
        seen_.assign(side_, false);
        if (!augment(u)) throw std::logic_error("regular bipartite graph without perfect matching");
      }

      std::int64_t c = std::numeric_limits<std::int64_t>::max();
      for (std::size_t u = 0; u < side_; ++u) c = std::min(c, edges_[match_left_[u]].weight);
      ColorClass cls;
      cls.count = c;
      for (std::size_t u = 0; u < side_; ++u) {
        Edge& e = edges_[match_left_[u]];
        if (e.item != kDummy) cls.items.push_back(e.item);
        e.weight -= c;
      }
      std::sort(cls.items.begin(), cls.items.end());
      out.push_back(std::move(cls));
      for (std::size_t u = 0; u < side_; ++u) {
        const std::size_t e = match_left_[u];
        if (edges_[e].weight == 0) {
          match_right_[edges_[e].right] = kDummy;
          match_left_[u] = kDummy;
        }
      }
    }
    return out;
  }

 private:
  bool any_weight() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight > 0; });
  }

  bool augment(std::size_t u) {
    for (std::size_t e : adj_[u]) {
      if (edges_[e].weight == 0) continue;
      const std::size_t v = edges_[e].right;
      if (seen_[v]) continue;
      seen_[v] = true;
      const std::size_t holder = match_right_[v];
      if (holder == kDummy || augment(edges_[holder].left)) {
        match_left_[u] = e;
        match_right_[v] = e;
        return true;
      }
    }
    return false;
  }

  std::size_t side_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<bool> seen_;
};

}  // namespace

MatchingDecomposition decompose(std::span<const Flow> edges) {
  MatchingDecomposition out;
  out.degree = max_degree(edges);
  if (out.degree == 0) return out;

  std::map<int, std::size_t> left_id, right_id;
  for (const Flow& f : edges) {
    if (f.mult < 1) throw std::invalid_argument("decompose: multiplicity must be positive");
    left_id.emplace(f.u, left_id.size());
    right_id.emplace(f.v, right_id.size());
  }
  const std::size_t side = std::max(left_id.size(), right_id.size());
  std::vector<std::int64_t> left_deg(side, 0), right_deg(side, 0);
  std::vector<Edge> graph;
  graph.reserve(edges.size() + 2 * side);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::size_t l = left_id[edges[i].u];
    const std::size_t r = right_id[edges[i].v];
    graph.push_back(Edge{l, r, edges[i].mult, i});
    left_deg[l] += edges[i].mult;
    right_deg[r] += edges[i].mult;
  }

  // Pad to a degree-regular graph by pairing left and right deficits.
  std::size_t i = 0;
  std::size_t j = 0;
  while (true) {
    while (i < side && left_deg[i] == out.degree) ++i;
    while (j < side && right_deg[j] == out.degree) ++j;
    if (i == side || j == side) break;
    const std::int64_t w = std::min(out.degree - left_deg[i], out.degree - right_deg[j]);
    graph.push_back(Edge{i, j, w, kDummy});
    left_deg[i] += w;
    right_deg[j] += w;
  }

  out.classes = Peeler(side, std::move(graph)).run();
  return out;
}

}  // namespace coflow
