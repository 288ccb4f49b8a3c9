#pragma once

// Stallings core graphs of finitely generated subgroups of F_k.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qmlab/errors.hpp"
#include "qmlab/word.hpp"

namespace qmlab {

struct Edge {
  int source;
  int generator;  // edge reads generator forwards, its inverse backwards
  int target;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A folded, pruned, basepointed labelled graph. Vertex 0 is the basepoint and
// vertices are numbered canonically (breadth-first from the basepoint in
// letter order), so two graphs of the same subgroup compare equal.
class SubgroupGraph {
 public:
  SubgroupGraph(int alphabet_rank, int vertex_count, std::vector<Edge> edges, std::vector<Word> origin = {})
      : alphabet_rank_(alphabet_rank), vertex_count_(vertex_count), edges_(std::move(edges)), origin_(std::move(origin)) {
    if (alphabet_rank_ < 1) throw InputError("alphabet rank must be >= 1");
    if (vertex_count_ < 1) throw InputError("graph needs a basepoint");
    const auto slots = static_cast<std::size_t>(vertex_count_ * alphabet_rank_);
    out_.assign(slots, -1);
    in_.assign(slots, -1);
    std::sort(edges_.begin(), edges_.end());
    for (const Edge& e : edges_) {
      if (e.source < 0 || e.source >= vertex_count_ || e.target < 0 || e.target >= vertex_count_ || e.generator < 0 ||
          e.generator >= alphabet_rank_)
        throw InputError("edge out of range");
      int& o = out_[slot(e.source, e.generator)];
      int& i = in_[slot(e.target, e.generator)];
      if (o != -1 || i != -1) throw InputError("graph is not folded at vertex " + std::to_string(o != -1 ? e.source : e.target));
      o = e.target;
      i = e.source;
    }
  }

  int alphabet_rank() const { return alphabet_rank_; }
  int vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Word>& origin_generators() const { return origin_; }

  // |E| - |V| + 1.
  int rank() const { return static_cast<int>(edges_.size()) - vertex_count_ + 1; }

  // Endpoint of the path reading g from the basepoint, if it exists.
  std::optional<int> trace(const Word& g) const {
    if (g.rank() != alphabet_rank_) throw InputError("alphabet mismatch tracing word");
    int v = 0;
    for (Letter l : g.letters()) {
      v = l.inverted() ? in_[slot(v, l.generator())] : out_[slot(v, l.generator())];
      if (v < 0) return std::nullopt;
    }
    return v;
  }

  bool contains(const Word& g) const { return trace(g) == 0; }

  // Neighbour across the edge labelled by l, or -1.
  int step(int vertex, Letter l) const {
    return l.inverted() ? in_[slot(vertex, l.generator())] : out_[slot(vertex, l.generator())];
  }

  // One edge per line: "src label dst".
  std::string export_text(const Alphabet& alphabet) const {
    std::ostringstream os;
    for (const Edge& e : edges_) os << e.source << ' ' << alphabet.name(e.generator) << ' ' << e.target << '\n';
    return os.str();
  }
  std::string export_text() const { return export_text(Alphabet::standard(alphabet_rank_)); }

  // Structural equality (origin generators ignored).
  friend bool operator==(const SubgroupGraph& a, const SubgroupGraph& b) {
    return a.alphabet_rank_ == b.alphabet_rank_ && a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t slot(int vertex, int generator) const {
    return static_cast<std::size_t>(vertex * alphabet_rank_ + generator);
  }

  int alphabet_rank_;
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<Word> origin_;
  std::vector<int> out_, in_;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Keeps the smaller representative so the basepoint stays 0.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<int> parent_;
};

// Renumber breadth-first from vertex 0, visiting a, a^-1, b, b^-1, ... .
inline SubgroupGraph canonical_graph(int rank, int vertex_count, const std::vector<Edge>& edges, std::vector<Word> origin) {
  std::vector<std::vector<std::pair<int, int>>> adjacency(static_cast<std::size_t>(vertex_count));
  for (const Edge& e : edges) {
    adjacency[e.source].emplace_back(2 * e.generator, e.target);
    adjacency[e.target].emplace_back(2 * e.generator + 1, e.source);
  }
  for (auto& a : adjacency) std::sort(a.begin(), a.end());
  std::vector<int> id(static_cast<std::size_t>(vertex_count), -1);
  std::queue<int> queue;
  id[0] = 0;
  queue.push(0);
  int next = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (const auto& [ordinal, w] : adjacency[v])
      if (id[w] < 0) {
        id[w] = next++;
        queue.push(w);
      }
  }
  std::vector<Edge> renamed;
  renamed.reserve(edges.size());
  for (const Edge& e : edges) {
    if (id[e.source] < 0 || id[e.target] < 0) continue;
    renamed.push_back({id[e.source], e.generator, id[e.target]});
  }
  return SubgroupGraph(rank, next, std::move(renamed), std::move(origin));
}

}  // namespace detail

// Folds the bouquet of the generators to a fixed point and prunes hanging
// trees away from the basepoint. schedule_seed randomizes which fold is
// performed next; the result does not depend on it.
inline SubgroupGraph stallings_graph(std::span<const Word> generators, int rank = 2,
                                     std::optional<std::uint64_t> schedule_seed = std::nullopt) {
  if (!generators.empty()) rank = generators.front().rank();
  std::vector<Edge> edges;
  int vertices = 1;
  for (const Word& w : generators) {
    if (w.rank() != rank) throw InputError("alphabet mismatch among generators");
    if (w.is_identity()) continue;
    int current = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const int next = (i + 1 == w.size()) ? 0 : vertices++;
      const Letter l = w[i];
      if (l.inverted())
        edges.push_back({next, l.generator(), current});
      else
        edges.push_back({current, l.generator(), next});
      current = next;
    }
  }

  detail::UnionFind uf(static_cast<std::size_t>(vertices));
  std::optional<std::mt19937_64> rng;
  if (schedule_seed) rng.emplace(*schedule_seed);
  for (;;) {
    for (Edge& e : edges) e = {uf.find(e.source), e.generator, uf.find(e.target)};
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Pairs of vertices that must be identified: two edges with the same
    // label leaving (or entering) a common vertex.
    std::vector<std::pair<int, int>> folds;
    std::vector<Edge> by_target = edges;
    std::sort(by_target.begin(), by_target.end(), [](const Edge& x, const Edge& y) {
      return std::tie(x.target, x.generator, x.source) < std::tie(y.target, y.generator, y.source);
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].source == edges[i - 1].source && edges[i].generator == edges[i - 1].generator)
        folds.emplace_back(edges[i - 1].target, edges[i].target);
      if (by_target[i].target == by_target[i - 1].target && by_target[i].generator == by_target[i - 1].generator)
        folds.emplace_back(by_target[i - 1].source, by_target[i].source);
    }
    if (folds.empty()) break;
    if (rng) {
      const auto& f = folds[uniform_below(*rng, folds.size())];
      uf.unite(f.first, f.second);
    } else {
      for (const auto& f : folds) uf.unite(f.first, f.second);
    }
  }

  // Prune vertices of degree <= 1 other than the basepoint.
  std::vector<int> degree(static_cast<std::size_t>(vertices), 0);
  for (const Edge& e : edges) {
    ++degree[e.source];
    ++degree[e.target];
  }
  std::vector<bool> removed(static_cast<std::size_t>(vertices), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : edges) {
      if (removed[e.source] || removed[e.target]) continue;
      for (int v : {e.source, e.target}) {
        if (v != 0 && degree[v] == 1) {
          removed[v] = true;
          --degree[e.source];
          --degree[e.target];
          changed = true;
          break;
        }
      }
    }
  }
  std::vector<Edge> kept;
  for (const Edge& e : edges)
    if (!removed[e.source] && !removed[e.target]) kept.push_back(e);
  return detail::canonical_graph(rank, vertices, kept, std::vector<Word>(generators.begin(), generators.end()));
}

inline SubgroupGraph stallings_graph(std::initializer_list<Word> generators, int rank = 2) {
  return stallings_graph(std::span<const Word>(generators.begin(), generators.size()), rank);
}

inline int rank(const SubgroupGraph& h) { return h.rank(); }
inline bool contains(const SubgroupGraph& h, const Word& g) { return h.contains(g); }

struct FreePairCertificate {
  int rank;
  SubgroupGraph graph;
  bool is_rank2() const { return rank == 2; }
};

// In a free ambient group <x, y> is free (Nielsen-Schreier); the pair is a
// free basis exactly when the folded graph has rank 2.
inline FreePairCertificate certify_free_pair(const Word& x, const Word& y) {
  require_same_rank(x, y);
  const Word gens[] = {x, y};
  SubgroupGraph g = stallings_graph(gens, x.rank());
  const int r = g.rank();
  return {r, std::move(g)};
}

// Inverse of SubgroupGraph::export_text. The basepoint is vertex 0 and the
// vertex set is {0, ..., max id}.
inline SubgroupGraph parse_subgroup_graph(std::string_view text, const Alphabet& alphabet) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::vector<Edge> edges;
  int max_vertex = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int src, dst;
    std::string label;
    if (!(ls >> src >> label >> dst) || src < 0 || dst < 0) throw InputError("bad edge line '" + line + "'");
    int gen = -1;
    for (int g = 0; g < alphabet.rank(); ++g)
      if (alphabet.name(g) == label) gen = g;
    if (gen < 0) throw InputError("unknown edge label '" + label + "'");
    edges.push_back({src, gen, dst});
    max_vertex = std::max({max_vertex, src, dst});
  }
  return SubgroupGraph(alphabet.rank(), max_vertex + 1, std::move(edges));
}

}  // namespace qmlab
