#include "outfn/stallings.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace outfn {

LabeledGraph::LabeledGraph(int rank, int vertex_count, std::vector<LabeledEdge> edges,
                           std::optional<int> base)
    : rank_(rank), vertex_count_(vertex_count), edges_(std::move(edges)), base_(base) {
  for (const LabeledEdge &e : edges_) {
    if (e.origin < 0 || e.origin >= vertex_count || e.terminus < 0 ||
        e.terminus >= vertex_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.label < 0 || e.label >= rank)
      throw std::invalid_argument("edge label out of range");
  }
  if (base && (*base < 0 || *base >= vertex_count))
    throw std::invalid_argument("base vertex out of range");
}

namespace {

/// Per-vertex transition table: slot 2i is the x_i edge leaving the vertex,
/// slot 2i+1 the x_i edge arriving (i.e. the X_i edge leaving).
class Folder {
public:
  Folder(int rank, int vertices)
      : width_(2 * rank), parent_(static_cast<std::size_t>(vertices)),
        slots_(static_cast<std::size_t>(vertices) * static_cast<std::size_t>(2 * rank), -1) {
    for (int v = 0; v < vertices; ++v)
      parent_[static_cast<std::size_t>(v)] = v;
  }

  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      int p = parent_[static_cast<std::size_t>(v)];
      parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  }

  int &slot(int v, int s) {
    return slots_[static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
                  static_cast<std::size_t>(s)];
  }

  void add_edge(int u, int label, int v) {
    u = find(u);
    v = find(v);
    int &out = slot(u, 2 * label);
    if (out != -1) {
      merge(out, v);
      return;
    }
    int &in = slot(v, 2 * label + 1);
    if (in != -1) {
      merge(in, u);
      return;
    }
    out = v;
    in = u;
  }

  void merge(int a, int b) {
    pending_.emplace_back(a, b);
    while (!pending_.empty()) {
      auto [x, y] = pending_.front();
      pending_.pop_front();
      x = find(x);
      y = find(y);
      if (x == y)
        continue;
      if (y < x)
        std::swap(x, y);
      parent_[static_cast<std::size_t>(y)] = x;
      for (int s = 0; s < width_; ++s) {
        int ty = slot(y, s);
        if (ty == -1)
          continue;
        int &tx = slot(x, s);
        if (tx == -1)
          tx = ty;
        else if (find(tx) != find(ty))
          pending_.emplace_back(tx, ty);
      }
    }
  }

  LabeledGraph finish(int rank, std::optional<int> base) {
    const int n = static_cast<int>(parent_.size());
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    int count = 0;
    for (int v = 0; v < n; ++v)
      if (find(v) == v)
        index[static_cast<std::size_t>(v)] = count++;
    std::vector<LabeledEdge> edges;
    for (int v = 0; v < n; ++v) {
      if (find(v) != v)
        continue;
      for (int i = 0; i < rank; ++i) {
        int t = slot(v, 2 * i);
        if (t != -1)
          edges.push_back({index[static_cast<std::size_t>(v)], i,
                           index[static_cast<std::size_t>(find(t))]});
      }
    }
    std::optional<int> new_base;
    if (base)
      new_base = index[static_cast<std::size_t>(find(*base))];
    return LabeledGraph(rank, count, std::move(edges), new_base);
  }

private:
  int width_;
  std::vector<int> parent_;
  std::vector<int> slots_;
  std::deque<std::pair<int, int>> pending_;
};

} // namespace

bool LabeledGraph::is_folded() const {
  std::vector<char> seen(static_cast<std::size_t>(vertex_count_) * static_cast<std::size_t>(2 * rank_), 0);
  for (const LabeledEdge &e : edges_) {
    auto out = static_cast<std::size_t>(e.origin * 2 * rank_ + 2 * e.label);
    auto in = static_cast<std::size_t>(e.terminus * 2 * rank_ + 2 * e.label + 1);
    if (seen[out] || seen[in])
      return false;
    seen[out] = seen[in] = 1;
  }
  return true;
}

int LabeledGraph::valence(int v) const {
  int d = 0;
  for (const LabeledEdge &e : edges_)
    d += (e.origin == v) + (e.terminus == v);
  return d;
}

std::optional<int> LabeledGraph::trace(int start, std::span<const Letter> w) const {
  // Small linear scan per letter; graphs traced here are modest.
  int v = start;
  for (Letter l : w) {
    int next = -1;
    for (const LabeledEdge &e : edges_) {
      if (e.label != l.index())
        continue;
      if (!l.is_inverse() && e.origin == v) {
        next = e.terminus;
        break;
      }
      if (l.is_inverse() && e.terminus == v) {
        next = e.origin;
        break;
      }
    }
    if (next < 0)
      return std::nullopt;
    v = next;
  }
  return v;
}

std::string LabeledGraph::dump() const {
  std::ostringstream os;
  os << "vertices " << vertex_count_;
  if (base_)
    os << " base " << *base_;
  os << '\n';
  for (const LabeledEdge &e : edges_)
    os << e.origin << ' ' << static_cast<char>('a' + e.label) << ' ' << e.terminus << '\n';
  return os.str();
}

LabeledGraph wedge_of_loops(std::span<const FreeWord> generators, int rank) {
  int vertices = 1;
  std::vector<LabeledEdge> edges;
  for (const FreeWord &w : generators) {
    if (w.max_rank() > rank)
      throw std::invalid_argument("generator uses a letter outside the rank");
    if (w.empty())
      continue;
    int prev = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      int next = (j + 1 == w.size()) ? 0 : vertices++;
      Letter l = w[j];
      if (l.is_inverse())
        edges.push_back({next, l.index(), prev});
      else
        edges.push_back({prev, l.index(), next});
      prev = next;
    }
  }
  return LabeledGraph(rank, vertices, std::move(edges), 0);
}

LabeledGraph fold(const LabeledGraph &g) {
  Folder f(g.rank(), g.vertex_count());
  for (const LabeledEdge &e : g.edges())
    f.add_edge(e.origin, e.label, e.terminus);
  return f.finish(g.rank(), g.base());
}

LabeledGraph subgroup_graph(std::span<const FreeWord> generators, int rank) {
  return fold(wedge_of_loops(generators, rank));
}

bool contains(const LabeledGraph &g, const FreeWord &w) {
  if (!g.base())
    throw std::invalid_argument("membership needs a based graph");
  auto end = g.trace(*g.base(), w.letters());
  return end && *end == *g.base();
}

LabeledGraph core(const LabeledGraph &g) {
  const int n = g.vertex_count();
  std::vector<int> valence(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const LabeledEdge &e = g.edges()[i];
    ++valence[static_cast<std::size_t>(e.origin)];
    ++valence[static_cast<std::size_t>(e.terminus)];
    incident[static_cast<std::size_t>(e.origin)].push_back(static_cast<int>(i));
    if (e.terminus != e.origin)
      incident[static_cast<std::size_t>(e.terminus)].push_back(static_cast<int>(i));
  }
  std::vector<char> removed_vertex(static_cast<std::size_t>(n), 0);
  std::vector<char> removed_edge(g.edges().size(), 0);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (valence[static_cast<std::size_t>(v)] <= 1)
      queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    if (removed_vertex[static_cast<std::size_t>(v)])
      continue;
    removed_vertex[static_cast<std::size_t>(v)] = 1;
    for (int ei : incident[static_cast<std::size_t>(v)]) {
      if (removed_edge[static_cast<std::size_t>(ei)])
        continue;
      removed_edge[static_cast<std::size_t>(ei)] = 1;
      const LabeledEdge &e = g.edges()[static_cast<std::size_t>(ei)];
      int other = e.origin == v ? e.terminus : e.origin;
      if (--valence[static_cast<std::size_t>(other)] <= 1 &&
          !removed_vertex[static_cast<std::size_t>(other)])
        queue.push_back(other);
    }
  }
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  int count = 0;
  for (int v = 0; v < n; ++v)
    if (!removed_vertex[static_cast<std::size_t>(v)])
      index[static_cast<std::size_t>(v)] = count++;
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    if (removed_edge[i])
      continue;
    const LabeledEdge &e = g.edges()[i];
    edges.push_back({index[static_cast<std::size_t>(e.origin)], e.label,
                     index[static_cast<std::size_t>(e.terminus)]});
  }
  return LabeledGraph(g.rank(), count, std::move(edges));
}

std::vector<int> canonical_code(const LabeledGraph &g) {
  const int n = g.vertex_count();
  const int width = 2 * g.rank();
  std::vector<int> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(width), -1);
  for (const LabeledEdge &e : g.edges()) {
    table[static_cast<std::size_t>(e.origin * width + 2 * e.label)] = e.terminus;
    table[static_cast<std::size_t>(e.terminus * width + 2 * e.label + 1)] = e.origin;
  }
  std::vector<int> best;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<int> number(static_cast<std::size_t>(n));
  for (int start = 0; start < n; ++start) {
    std::fill(number.begin(), number.end(), -1);
    std::vector<int> code{n, g.rank()};
    number[static_cast<std::size_t>(start)] = 0;
    order[0] = start;
    int assigned = 1;
    bool worse = false;
    bool tied = !best.empty();
    for (int head = 0; head < assigned && !worse; ++head) {
      int v = order[static_cast<std::size_t>(head)];
      for (int s = 0; s < width; ++s) {
        int t = table[static_cast<std::size_t>(v * width + s)];
        int c = -1;
        if (t != -1) {
          if (number[static_cast<std::size_t>(t)] == -1) {
            number[static_cast<std::size_t>(t)] = assigned;
            order[static_cast<std::size_t>(assigned++)] = t;
          }
          c = number[static_cast<std::size_t>(t)];
        }
        code.push_back(c);
        // Abandon as soon as this encoding exceeds the best prefix.
        if (tied) {
          std::size_t i = code.size() - 1;
          if (code[i] > best[i]) {
            worse = true;
            break;
          }
          tied = code[i] == best[i];
        }
      }
    }
    if (worse)
      continue;
    if (assigned != n)
      throw std::invalid_argument("canonical_code needs a connected graph");
    if (best.empty() || code < best)
      best = std::move(code);
  }
  if (best.empty())
    best = {0, g.rank()};
  return best;
}

bool conjugate_subgroups(std::span<const FreeWord> u, std::span<const FreeWord> v, int rank) {
  LabeledGraph cu = core(subgroup_graph(u, rank));
  LabeledGraph cv = core(subgroup_graph(v, rank));
  if (cu.vertex_count() != cv.vertex_count() || cu.edges().size() != cv.edges().size())
    return false;
  return canonical_code(cu) == canonical_code(cv);
}

namespace {

/// Letter set of the basis sub-rose that <phi(A)> is conjugate to, if any.
std::optional<LetterSet> conjugate_rose(const Endo &phi, LetterSet a) {
  if (std::popcount(a) == 1) {
    int i = std::countr_zero(a);
    const FreeWord &w = phi.image(i);
    if (cyclic_length(w.letters()) != 1)
      return std::nullopt;
    // A cyclic word of length one is the middle letter of the reduced word.
    return LetterSet{1} << w[w.size() / 2].index();
  }
  std::vector<FreeWord> gens;
  for (int i = 0; i < phi.rank(); ++i)
    if (a & (LetterSet{1} << i))
      gens.push_back(phi.image(i));
  LabeledGraph c = core(subgroup_graph(gens, phi.rank()));
  if (c.vertex_count() != 1)
    return std::nullopt;
  LetterSet labels = 0;
  for (const LabeledEdge &e : c.edges())
    labels |= LetterSet{1} << e.label;
  return labels;
}

} // namespace

std::optional<VisibleReduction> visibly_reducible(const Endo &phi) {
  const int n = phi.rank();
  if (n <= 1)
    return std::nullopt;
  if (n > 20)
    throw std::invalid_argument("visibly_reducible supports rank <= 20");
  const LetterSet full = (LetterSet{1} << n) - 1;
  std::vector<std::optional<LetterSet>> image(static_cast<std::size_t>(full) + 1);
  std::vector<char> computed(static_cast<std::size_t>(full) + 1, 0);
  auto f = [&](LetterSet a) -> std::optional<LetterSet> {
    if (!computed[a]) {
      image[a] = a == full ? std::nullopt : conjugate_rose(phi, a);
      computed[a] = 1;
    }
    return image[a];
  };

  std::optional<VisibleReduction> best;
  std::size_t best_size = 0;
  for (LetterSet start = 1; start < full; ++start) {
    std::vector<LetterSet> blocks{start};
    LetterSet used = start;
    bool cycle = false;
    for (LetterSet cur = start;;) {
      auto next = f(cur);
      if (!next)
        break;
      if (*next == start) {
        cycle = true;
        break;
      }
      if (*next & used)
        break; // overlaps an earlier block without closing the cycle
      used |= *next;
      blocks.push_back(*next);
      cur = *next;
    }
    if (!cycle)
      continue;
    auto size = static_cast<std::size_t>(std::popcount(used));
    if (!best || size < best_size || (size == best_size && blocks < best->blocks)) {
      best = VisibleReduction{std::move(blocks)};
      best_size = size;
    }
  }
  return best;
}

std::optional<VisibleReduction> visibly_reducible(const OuterAut &phi) {
  return visibly_reducible(phi.repr());
}

std::string format_letter_set(LetterSet s) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; s; ++i, s >>= 1) {
    if (!(s & 1))
      continue;
    if (!first)
      out += ',';
    out += static_cast<char>('a' + i);
    first = false;
  }
  return out + "}";
}

} // namespace outfn
