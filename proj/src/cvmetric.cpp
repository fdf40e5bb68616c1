#include "outfn/cvmetric.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "outfn/whitehead.hpp"

namespace outfn {

int origin(const TopGraph &g, DirEdge d) {
  const auto &e = g.edges.at(static_cast<std::size_t>(edge_of(d)));
  return (d & 1) ? e.second : e.first;
}

int terminus(const TopGraph &g, DirEdge d) {
  const auto &e = g.edges.at(static_cast<std::size_t>(edge_of(d)));
  return (d & 1) ? e.first : e.second;
}

namespace {

void push_path(EdgePath &acc, DirEdge d) {
  if (!acc.empty() && acc.back() == reverse(d))
    acc.pop_back();
  else
    acc.push_back(d);
}

SpanningTree bfs_tree(const TopGraph &g, int base) {
  SpanningTree t;
  t.in_tree.assign(g.edges.size(), 0);
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count), 0);
  std::queue<int> q;
  seen[static_cast<std::size_t>(base)] = 1;
  q.push(base);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e = 0; e < g.edge_count(); ++e) {
      auto [a, b] = g.edges[static_cast<std::size_t>(e)];
      int other = a == v ? b : (b == v ? a : -1);
      if (other < 0 || seen[static_cast<std::size_t>(other)])
        continue;
      seen[static_cast<std::size_t>(other)] = 1;
      t.in_tree[static_cast<std::size_t>(e)] = 1;
      q.push(other);
    }
  }
  return t;
}

FreeWord read_labels(const std::vector<Letter> &label, const EdgePath &p) {
  std::vector<Letter> acc;
  for (DirEdge d : p) {
    Letter l = label[static_cast<std::size_t>(edge_of(d))];
    if (l == Letter())
      continue;
    push_reduced(acc, (d & 1) ? l.inv() : l);
  }
  return FreeWord::from_reduced(std::move(acc));
}

} // namespace

EdgePath reduce_path(const EdgePath &p) {
  EdgePath out;
  for (DirEdge d : p)
    push_path(out, d);
  return out;
}

EdgePath cyclic_reduce_path(const EdgePath &p) {
  EdgePath r = reduce_path(p);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == reverse(r[j - 1])) {
    ++i;
    --j;
  }
  return EdgePath(r.begin() + static_cast<std::ptrdiff_t>(i), r.begin() + static_cast<std::ptrdiff_t>(j));
}

MarkedMetricGraph::MarkedMetricGraph(TopGraph graph, std::vector<Rational> lengths, int base,
                                     std::vector<EdgePath> marking)
    : graph_(std::move(graph)), lengths_(std::move(lengths)), base_(base),
      marking_(std::move(marking)) {
  if (graph_.vertex_count < 1 || !graph_.connected())
    throw std::invalid_argument("graph must be nonempty and connected");
  for (auto [a, b] : graph_.edges)
    if (a < 0 || b < 0 || a >= graph_.vertex_count || b >= graph_.vertex_count)
      throw std::invalid_argument("edge endpoint out of range");
  if (lengths_.size() != graph_.edges.size())
    throw std::invalid_argument("one length per edge required");
  Rational volume;
  for (const Rational &l : lengths_) {
    if (l <= Rational(0))
      throw std::invalid_argument("edge lengths must be positive");
    volume += l;
  }
  if (volume != Rational(1))
    throw std::invalid_argument("volume is " + volume.str() + ", expected 1");
  if (base_ < 0 || base_ >= graph_.vertex_count)
    throw std::invalid_argument("base vertex out of range");
  const int n = graph_.rank();
  if (n < 1)
    throw std::invalid_argument("graph has rank 0");
  if (static_cast<int>(marking_.size()) != n)
    throw std::invalid_argument("need one marking loop per basis letter (" + std::to_string(n) +
                                ")");
  for (const EdgePath &p : marking_) {
    int at = base_;
    for (DirEdge d : p) {
      if (d < 0 || edge_of(d) >= graph_.edge_count())
        throw std::invalid_argument("marking uses an unknown edge");
      if (origin(graph_, d) != at)
        throw std::invalid_argument("marking path is not contiguous");
      at = terminus(graph_, d);
    }
    if (at != base_)
      throw std::invalid_argument("marking path is not closed at the base");
  }

  tree_label_ = default_labeling(graph_, bfs_tree(graph_, base_));
  std::vector<FreeWord> images;
  for (const EdgePath &p : marking_)
    images.push_back(read_labels(tree_label_, p));
  Endo mark(n, std::move(images));
  if (!is_automorphism(mark))
    throw NotAnAutomorphism("marking loops do not form a basis");
  unmark_ = inverse_automorphism(mark);
}

MarkedMetricGraph MarkedMetricGraph::standard(TopGraph graph, std::vector<Rational> lengths,
                                              int base) {
  if (base < 0 || base >= graph.vertex_count || !graph.connected())
    throw std::invalid_argument("graph must be connected with base in range");
  SpanningTree t = bfs_tree(graph, base);
  std::vector<EdgePath> marking;
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (t.contains(e))
      continue;
    EdgePath p;
    auto [a, b] = graph.edges[static_cast<std::size_t>(e)];
    for (auto [te, rev] : tree_path(graph, t, base, a))
      push_path(p, rev ? backward_edge(te) : forward_edge(te));
    push_path(p, forward_edge(e));
    auto back = tree_path(graph, t, base, b);
    for (auto it = back.rbegin(); it != back.rend(); ++it)
      push_path(p, it->second ? forward_edge(it->first) : backward_edge(it->first));
    marking.push_back(std::move(p));
  }
  return MarkedMetricGraph(std::move(graph), std::move(lengths), base, std::move(marking));
}

MarkedMetricGraph MarkedMetricGraph::rose(std::vector<Rational> lengths) {
  TopGraph g = TopGraph::rose(static_cast<int>(lengths.size()));
  std::vector<EdgePath> marking;
  for (int e = 0; e < g.edge_count(); ++e)
    marking.push_back({forward_edge(e)});
  return MarkedMetricGraph(std::move(g), std::move(lengths), 0, std::move(marking));
}

MarkedMetricGraph MarkedMetricGraph::uniform_rose(int rank) {
  if (rank < 1)
    throw std::invalid_argument("rank must be positive");
  return rose(std::vector<Rational>(static_cast<std::size_t>(rank), Rational(1, rank)));
}

Rational MarkedMetricGraph::path_length(const EdgePath &p) const {
  Rational total;
  for (DirEdge d : p)
    total += lengths_[static_cast<std::size_t>(edge_of(d))];
  return total;
}

EdgePath MarkedMetricGraph::realize(const FreeWord &w) const {
  EdgePath out;
  for (Letter l : w) {
    if (l.index() >= rank())
      throw std::out_of_range("letter outside the rank of the graph");
    const EdgePath &p = marking_[static_cast<std::size_t>(l.index())];
    if (l.is_inverse())
      for (auto it = p.rbegin(); it != p.rend(); ++it)
        push_path(out, reverse(*it));
    else
      for (DirEdge d : p)
        push_path(out, d);
  }
  return out;
}

FreeWord MarkedMetricGraph::read(const EdgePath &loop) const {
  return apply(unmark_, read_labels(tree_label_, loop));
}

MarkedMetricGraph MarkedMetricGraph::remarked(const Endo &alpha) const {
  if (alpha.rank() != rank())
    throw std::invalid_argument("rank mismatch");
  std::vector<EdgePath> marking;
  for (const FreeWord &w : alpha.images())
    marking.push_back(realize(w));
  return MarkedMetricGraph(graph_, lengths_, base_, std::move(marking));
}

std::string MarkedMetricGraph::str() const {
  std::ostringstream os;
  os << "vertices " << graph_.vertex_count << '\n';
  for (std::size_t e = 0; e < graph_.edges.size(); ++e)
    os << "edge " << graph_.edges[e].first << ' ' << graph_.edges[e].second << ' ' << lengths_[e]
       << '\n';
  os << "base " << base_ << '\n';
  for (std::size_t i = 0; i < marking_.size(); ++i) {
    os << "mark " << letter_char(Letter::gen(static_cast<int>(i)));
    for (DirEdge d : marking_[i])
      os << ' ' << edge_of(d) << ((d & 1) ? '-' : '+');
    os << '\n';
  }
  return os.str();
}

MarkedMetricGraph MarkedMetricGraph::parse(std::string_view text) {
  auto fail = [](int line, const std::string &msg) -> std::invalid_argument {
    return std::invalid_argument("line " + std::to_string(line) + ": " + msg);
  };
  auto to_int = [&](const std::string &s, int line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0)
      throw fail(line, "expected a nonnegative integer, got '" + s + "'");
    return v;
  };

  TopGraph g;
  bool have_vertices = false;
  std::vector<Rational> lengths;
  int base = 0;
  std::vector<std::pair<int, EdgePath>> marks;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.resize(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw))
      continue;
    std::vector<std::string> args;
    for (std::string a; ls >> a;)
      args.push_back(a);
    if (kw == "vertices") {
      if (args.size() != 1)
        throw fail(lineno, "usage: vertices V");
      g.vertex_count = to_int(args[0], lineno);
      have_vertices = true;
    } else if (kw == "edge") {
      if (args.size() != 3)
        throw fail(lineno, "usage: edge u v length");
      g.edges.emplace_back(to_int(args[0], lineno), to_int(args[1], lineno));
      try {
        lengths.push_back(Rational::parse(args[2]));
      } catch (const std::invalid_argument &e) {
        throw fail(lineno, e.what());
      }
    } else if (kw == "base") {
      if (args.size() != 1)
        throw fail(lineno, "usage: base v");
      base = to_int(args[0], lineno);
    } else if (kw == "mark") {
      if (args.empty() || args[0].size() != 1)
        throw fail(lineno, "usage: mark x 0+ 1- ...");
      Letter l = letter_from_char(args[0][0]);
      if (l.is_inverse())
        throw fail(lineno, "marking letters must be lowercase");
      EdgePath p;
      for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string &tok = args[i];
        if (tok.size() < 2 || (tok.back() != '+' && tok.back() != '-'))
          throw fail(lineno, "bad oriented edge '" + tok + "'");
        int e = to_int(tok.substr(0, tok.size() - 1), lineno);
        p.push_back(tok.back() == '+' ? forward_edge(e) : backward_edge(e));
      }
      marks.emplace_back(l.index(), std::move(p));
    } else {
      throw fail(lineno, "unknown keyword '" + kw + "'");
    }
  }
  if (!have_vertices)
    throw std::invalid_argument("missing 'vertices' line");
  std::sort(marks.begin(), marks.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  std::vector<EdgePath> marking;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i].first != static_cast<int>(i))
      throw std::invalid_argument("marking letters must be a, b, ... each exactly once");
    marking.push_back(std::move(marks[i].second));
  }
  return MarkedMetricGraph(std::move(g), std::move(lengths), base, std::move(marking));
}

Rational loop_length(const MarkedMetricGraph &x, const FreeWord &w) {
  return x.path_length(cyclic_reduce_path(x.realize(w)));
}

std::string_view shape_name(LoopShape s) {
  switch (s) {
  case LoopShape::simple:
    return "simple";
  case LoopShape::figure_eight:
    return "figure-eight";
  case LoopShape::barbell:
    return "barbell";
  }
  return "?";
}

namespace {

struct SimpleLoop {
  EdgePath path;
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
};

std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

std::vector<SimpleLoop> simple_loops(const TopGraph &g) {
  std::vector<SimpleLoop> out;
  std::vector<std::uint64_t> seen_masks;
  EdgePath path;
  // Cycles through `start` whose other vertices are all larger than it.
  auto dfs = [&](auto &&self, int start, int v, std::uint64_t vmask, std::uint64_t emask) -> void {
    for (int e = 0; e < g.edge_count(); ++e) {
      if (emask & bit(e))
        continue;
      for (DirEdge d : {forward_edge(e), backward_edge(e)}) {
        if (origin(g, d) != v)
          continue;
        if (d == backward_edge(e) && g.edges[static_cast<std::size_t>(e)].first ==
                                         g.edges[static_cast<std::size_t>(e)].second)
          continue;
        int w = terminus(g, d);
        path.push_back(d);
        if (w == start) {
          std::uint64_t em = emask | bit(e);
          if (std::find(seen_masks.begin(), seen_masks.end(), em) == seen_masks.end()) {
            seen_masks.push_back(em);
            out.push_back({path, vmask, em});
          }
        } else if (w > start && !(vmask & bit(w))) {
          self(self, start, w, vmask | bit(w), emask | bit(e));
        }
        path.pop_back();
      }
    }
  };
  for (int s = 0; s < g.vertex_count; ++s)
    dfs(dfs, s, s, bit(s), 0);
  return out;
}

EdgePath rotate_to(const TopGraph &g, const EdgePath &loop, int v) {
  for (std::size_t i = 0; i < loop.size(); ++i)
    if (origin(g, loop[i]) == v) {
      EdgePath r(loop.begin() + static_cast<std::ptrdiff_t>(i), loop.end());
      r.insert(r.end(), loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(i));
      return r;
    }
  throw std::logic_error("vertex not on loop");
}

EdgePath reversed(const EdgePath &p) {
  EdgePath r;
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    r.push_back(reverse(*it));
  return r;
}

EdgePath concat(std::initializer_list<const EdgePath *> parts) {
  EdgePath r;
  for (const EdgePath *p : parts)
    r.insert(r.end(), p->begin(), p->end());
  return r;
}

} // namespace

std::vector<CandidateLoop> candidates(const MarkedMetricGraph &x) {
  const TopGraph &g = x.graph();
  if (g.edge_count() > 64 || g.vertex_count > 64)
    throw std::invalid_argument("candidate enumeration supports at most 64 edges");
  std::vector<SimpleLoop> loops = simple_loops(g);
  std::vector<CandidateLoop> out;
  for (const SimpleLoop &l : loops)
    out.push_back({l.path, LoopShape::simple});

  for (std::size_t i = 0; i < loops.size(); ++i) {
    for (std::size_t j = i + 1; j < loops.size(); ++j) {
      const SimpleLoop &a = loops[i];
      const SimpleLoop &b = loops[j];
      if (a.edges & b.edges)
        continue;
      std::uint64_t common = a.vertices & b.vertices;
      if (std::popcount(common) == 1) {
        int v = std::countr_zero(common);
        EdgePath pa = rotate_to(g, a.path, v);
        EdgePath pb = rotate_to(g, b.path, v);
        EdgePath pbr = reversed(pb);
        out.push_back({concat({&pa, &pb}), LoopShape::figure_eight});
        out.push_back({concat({&pa, &pbr}), LoopShape::figure_eight});
      } else if (common == 0) {
        // Embedded connecting paths from a to b with interior off both loops.
        EdgePath path;
        auto dfs = [&](auto &&self, int v, std::uint64_t visited) -> void {
          for (int e = 0; e < g.edge_count(); ++e) {
            if ((a.edges | b.edges) & bit(e))
              continue;
            for (DirEdge d : {forward_edge(e), backward_edge(e)}) {
              if (origin(g, d) != v)
                continue;
              int w = terminus(g, d);
              if (visited & bit(w))
                continue;
              if (a.vertices & bit(w))
                continue;
              path.push_back(d);
              if (b.vertices & bit(w)) {
                int u = origin(g, path.front());
                EdgePath pa = rotate_to(g, a.path, u);
                EdgePath pb = rotate_to(g, b.path, w);
                EdgePath pbr = reversed(pb);
                EdgePath back = reversed(path);
                out.push_back({concat({&pa, &path, &pb, &back}), LoopShape::barbell});
                out.push_back({concat({&pa, &path, &pbr, &back}), LoopShape::barbell});
              } else {
                self(self, w, visited | bit(w));
              }
              path.pop_back();
            }
          }
        };
        for (int u = 0; u < g.vertex_count; ++u)
          if (a.vertices & bit(u))
            dfs(dfs, u, a.vertices);
      }
    }
  }
  return out;
}

Rational stretch(const MarkedMetricGraph &x, const MarkedMetricGraph &y) {
  if (x.rank() != y.rank())
    throw std::invalid_argument("rank mismatch");
  Rational best;
  for (const CandidateLoop &c : candidates(x)) {
    Rational r = loop_length(y, x.read(c.path)) / x.path_length(c.path);
    if (r > best)
      best = r;
  }
  return best;
}

Rational displacement(const MarkedMetricGraph &x, const Endo &phi) {
  if (x.rank() != phi.rank())
    throw std::invalid_argument("rank mismatch");
  Rational best;
  for (const CandidateLoop &c : candidates(x)) {
    Rational r = loop_length(x, apply(phi, x.read(c.path))) / x.path_length(c.path);
    if (r > best)
      best = r;
  }
  return best;
}

Rational displacement(const MarkedMetricGraph &x, const OuterAut &phi) {
  return displacement(x, phi.repr());
}

bool is_thin(const MarkedMetricGraph &x, const Rational &eps) {
  if (eps <= Rational(0))
    throw std::invalid_argument("eps must be positive");
  for (const SimpleLoop &l : simple_loops(x.graph()))
    if (x.path_length(l.path) <= eps)
      return true;
  return false;
}

MarkedMetricGraph adjacent_uniform_rose(const MarkedMetricGraph &x, const SpanningTree &t) {
  const TopGraph &g = x.graph();
  if (t.in_tree.size() != g.edges.size())
    throw std::invalid_argument("tree does not match the graph");
  int tree_edges = static_cast<int>(std::count(t.in_tree.begin(), t.in_tree.end(), 1));
  TopGraph forest{g.vertex_count, {}};
  for (int e = 0; e < g.edge_count(); ++e)
    if (t.contains(e))
      forest.edges.push_back(g.edges[static_cast<std::size_t>(e)]);
  if (tree_edges != g.vertex_count - 1 || !forest.connected())
    throw std::invalid_argument("not a maximal tree");

  std::vector<int> petal(g.edges.size(), -1);
  int n = 0;
  for (int e = 0; e < g.edge_count(); ++e)
    if (!t.contains(e))
      petal[static_cast<std::size_t>(e)] = n++;
  std::vector<EdgePath> marking;
  for (const EdgePath &p : x.marking()) {
    EdgePath q;
    for (DirEdge d : p) {
      int k = petal[static_cast<std::size_t>(edge_of(d))];
      if (k >= 0)
        push_path(q, (d & 1) ? backward_edge(k) : forward_edge(k));
    }
    marking.push_back(std::move(q));
  }
  return MarkedMetricGraph(TopGraph::rose(n),
                           std::vector<Rational>(static_cast<std::size_t>(n), Rational(1, n)), 0,
                           std::move(marking));
}

Rational thinness_constant(int rank, const Rational &mu) {
  if (rank < 2)
    throw std::domain_error("thinness constant needs rank >= 2");
  if (mu <= Rational(1))
    throw std::domain_error("thinness constant needs mu > 1");
  return (Rational(3 * rank - 3) * pow(mu, static_cast<unsigned>(3 * rank - 2))).inverse();
}

} // namespace outfn
