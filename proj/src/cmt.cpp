#include "outfn/cmt.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "outfn/whitehead.hpp"

namespace outfn {

int TopGraph::valence(int v) const {
  int d = 0;
  for (auto [a, b] : edges)
    d += (a == v) + (b == v);
  return d;
}

bool TopGraph::connected() const {
  if (vertex_count == 0)
    return true;
  std::vector<int> parent(static_cast<std::size_t>(vertex_count));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v)
      v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    return v;
  };
  int components = vertex_count;
  for (auto [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      --components;
    }
  }
  return components == 1;
}

std::string TopGraph::str() const {
  std::ostringstream os;
  os << "V=" << vertex_count << " E=[";
  for (std::size_t i = 0; i < edges.size(); ++i)
    os << (i ? " " : "") << edges[i].first << '-' << edges[i].second;
  os << ']';
  return os.str();
}

TopGraph TopGraph::rose(int rank) {
  TopGraph g;
  g.vertex_count = 1;
  g.edges.assign(static_cast<std::size_t>(rank), {0, 0});
  return g;
}

std::vector<int> canonical_graph_code(const TopGraph &g) {
  std::vector<int> perm(static_cast<std::size_t>(g.vertex_count));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  std::vector<std::pair<int, int>> relabeled(g.edges.size());
  do {
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      int a = perm[static_cast<std::size_t>(g.edges[i].first)];
      int b = perm[static_cast<std::size_t>(g.edges[i].second)];
      relabeled[i] = {std::min(a, b), std::max(a, b)};
    }
    std::sort(relabeled.begin(), relabeled.end());
    std::vector<int> code{g.vertex_count};
    for (auto [a, b] : relabeled) {
      code.push_back(a);
      code.push_back(b);
    }
    if (best.empty() || code < best)
      best = std::move(code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

struct GraphSearch {
  int vertices;
  int edges_needed;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> degree;
  std::vector<std::pair<int, int>> chosen;
  std::set<std::vector<int>> seen;
  std::vector<TopGraph> found;

  int deficit() const {
    int d = 0;
    for (int x : degree)
      d += std::max(0, 3 - x);
    return d;
  }

  void run(std::size_t from) {
    const int remaining = edges_needed - static_cast<int>(chosen.size());
    if (2 * remaining < deficit())
      return;
    if (remaining == 0) {
      // Symmetry break: valences non-increasing in the vertex index.
      for (int v = 1; v < vertices; ++v)
        if (degree[static_cast<std::size_t>(v)] > degree[static_cast<std::size_t>(v - 1)])
          return;
      TopGraph g{vertices, chosen};
      if (!g.connected())
        return;
      auto code = canonical_graph_code(g);
      if (seen.insert(code).second) {
        TopGraph canon;
        canon.vertex_count = vertices;
        for (std::size_t i = 1; i < code.size(); i += 2)
          canon.edges.emplace_back(code[i], code[i + 1]);
        found.push_back(std::move(canon));
      }
      return;
    }
    for (std::size_t p = from; p < pairs.size(); ++p) {
      auto [a, b] = pairs[p];
      ++degree[static_cast<std::size_t>(a)];
      ++degree[static_cast<std::size_t>(b)];
      chosen.push_back(pairs[p]);
      run(p);
      chosen.pop_back();
      --degree[static_cast<std::size_t>(a)];
      --degree[static_cast<std::size_t>(b)];
    }
  }
};

} // namespace

std::vector<TopGraph> enumerate_rank_graphs(int rank) {
  if (rank < 1)
    throw std::invalid_argument("rank must be at least 1");
  if (rank == 1)
    return {TopGraph::rose(1)};
  std::vector<TopGraph> out;
  for (int v = 1; v <= 2 * rank - 2; ++v) {
    GraphSearch s;
    s.vertices = v;
    s.edges_needed = v + rank - 1;
    for (int a = 0; a < v; ++a)
      for (int b = a; b < v; ++b)
        s.pairs.emplace_back(a, b);
    s.degree.assign(static_cast<std::size_t>(v), 0);
    s.run(0);
    std::sort(s.found.begin(), s.found.end(), [](const TopGraph &x, const TopGraph &y) {
      return x.edges < y.edges;
    });
    out.insert(out.end(), s.found.begin(), s.found.end());
  }
  return out;
}

std::vector<SpanningTree> maximal_trees(const TopGraph &g) {
  std::vector<int> candidates;
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.edges[static_cast<std::size_t>(e)].first != g.edges[static_cast<std::size_t>(e)].second)
      candidates.push_back(e);
  const int need = g.vertex_count - 1;
  std::vector<SpanningTree> out;
  std::vector<int> pick;
  auto acyclic = [&]() {
    std::vector<int> parent(static_cast<std::size_t>(g.vertex_count));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v)
        v = parent[static_cast<std::size_t>(v)];
      return v;
    };
    for (int e : pick) {
      int a = find(g.edges[static_cast<std::size_t>(e)].first);
      int b = find(g.edges[static_cast<std::size_t>(e)].second);
      if (a == b)
        return false;
      parent[static_cast<std::size_t>(a)] = b;
    }
    return true;
  };
  auto rec = [&](auto &self, std::size_t from) -> void {
    if (static_cast<int>(pick.size()) == need) {
      if (acyclic()) {
        SpanningTree t;
        t.in_tree.assign(g.edges.size(), 0);
        for (int e : pick)
          t.in_tree[static_cast<std::size_t>(e)] = 1;
        out.push_back(std::move(t));
      }
      return;
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      pick.push_back(candidates[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

TreeLabeling default_labeling(const TopGraph &g, const SpanningTree &t) {
  TreeLabeling lab(g.edges.size());
  int next = 0;
  for (int e = 0; e < g.edge_count(); ++e)
    if (!t.contains(e))
      lab[static_cast<std::size_t>(e)] = Letter::gen(next++);
  return lab;
}

std::vector<std::pair<int, bool>> tree_path(const TopGraph &g, const SpanningTree &t, int base,
                                            int v) {
  // parent edge of each vertex in the tree rooted at base
  std::vector<std::pair<int, bool>> via(static_cast<std::size_t>(g.vertex_count), {-1, false});
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count), 0);
  std::vector<int> queue{base};
  seen[static_cast<std::size_t>(base)] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int u = queue[h];
    for (int e = 0; e < g.edge_count(); ++e) {
      if (!t.contains(e))
        continue;
      auto [a, b] = g.edges[static_cast<std::size_t>(e)];
      int w;
      bool reversed;
      if (a == u) {
        w = b;
        reversed = false;
      } else if (b == u) {
        w = a;
        reversed = true;
      } else {
        continue;
      }
      if (seen[static_cast<std::size_t>(w)])
        continue;
      seen[static_cast<std::size_t>(w)] = 1;
      via[static_cast<std::size_t>(w)] = {e, reversed};
      queue.push_back(w);
    }
  }
  if (!seen[static_cast<std::size_t>(v)])
    throw std::invalid_argument("tree does not span the graph");
  std::vector<std::pair<int, bool>> path;
  for (int w = v; w != base;) {
    auto step = via[static_cast<std::size_t>(w)];
    path.push_back(step);
    auto [a, b] = g.edges[static_cast<std::size_t>(step.first)];
    w = step.second ? b : a;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

void check_labeling(const TopGraph &g, const SpanningTree &t, const TreeLabeling &lab) {
  const int n = g.rank();
  if (lab.size() != g.edges.size())
    throw std::invalid_argument("labeling size does not match the edge count");
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int e = 0; e < g.edge_count(); ++e) {
    Letter l = lab[static_cast<std::size_t>(e)];
    if (t.contains(e)) {
      if (l.code() != 0)
        throw std::invalid_argument("tree edge carries a label");
      continue;
    }
    if (l.code() == 0 || l.index() >= n || used[static_cast<std::size_t>(l.index())])
      throw std::invalid_argument("labeling is not a bijection onto the basis");
    used[static_cast<std::size_t>(l.index())] = 1;
  }
}

} // namespace

OuterAut cmt_automorphism(const TopGraph &g, const SpanningTree &t, const TreeLabeling &lt,
                          const SpanningTree &t2, const TreeLabeling &lt2) {
  check_labeling(g, t, lt);
  check_labeling(g, t2, lt2);
  const int n = g.rank();
  std::vector<FreeWord> images(static_cast<std::size_t>(n));
  auto read = [&](std::vector<Letter> &acc, int e, bool reversed) {
    if (t2.contains(e))
      return;
    Letter l = lt2[static_cast<std::size_t>(e)];
    push_reduced(acc, reversed ? l.inv() : l);
  };
  for (int e = 0; e < g.edge_count(); ++e) {
    if (t.contains(e))
      continue;
    Letter l = lt[static_cast<std::size_t>(e)];
    auto [a, b] = g.edges[static_cast<std::size_t>(e)];
    // The petal for l crosses e forwards if l is positive on e.
    bool backwards = l.is_inverse();
    int from = backwards ? b : a;
    int to = backwards ? a : b;
    std::vector<Letter> acc;
    for (auto [pe, rev] : tree_path(g, t, 0, from))
      read(acc, pe, rev);
    read(acc, e, backwards);
    auto back = tree_path(g, t, 0, to);
    for (auto it = back.rbegin(); it != back.rend(); ++it)
      read(acc, it->first, !it->second);
    images[static_cast<std::size_t>(l.index())] = FreeWord::from_reduced(std::move(acc));
  }
  return OuterAut::verify(Endo(n, std::move(images)));
}

OuterAut cmt_automorphism(const TopGraph &g, const SpanningTree &t, const SpanningTree &t2) {
  return cmt_automorphism(g, t, default_labeling(g, t), t2, default_labeling(g, t2));
}

CmtSet cmt_generators(int rank) {
  if (rank < 1)
    throw std::invalid_argument("rank must be at least 1");
  // Tree changes with the fixed labeling convention, deduplicated.
  std::map<OuterKey, OuterAut> base;
  for (const TopGraph &g : enumerate_rank_graphs(rank)) {
    auto trees = maximal_trees(g);
    for (const SpanningTree &t : trees)
      for (const SpanningTree &t2 : trees) {
        OuterAut fwd = cmt_automorphism(g, t, t2);
        OuterKey key(fwd);
        if (!base.contains(key))
          base.emplace(std::move(key), cmt_automorphism(g, t2, t));
      }
  }

  // Any other labeling differs by a rose symmetry on either side.
  const auto syms = rose_symmetries(rank);
  std::map<OuterKey, Endo> closed;
  for (const auto &[key, inv] : base) {
    const Endo &f = key.representative();
    for (const InvertiblePair &s : syms) {
      Endo sf = compose(s.forward, f);
      Endo finv_sinv = compose(inv.repr(), s.inverse);
      for (const InvertiblePair &t : syms) {
        OuterKey k = OuterKey::of_trusted(compose(sf, t.forward));
        if (!closed.contains(k))
          closed.emplace(std::move(k), compose(t.inverse, finv_sinv));
      }
    }
  }

  CmtSet out;
  out.rank = rank;
  out.generators.reserve(closed.size());
  for (auto &[key, inv] : closed) {
    OuterAut fwd = key.outer();
    Rational nrm = norm(fwd);
    if (nrm > out.max_norm)
      out.max_norm = nrm;
    out.generators.push_back({std::move(fwd), OuterKey::of_trusted(inv).outer()});
  }
  return out;
}

std::filesystem::path cmt_cache_path(const std::filesystem::path &dir, int rank) {
  return dir / ("cmt-rank" + std::to_string(rank) + ".v" + std::to_string(kCmtCacheVersion) +
                ".txt");
}

void write_cmt_cache(const std::filesystem::path &file, const CmtSet &set) {
  if (file.has_parent_path())
    std::filesystem::create_directories(file.parent_path());
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream os(tmp);
    if (!os)
      throw std::runtime_error("cannot write cache file " + tmp.string());
    os << "outfn-cmt " << kCmtCacheVersion << '\n';
    os << "rank " << set.rank << '\n';
    os << "count " << set.generators.size() << '\n';
    os << "max_norm " << set.max_norm << '\n';
    for (const CmtGenerator &g : set.generators)
      os << g.forward.str() << " ; " << g.inverse.str() << '\n';
  }
  std::filesystem::rename(tmp, file);
}

std::optional<CmtSet> read_cmt_cache(const std::filesystem::path &file, int rank) {
  std::ifstream is(file);
  if (!is)
    return std::nullopt;
  std::string tag;
  int version = 0, file_rank = 0;
  std::size_t count = 0;
  std::string max_norm;
  if (!(is >> tag >> version) || tag != "outfn-cmt" || version != kCmtCacheVersion)
    return std::nullopt;
  if (!(is >> tag >> file_rank) || tag != "rank" || file_rank != rank)
    return std::nullopt;
  if (!(is >> tag >> count) || tag != "count")
    return std::nullopt;
  if (!(is >> tag >> max_norm) || tag != "max_norm")
    return std::nullopt;
  std::string line;
  std::getline(is, line);
  CmtSet set;
  set.rank = rank;
  set.max_norm = Rational::parse(max_norm);
  set.generators.reserve(count);
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    auto sep = line.find(" ; ");
    if (sep == std::string::npos)
      return std::nullopt;
    try {
      set.generators.push_back({OuterAut::parse(line.substr(0, sep)),
                                OuterAut::parse(line.substr(sep + 3))});
    } catch (const std::exception &) {
      return std::nullopt;
    }
  }
  if (set.generators.size() != count)
    return std::nullopt;
  return set;
}

CmtSet load_cmt_generators(int rank, const std::optional<std::filesystem::path> &dir) {
  if (dir) {
    if (auto cached = read_cmt_cache(cmt_cache_path(*dir, rank), rank))
      return *cached;
  }
  CmtSet set = cmt_generators(rank);
  if (dir) {
    try {
      write_cmt_cache(cmt_cache_path(*dir, rank), set);
    } catch (const std::exception &) {
      // best effort
    }
  }
  return set;
}

} // namespace outfn
