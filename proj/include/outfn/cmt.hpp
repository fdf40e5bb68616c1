#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "outfn/autom.hpp"
#include "outfn/rational.hpp"

namespace outfn {

/// Undirected multigraph (loops and parallel edges allowed). Edge i is
/// oriented from edges[i].first to edges[i].second wherever an orientation
/// matters.
struct TopGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  int edge_count() const { return static_cast<int>(edges.size()); }
  /// First Betti number, assuming the graph is connected.
  int rank() const { return edge_count() - vertex_count + 1; }
  int valence(int v) const;
  bool connected() const;
  std::string str() const;

  static TopGraph rose(int rank);
};

/// Isomorphism-invariant code: least sorted edge list over all vertex
/// relabelings. Exponential in the vertex count; meant for small graphs.
std::vector<int> canonical_graph_code(const TopGraph &g);

/// Every connected graph of rank n with all valences >= 3, one per
/// isomorphism class (for n == 1, the single-loop rose).
std::vector<TopGraph> enumerate_rank_graphs(int rank);

/// A maximal tree, as a membership flag per edge.
struct SpanningTree {
  std::vector<char> in_tree;

  bool contains(int edge) const { return in_tree[static_cast<std::size_t>(edge)] != 0; }
  friend bool operator==(const SpanningTree &, const SpanningTree &) = default;
};

std::vector<SpanningTree> maximal_trees(const TopGraph &g);

/// Per edge: the basis letter read when the edge is crossed in its positive
/// direction; a default Letter() on tree edges.
using TreeLabeling = std::vector<Letter>;

/// Non-tree edges in increasing index order get a, b, c, ... positively.
TreeLabeling default_labeling(const TopGraph &g, const SpanningTree &t);

/// Oriented edge path from `base` to `v` inside the tree, as (edge, reversed).
std::vector<std::pair<int, bool>> tree_path(const TopGraph &g, const SpanningTree &t, int base,
                                            int v);

/// The outer automorphism rho_{T'} rho_T^{-1}: each T-basis loop (a
/// non-tree edge closed up through T) is read in the T'-basis. Throws
/// std::invalid_argument if a labeling is not a bijection from the non-tree
/// edges onto the basis letters up to sign.
OuterAut cmt_automorphism(const TopGraph &g, const SpanningTree &t, const TreeLabeling &lt,
                          const SpanningTree &t2, const TreeLabeling &lt2);
OuterAut cmt_automorphism(const TopGraph &g, const SpanningTree &t, const SpanningTree &t2);

struct CmtGenerator {
  OuterAut forward;
  OuterAut inverse;
};

/// Deduplicated (by outer class) generating set of Out(F_n) built from all
/// tree changes in all rank-n graphs, closed under rose symmetries on both
/// sides. Sorted by canonical key; includes the identity.
struct CmtSet {
  int rank = 0;
  std::vector<CmtGenerator> generators;
  Rational max_norm{1};
};

CmtSet cmt_generators(int rank);

inline constexpr int kCmtCacheVersion = 1;

/// Cache file name for a rank inside `dir`.
std::filesystem::path cmt_cache_path(const std::filesystem::path &dir, int rank);
void write_cmt_cache(const std::filesystem::path &file, const CmtSet &set);
/// nullopt on a missing file, a version mismatch, or a rank mismatch.
std::optional<CmtSet> read_cmt_cache(const std::filesystem::path &file, int rank);
/// Reads the cache in `dir` if usable, otherwise builds and writes it.
CmtSet load_cmt_generators(int rank, const std::optional<std::filesystem::path> &dir);

} // namespace outfn
