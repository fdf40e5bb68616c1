#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "outfn/autom.hpp"
#include "outfn/word.hpp"

namespace outfn {

struct LabeledEdge {
  int origin;
  int label; ///< basis letter index; the edge reads x_label from origin to terminus
  int terminus;

  friend bool operator==(const LabeledEdge &, const LabeledEdge &) = default;
};

/// Directed multigraph with edges labelled by basis letters. Folded graphs
/// additionally satisfy: at most one outgoing and one incoming edge per label
/// at every vertex.
class LabeledGraph {
public:
  LabeledGraph() = default;
  LabeledGraph(int rank, int vertex_count, std::vector<LabeledEdge> edges,
               std::optional<int> base = std::nullopt);

  int rank() const { return rank_; }
  int vertex_count() const { return vertex_count_; }
  const std::vector<LabeledEdge> &edges() const { return edges_; }
  std::optional<int> base() const { return base_; }

  bool is_folded() const;
  /// Number of edge ends at v (a loop counts twice).
  int valence(int v) const;

  /// Follows the word from `start` in a folded graph; nullopt if it falls off.
  std::optional<int> trace(int start, std::span<const Letter> w) const;

  /// Vertex list followed by one `origin label terminus` line per edge.
  std::string dump() const;

private:
  int rank_ = 0;
  int vertex_count_ = 0;
  std::vector<LabeledEdge> edges_;
  std::optional<int> base_;
};

/// Wedge of loops reading the generators, based at vertex 0 (unfolded).
LabeledGraph wedge_of_loops(std::span<const FreeWord> generators, int rank);

/// Folds until no two edges with the same label share an origin or a
/// terminus. Edges are processed in their stored order.
LabeledGraph fold(const LabeledGraph &g);

/// Based folded graph of the subgroup generated by `generators`.
LabeledGraph subgroup_graph(std::span<const FreeWord> generators, int rank);

/// True iff w lies in the subgroup whose based folded graph is g.
bool contains(const LabeledGraph &g, const FreeWord &w);

/// Unbased core: repeatedly deletes vertices of valence <= 1. The result has
/// no base vertex.
LabeledGraph core(const LabeledGraph &g);

/// Isomorphism-invariant code of a connected, folded, unbased graph: the
/// least breadth-first encoding over all start vertices.
std::vector<int> canonical_code(const LabeledGraph &g);

/// True iff <U> and <V> are conjugate in F_n.
bool conjugate_subgroups(std::span<const FreeWord> u, std::span<const FreeWord> v, int rank);

/// Bitmask of basis letters; bit i is x_i.
using LetterSet = std::uint32_t;

struct VisibleReduction {
  /// B_1, ..., B_k with phi(<B_i>) conjugate to <B_{i+1}> (indices mod k).
  std::vector<LetterSet> blocks;
};

/// Searches for disjoint nonempty B_1..B_k (B_1 != B when k == 1) with
/// phi(<B_i>) conjugate to <B_{i+1}>. Among all such families the one with
/// least total size is returned (ties: lexicographically least block list).
std::optional<VisibleReduction> visibly_reducible(const OuterAut &phi);
/// Same test on a representative already known to be an automorphism.
std::optional<VisibleReduction> visibly_reducible(const Endo &phi);

std::string format_letter_set(LetterSet s);

} // namespace outfn
