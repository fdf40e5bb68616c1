#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "outfn/autom.hpp"
#include "outfn/cmt.hpp"
#include "outfn/rational.hpp"

namespace outfn {

/// Oriented edge: 2*e crosses edge e from its first to its second endpoint,
/// 2*e+1 crosses it backwards.
using DirEdge = int;
using EdgePath = std::vector<DirEdge>;

constexpr DirEdge forward_edge(int e) { return 2 * e; }
constexpr DirEdge backward_edge(int e) { return 2 * e + 1; }
constexpr DirEdge reverse(DirEdge d) { return d ^ 1; }
constexpr int edge_of(DirEdge d) { return d >> 1; }

int origin(const TopGraph &g, DirEdge d);
int terminus(const TopGraph &g, DirEdge d);

/// A point of volume-one outer space: a connected graph with positive
/// rational edge lengths summing to 1, and one closed edge path at the base
/// vertex per basis letter. The marking loops must form a basis of the
/// fundamental group.
class MarkedMetricGraph {
public:
  /// Throws std::invalid_argument if any invariant fails.
  MarkedMetricGraph(TopGraph graph, std::vector<Rational> lengths, int base,
                    std::vector<EdgePath> marking);

  /// Marks each non-tree edge of a breadth-first tree from `base`, in edge
  /// index order, closed up through the tree.
  static MarkedMetricGraph standard(TopGraph graph, std::vector<Rational> lengths, int base = 0);
  static MarkedMetricGraph rose(std::vector<Rational> lengths);
  static MarkedMetricGraph uniform_rose(int rank);

  const TopGraph &graph() const { return graph_; }
  const std::vector<Rational> &lengths() const { return lengths_; }
  int base() const { return base_; }
  const std::vector<EdgePath> &marking() const { return marking_; }
  int rank() const { return graph_.rank(); }

  Rational path_length(const EdgePath &p) const;

  /// Concatenated marking loops for `w`, freely reduced (based at base()).
  EdgePath realize(const FreeWord &w) const;
  /// The basis word whose marking loop is freely homotopic to the closed
  /// path `loop` (read up to conjugacy).
  FreeWord read(const EdgePath &loop) const;

  /// Same graph and lengths, marking x -> marking(alpha(x)). Throws
  /// NotAnAutomorphism unless alpha is invertible.
  MarkedMetricGraph remarked(const Endo &alpha) const;

  /// Lines: `vertices V`, `edge u v len` per edge, `base v`, and
  /// `mark x d1 d2 ...` per letter, where `3+` / `3-` cross edge 3 forwards
  /// or backwards. Blank lines and `#` comments are ignored on input.
  std::string str() const;
  static MarkedMetricGraph parse(std::string_view text);

private:
  TopGraph graph_;
  std::vector<Rational> lengths_;
  int base_ = 0;
  std::vector<EdgePath> marking_;
  /// Letter read on crossing each edge forwards (Letter() on tree edges).
  std::vector<Letter> tree_label_;
  /// Inverse of the marking expressed in the tree basis.
  Endo unmark_;
};

/// Freely reduces an edge path (cancels d followed by reverse(d)).
EdgePath reduce_path(const EdgePath &p);
/// Freely and cyclically reduces a closed edge path.
EdgePath cyclic_reduce_path(const EdgePath &p);

/// Length of the immersed loop freely homotopic to the marking image of w.
Rational loop_length(const MarkedMetricGraph &x, const FreeWord &w);

enum class LoopShape { simple, figure_eight, barbell };

std::string_view shape_name(LoopShape s);

struct CandidateLoop {
  EdgePath path;
  LoopShape shape;
};

/// Embedded simple loops, figure-eights and barbells, each once up to
/// rotation and reversal. Figure-eights and barbells come in both relative
/// orientations of their two loops. Supports at most 64 edges.
std::vector<CandidateLoop> candidates(const MarkedMetricGraph &x);

/// Lambda(X, Y): the largest ratio of Y-length to X-length over candidate loops of X.
Rational stretch(const MarkedMetricGraph &x, const MarkedMetricGraph &y);

/// Lambda(X, phi X).
Rational displacement(const MarkedMetricGraph &x, const OuterAut &phi);
Rational displacement(const MarkedMetricGraph &x, const Endo &phi);

/// True iff some essential loop has length at most eps.
bool is_thin(const MarkedMetricGraph &x, const Rational &eps);

/// Collapses the maximal tree t and rescales every petal to 1/n. Petals
/// follow the non-tree edges in index order.
MarkedMetricGraph adjacent_uniform_rose(const MarkedMetricGraph &x, const SpanningTree &t);

/// 1 / ((3n-3) mu^(3n-2)). Throws std::domain_error for n < 2 or mu <= 1.
Rational thinness_constant(int rank, const Rational &mu);

} // namespace outfn
