#include "outfn/autom.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>

#include "outfn/stallings.hpp"

namespace outfn {

Endo::Endo(int rank, std::vector<FreeWord> images) : rank_(rank), images_(std::move(images)) {
  if (rank < 0 || static_cast<std::size_t>(rank) != images_.size())
    throw std::invalid_argument("endomorphism needs exactly one image per basis letter");
  for (const FreeWord &w : images_)
    if (w.max_rank() > rank)
      throw std::invalid_argument("image '" + w.str() + "' uses a letter outside rank " +
                                  std::to_string(rank));
}

Endo Endo::identity(int rank) {
  std::vector<FreeWord> images;
  images.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i)
    images.push_back(FreeWord::letter(Letter::gen(i)));
  return Endo(rank, std::move(images));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

} // namespace

Endo Endo::parse(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> clauses;
  std::string_view rest = text;
  while (true) {
    auto comma = rest.find(',');
    std::string_view clause = trim(rest.substr(0, comma));
    if (!clause.empty()) {
      auto arrow = clause.find("->");
      if (arrow == std::string_view::npos)
        throw std::invalid_argument("expected 'x->word' in clause '" + std::string(clause) + "'");
      std::string_view lhs = trim(clause.substr(0, arrow));
      if (lhs.size() != 1 || lhs[0] < 'a' || lhs[0] > 'z')
        throw std::invalid_argument("unknown letter on left-hand side: '" + std::string(lhs) +
                                    "'");
      clauses.emplace_back(lhs[0] - 'a', trim(clause.substr(arrow + 2)));
    }
    if (comma == std::string_view::npos)
      break;
    rest.remove_prefix(comma + 1);
  }
  if (clauses.empty())
    throw std::invalid_argument("empty automorphism text");
  const int rank = static_cast<int>(clauses.size());
  std::vector<std::optional<FreeWord>> images(static_cast<std::size_t>(rank));
  for (auto &[index, rhs] : clauses) {
    if (index >= rank)
      throw std::invalid_argument(std::string("missing basis letter: rank is ") +
                                  std::to_string(rank) + " but '" +
                                  static_cast<char>('a' + index) + "' is defined");
    auto &slot = images[static_cast<std::size_t>(index)];
    if (slot)
      throw std::invalid_argument(std::string("duplicate left-hand side '") +
                                  static_cast<char>('a' + index) + "'");
    FreeWord w = FreeWord::parse(rhs);
    if (w.max_rank() > rank)
      throw std::invalid_argument("unknown letter in image '" + std::string(rhs) + "' (rank " +
                                  std::to_string(rank) + ")");
    slot = std::move(w);
  }
  std::vector<FreeWord> out;
  out.reserve(images.size());
  for (auto &w : images)
    out.push_back(std::move(*w));
  return Endo(rank, std::move(out));
}

std::size_t Endo::total_length() const {
  std::size_t t = 0;
  for (const FreeWord &w : images_)
    t += w.size();
  return t;
}

std::string Endo::str() const {
  std::string s;
  for (int i = 0; i < rank_; ++i) {
    if (i > 0)
      s += ", ";
    s += static_cast<char>('a' + i);
    s += "->";
    s += image(i).str();
  }
  return s;
}

std::strong_ordering operator<=>(const Endo &a, const Endo &b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0)
    return c;
  return std::lexicographical_compare_three_way(a.images_.begin(), a.images_.end(),
                                                b.images_.begin(), b.images_.end());
}

FreeWord apply(const Endo &phi, std::span<const Letter> w) {
  std::vector<Letter> acc;
  for (Letter l : w) {
    if (l.index() >= phi.rank())
      throw std::invalid_argument("rank mismatch in apply");
    const FreeWord &img = phi.image(l.index());
    if (l.is_inverse())
      append_inverse_reduced(acc, img.letters());
    else
      append_reduced(acc, img.letters());
  }
  return FreeWord::from_reduced(std::move(acc));
}

FreeWord apply(const Endo &phi, const FreeWord &w) { return apply(phi, w.letters()); }

Endo compose(const Endo &phi, const Endo &psi) {
  if (phi.rank() != psi.rank())
    throw std::invalid_argument("rank mismatch in compose");
  std::vector<FreeWord> images;
  images.reserve(static_cast<std::size_t>(psi.rank()));
  for (const FreeWord &w : psi.images())
    images.push_back(apply(phi, w));
  return Endo(phi.rank(), std::move(images));
}

bool is_automorphism(const Endo &phi) {
  if (phi.rank() == 0)
    return true;
  LabeledGraph g = subgroup_graph(phi.images(), phi.rank());
  // The subgroup is all of F_n iff its based folded graph is the rose.
  return g.vertex_count() == 1 && g.edges().size() == static_cast<std::size_t>(phi.rank());
}

std::size_t norm_twice(const Endo &phi) {
  const int n = phi.rank();
  std::vector<std::vector<Letter>> inverses;
  inverses.reserve(static_cast<std::size_t>(n));
  for (const FreeWord &w : phi.images())
    inverses.push_back(w.inverse().vec());
  std::size_t best = 0;
  for (int i = 0; i < n; ++i) {
    auto u = phi.image(i).letters();
    best = std::max(best, 2 * cyclic_length(u));
    for (int j = i + 1; j < n; ++j) {
      best = std::max(best, cyclic_length_of_product(u, phi.image(j).letters()));
      best = std::max(best, cyclic_length_of_product(u, inverses[static_cast<std::size_t>(j)]));
    }
  }
  return best;
}

OuterAut OuterAut::verify(Endo e) {
  if (!is_automorphism(e))
    throw NotAnAutomorphism("not an automorphism: " + e.str());
  return OuterAut(std::move(e));
}

OuterAut compose(const OuterAut &phi, const OuterAut &psi) {
  return OuterAut(compose(phi.repr_, psi.repr_));
}

OuterAut conjugate(const OuterAut &zeta, const OuterAut &zeta_inv, const OuterAut &sigma) {
  return OuterAut(compose(zeta.repr_, compose(sigma.repr_, zeta_inv.repr_)));
}

Rational norm(const OuterAut &phi) {
  return Rational(static_cast<std::int64_t>(norm_twice(phi.repr())), 2);
}

bool outer_equal(const OuterAut &phi, const OuterAut &psi) {
  if (phi.rank() != psi.rank())
    throw std::invalid_argument("rank mismatch in outer_equal");
  const int n = phi.rank();
  if (n == 0)
    return true;
  auto first = word_conjugator(phi.repr().image(0), psi.repr().image(0));
  if (!first)
    return false;
  // phi(x_0) = z^k g0 psi(x_0) g0^-1 z^-k for every k; search k against the
  // remaining images.
  std::vector<FreeWord> shifted;
  shifted.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    shifted.push_back(psi.repr().image(i).conjugated_by(first->conjugator));
  if (n == 1)
    return true;
  const FreeWord &z = first->centralizer;
  const FreeWord zinv = z.inverse();

  auto matches_all = [&](const FreeWord &g) {
    for (int i = 1; i < n; ++i)
      if (shifted[static_cast<std::size_t>(i)].conjugated_by(g) != phi.repr().image(i))
        return false;
    return true;
  };

  const FreeWord &target = phi.repr().image(1);
  // |z^k w z^-k| is convex in k; walk each direction until it is both
  // increasing and longer than the target.
  for (const FreeWord *step : {&z, &zinv}) {
    FreeWord g; // z^0 (or z^-0) then successive powers
    if (step == &zinv)
      g = zinv;
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    while (true) {
      FreeWord w = shifted[1].conjugated_by(g);
      if (w == target && matches_all(g))
        return true;
      if (w.size() > target.size() && prev != std::numeric_limits<std::size_t>::max() &&
          w.size() > prev)
        break;
      prev = w.size();
      g = *step * g;
    }
  }
  return false;
}

namespace {

using Image = std::deque<Letter>;

int conj_delta(const Image &w, Letter x) {
  if (w.empty())
    return 0;
  return (w.front() == x.inv() ? -1 : 1) + (w.back() == x ? -1 : 1);
}

void conj_apply(Image &w, Letter x) {
  if (!w.empty() && w.front() == x.inv())
    w.pop_front();
  else
    w.push_front(x);
  if (!w.empty() && w.back() == x)
    w.pop_back();
  else
    w.push_back(x.inv());
}

struct ConjState {
  std::vector<Image> images;

  explicit ConjState(const Endo &phi) {
    for (const FreeWord &w : phi.images())
      images.emplace_back(w.begin(), w.end());
  }

  int delta(Letter x) const {
    int d = 0;
    for (const Image &w : images)
      d += conj_delta(w, x);
    return d;
  }

  void apply(Letter x) {
    for (Image &w : images)
      conj_apply(w, x);
  }

  void descend(int n) {
    while (true) {
      int best = 0;
      Letter best_x;
      for (int o = 0; o < 2 * n; ++o) {
        Letter x = Letter::from_order(o);
        int d = delta(x);
        if (d < best) {
          best = d;
          best_x = x;
        }
      }
      if (best == 0)
        return;
      apply(best_x);
    }
  }

  std::strong_ordering compare(const std::vector<std::vector<Letter>> &other) const {
    for (std::size_t i = 0; i < images.size(); ++i) {
      auto c = std::lexicographical_compare_three_way(images[i].begin(), images[i].end(),
                                                      other[i].begin(), other[i].end());
      if (c != 0)
        return c;
    }
    return std::strong_ordering::equal;
  }

  std::vector<std::vector<Letter>> snapshot() const {
    std::vector<std::vector<Letter>> out;
    out.reserve(images.size());
    for (const Image &w : images)
      out.emplace_back(w.begin(), w.end());
    return out;
  }
};

Endo to_endo(int n, std::vector<std::vector<Letter>> images) {
  std::vector<FreeWord> words;
  words.reserve(images.size());
  for (auto &w : images)
    words.push_back(FreeWord::from_reduced(std::move(w)));
  return Endo(n, std::move(words));
}

Endo canonical_representative(const Endo &phi) {
  const int n = phi.rank();
  ConjState state(phi);
  state.descend(n);
  auto best = state.snapshot();
  if (n < 2)
    return to_endo(n, std::move(best));

  // The minimizers form a finite subtree of the Cayley tree containing the
  // current point; walk it without backtracking.
  struct Frame {
    Letter came;
    bool root;
    int next;
  };
  std::vector<Frame> stack{{Letter(), true, 0}};
  while (!stack.empty()) {
    Frame &f = stack.back();
    if (f.next == 2 * n) {
      if (!f.root)
        state.apply(f.came.inv());
      stack.pop_back();
      continue;
    }
    Letter x = Letter::from_order(f.next++);
    if (!f.root && x == f.came.inv())
      continue;
    if (state.delta(x) != 0)
      continue;
    state.apply(x);
    if (state.compare(best) < 0)
      best = state.snapshot();
    stack.push_back({x, false, 0});
  }
  return to_endo(n, std::move(best));
}

} // namespace

Endo minimize_inner(const Endo &phi) {
  ConjState state(phi);
  state.descend(phi.rank());
  return to_endo(phi.rank(), state.snapshot());
}

std::size_t hash_words(std::span<const FreeWord> words) {
  std::size_t h = 1469598103934665603ull;
  for (const FreeWord &w : words) {
    for (Letter l : w) {
      h ^= static_cast<std::uint16_t>(l.code());
      h *= 1099511628211ull;
    }
    h ^= 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

OuterKey::OuterKey(const OuterAut &phi) : OuterKey(of_trusted(phi.repr())) {}

OuterKey OuterKey::of_trusted(const Endo &phi) {
  OuterKey k;
  k.rep_ = canonical_representative(phi);
  k.hash_ = hash_words(k.rep_.images());
  return k;
}

} // namespace outfn
