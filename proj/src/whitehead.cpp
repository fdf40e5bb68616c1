#include "outfn/whitehead.hpp"

#include <algorithm>
#include <numeric>

namespace outfn {

std::vector<InvertiblePair> rose_symmetries(int rank) {
  std::vector<InvertiblePair> out;
  std::vector<int> perm(static_cast<std::size_t>(rank));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned signs = 0; signs < (1u << rank); ++signs) {
      std::vector<FreeWord> fwd(static_cast<std::size_t>(rank)), inv(static_cast<std::size_t>(rank));
      for (int i = 0; i < rank; ++i) {
        bool flip = (signs >> i) & 1u;
        int j = perm[static_cast<std::size_t>(i)];
        fwd[static_cast<std::size_t>(i)] =
            FreeWord::letter(flip ? Letter::gen_inv(j) : Letter::gen(j));
        inv[static_cast<std::size_t>(j)] =
            FreeWord::letter(flip ? Letter::gen_inv(i) : Letter::gen(i));
      }
      out.push_back({Endo(rank, std::move(fwd)), Endo(rank, std::move(inv))});
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

// choice: 0 -> x, 1 -> x m, 2 -> m^-1 x, 3 -> m^-1 x m
Endo multiplier_map(int rank, Letter m, const std::vector<int> &choice) {
  std::vector<FreeWord> images;
  images.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    Letter x = Letter::gen(i);
    if (i == m.index()) {
      images.push_back(FreeWord::letter(x));
      continue;
    }
    int c = choice[static_cast<std::size_t>(i)];
    std::vector<Letter> w;
    if (c & 2)
      w.push_back(m.inv());
    w.push_back(x);
    if (c & 1)
      w.push_back(m);
    images.push_back(FreeWord::reduce(w));
  }
  return Endo(rank, std::move(images));
}

} // namespace

std::vector<InvertiblePair> whitehead_multipliers(int rank) {
  std::vector<InvertiblePair> out;
  for (int o = 0; o < 2 * rank; ++o) {
    Letter m = Letter::from_order(o);
    std::vector<int> choice(static_cast<std::size_t>(rank), 0);
    const int others = rank - 1;
    long total = 1;
    for (int i = 0; i < others; ++i)
      total *= 4;
    for (long code = 0; code < total; ++code) {
      long c = code;
      bool trivial = true;
      for (int i = 0; i < rank; ++i) {
        if (i == m.index())
          continue;
        choice[static_cast<std::size_t>(i)] = static_cast<int>(c % 4);
        trivial = trivial && choice[static_cast<std::size_t>(i)] == 0;
        c /= 4;
      }
      if (trivial)
        continue;
      out.push_back({multiplier_map(rank, m, choice), multiplier_map(rank, m.inv(), choice)});
    }
  }
  return out;
}

std::vector<InvertiblePair> whitehead_automorphisms(int rank) {
  auto out = rose_symmetries(rank);
  auto more = whitehead_multipliers(rank);
  out.insert(out.end(), std::make_move_iterator(more.begin()),
             std::make_move_iterator(more.end()));
  return out;
}

Endo inverse_automorphism(const Endo &phi) {
  const int n = phi.rank();
  const auto moves = whitehead_multipliers(n);
  std::vector<FreeWord> cur = phi.images();
  Endo applied = Endo::identity(n);
  auto total = [](const std::vector<FreeWord> &ws) {
    std::size_t t = 0;
    for (const FreeWord &w : ws)
      t += w.size();
    return t;
  };
  for (std::size_t len = total(cur); len > static_cast<std::size_t>(n);) {
    const InvertiblePair *best = nullptr;
    std::size_t best_len = len;
    for (const InvertiblePair &mv : moves) {
      std::size_t t = 0;
      for (const FreeWord &w : cur) {
        t += apply(mv.forward, w).size();
        if (t >= best_len)
          break;
      }
      if (t < best_len) {
        best_len = t;
        best = &mv;
      }
    }
    if (!best)
      throw NotAnAutomorphism("peak reduction stuck; not an automorphism: " + phi.str());
    for (FreeWord &w : cur)
      w = apply(best->forward, w);
    applied = compose(best->forward, applied);
    len = best_len;
  }
  // applied o phi is now a signed permutation x_i -> x_{p(i)}^{e_i}.
  std::vector<FreeWord> undo(static_cast<std::size_t>(n));
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const FreeWord &w = cur[static_cast<std::size_t>(i)];
    if (w.size() != 1 || hit[static_cast<std::size_t>(w[0].index())])
      throw NotAnAutomorphism("not an automorphism: " + phi.str());
    hit[static_cast<std::size_t>(w[0].index())] = 1;
    undo[static_cast<std::size_t>(w[0].index())] =
        FreeWord::letter(w[0].is_inverse() ? Letter::gen_inv(i) : Letter::gen(i));
  }
  return compose(Endo(n, std::move(undo)), applied);
}

OuterAut invert(const OuterAut &phi) { return OuterAut(inverse_automorphism(phi.repr())); }

} // namespace outfn
