#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "outfn/stallings.hpp"

using namespace outfn;

namespace {

std::vector<FreeWord> words(std::initializer_list<const char *> ws) {
  std::vector<FreeWord> out;
  for (const char *s : ws)
    out.push_back(FreeWord::parse(s));
  return out;
}

oracle::Graph to_oracle(const LabeledGraph &g) {
  oracle::Graph o;
  o.vertices = g.vertex_count();
  o.base = g.base().value_or(0);
  for (const LabeledEdge &e : g.edges())
    o.edges.emplace_back(e.origin, e.label, e.terminus);
  return o;
}

std::vector<oracle::Word> random_gens(std::mt19937 &rng, int rank, std::size_t max_len,
                                      int count) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<int> letter(1, rank);
  std::vector<oracle::Word> out;
  while (static_cast<int>(out.size()) < count) {
    oracle::Word w;
    for (std::size_t i = len(rng); i > 0; --i)
      w.push_back(letter(rng) * (rng() % 2 ? 1 : -1));
    w = oracle::reduce(w);
    if (!w.empty())
      out.push_back(w);
  }
  return out;
}

std::vector<FreeWord> to_free(const std::vector<oracle::Word> &ws) {
  std::vector<FreeWord> out;
  for (const auto &w : ws)
    out.push_back(oracle::to_free(w));
  return out;
}

} // namespace

TEST_CASE("subgroup graphs") {
  LabeledGraph g = subgroup_graph(words({"a"}), 2);
  CHECK(g.vertex_count() == 1);
  CHECK(g.edges() == std::vector<LabeledEdge>{{0, 0, 0}});

  LabeledGraph h = subgroup_graph(words({"baB"}), 2);
  CHECK(h.vertex_count() == 2);
  CHECK(h.edges().size() == 2);
  CHECK(h.is_folded());
  CHECK(h.base() == 0);
  CHECK(contains(h, FreeWord::parse("baaB")));
  CHECK_FALSE(contains(h, FreeWord::parse("a")));

  LabeledGraph r = subgroup_graph(words({"ab", "aba"}), 2);
  CHECK(r.vertex_count() == 1);
  CHECK(r.edges().size() == 2);
}

TEST_CASE("fold examples") {
  LabeledGraph folded = subgroup_graph(words({"ab", "Ba"}), 2);
  CHECK(fold(folded).edges() == folded.edges());

  LabeledGraph path(1, 3, {{0, 0, 1}, {2, 0, 1}}, 0);
  LabeledGraph f = fold(path);
  CHECK(f.is_folded());
  CHECK(f.edges().size() == 1);

  LabeledGraph g = fold(wedge_of_loops(words({"ab", "a"}), 2));
  CHECK(g.is_folded());
  CHECK(contains(g, FreeWord::parse("a")));
  CHECK(contains(g, FreeWord::parse("b")));
  CHECK(contains(g, FreeWord::parse("bAbab")));
}

TEST_CASE("folding is confluent across random fold orders") {
  std::mt19937 rng(31);
  for (int t = 0; t < 40; ++t) {
    auto gens = random_gens(rng, 2 + t % 2, 6, 1 + t % 3);
    auto reference = oracle::based_code(to_oracle(subgroup_graph(to_free(gens), 3)));
    for (int k = 0; k < 10; ++k)
      CHECK(oracle::based_code(oracle::naive_fold(oracle::wedge(gens), rng)) == reference);
  }
}

TEST_CASE("membership agrees with products of generators") {
  std::mt19937 rng(37);
  for (int t = 0; t < 30; ++t) {
    auto gens = random_gens(rng, 2, 4, 2);
    LabeledGraph g = subgroup_graph(to_free(gens), 2);
    std::vector<oracle::Word> alphabet;
    for (const auto &x : gens) {
      alphabet.push_back(x);
      alphabet.push_back(oracle::inverse(x));
    }
    // Products of up to three generators are members.
    std::vector<oracle::Word> products{{}};
    for (int len = 0; len < 3; ++len) {
      std::vector<oracle::Word> next;
      for (const auto &p : products)
        for (const auto &x : alphabet)
          next.push_back(oracle::concat(p, x));
      products.insert(products.end(), next.begin(), next.end());
    }
    for (const auto &p : products)
      CHECK(contains(g, oracle::to_free(p)));
    // Short words agree with the independent folding.
    oracle::Graph ref = oracle::naive_fold(oracle::wedge(gens), rng);
    oracle::for_each_reduced_word(2, 5, [&](const oracle::Word &w) {
      CHECK(contains(g, oracle::to_free(w)) == oracle::member(ref, w));
    });
  }
}

TEST_CASE("cores") {
  LabeledGraph c = core(subgroup_graph(words({"baB"}), 2));
  CHECK(c.vertex_count() == 1);
  CHECK(c.edges() == std::vector<LabeledEdge>{{0, 0, 0}});
  CHECK_FALSE(c.base());

  LabeledGraph rose = core(subgroup_graph(words({"a", "b"}), 2));
  CHECK(rose.vertex_count() == 1);
  CHECK(rose.edges().size() == 2);

  LabeledGraph tree(2, 3, {{0, 0, 1}, {1, 1, 2}}, 0);
  CHECK(core(tree).vertex_count() == 0);
}

TEST_CASE("conjugate subgroups") {
  CHECK(conjugate_subgroups(words({"a"}), words({"baB"}), 2));
  CHECK_FALSE(conjugate_subgroups(words({"a"}), words({"b"}), 2));
  CHECK(conjugate_subgroups(words({"ab"}), words({"ba"}), 2));
  CHECK(conjugate_subgroups(words({"a", "b"}), words({"ab", "b"}), 2));
  CHECK_FALSE(conjugate_subgroups(words({"aa"}), words({"a"}), 2));

  std::mt19937 rng(41);
  for (int t = 0; t < 40; ++t) {
    auto u = random_gens(rng, 2, 5, 1 + t % 2);
    auto g = random_gens(rng, 2, 3, 1)[0];
    std::vector<oracle::Word> v;
    for (const auto &x : u)
      v.push_back(oracle::concat(oracle::concat(g, x), oracle::inverse(g)));
    CHECK(conjugate_subgroups(to_free(u), to_free(v), 2));
    auto w = random_gens(rng, 2, 5, 1 + t % 2);
    CHECK(conjugate_subgroups(to_free(u), to_free(w), 2) ==
          oracle::brute_conjugate(u, w, 2, 4));
  }
}

TEST_CASE("visibly reducible examples") {
  auto swap = visibly_reducible(OuterAut::parse("a->b, b->a"));
  REQUIRE(swap);
  CHECK(swap->blocks == std::vector<LetterSet>{1, 2});
  CHECK(format_letter_set(swap->blocks[0]) == "{a}");

  auto fixed = visibly_reducible(OuterAut::parse("a->ab, b->a, c->c"));
  REQUIRE(fixed);
  CHECK(fixed->blocks == std::vector<LetterSet>{4});

  CHECK_FALSE(visibly_reducible(OuterAut::parse("a->ab, b->a")));
  CHECK_FALSE(visibly_reducible(OuterAut::identity(1)));
  auto id = visibly_reducible(OuterAut::identity(3));
  REQUIRE(id);
  CHECK(id->blocks.size() == 1);
  CHECK(format_letter_set(id->blocks[0]) == "{a}");
}

TEST_CASE("Fibonacci has no invariant basis family, checked exhaustively") {
  auto images = oracle::images_of(Endo::parse("a->ab, b->a"));
  // Families over {a, b}: ({a}), ({b}), ({a},{b}), ({b},{a}).
  std::vector<std::vector<oracle::Word>> blocks{{{1}}, {{2}}};
  auto maps_to = [&](const std::vector<oracle::Word> &from, const std::vector<oracle::Word> &to) {
    std::vector<oracle::Word> img;
    for (const auto &x : from)
      img.push_back(oracle::substitute(images, x));
    return oracle::brute_conjugate(img, to, 2, 4);
  };
  CHECK_FALSE(maps_to(blocks[0], blocks[0]));
  CHECK_FALSE(maps_to(blocks[1], blocks[1]));
  CHECK_FALSE((maps_to(blocks[0], blocks[1]) && maps_to(blocks[1], blocks[0])));
}

TEST_CASE("visibly reducible witnesses are valid and never occur for irreducible inputs") {
  std::mt19937 rng(43);
  int irreducible_seen = 0;
  for (int t = 0; t < 150; ++t) {
    int n = 2 + t % 2;
    auto [p, pi] = oracle::random_automorphism(n, 1 + t % 6, rng);
    auto r = visibly_reducible(p);
    if (oracle::powers_irreducible(oracle::abelianization(oracle::images_of(p)))) {
      ++irreducible_seen;
      CHECK_FALSE(r);
    }
    if (!r)
      continue;
    LetterSet used = 0;
    for (std::size_t i = 0; i < r->blocks.size(); ++i) {
      LetterSet b = r->blocks[i];
      CHECK(b != 0);
      CHECK((used & b) == 0);
      used |= b;
      LetterSet next = r->blocks[(i + 1) % r->blocks.size()];
      std::vector<FreeWord> img, target;
      for (int j = 0; j < n; ++j) {
        if (b & (1u << j))
          img.push_back(p.image(j));
        if (next & (1u << j))
          target.push_back(FreeWord::letter(Letter::gen(j)));
      }
      CHECK(conjugate_subgroups(img, target, n));
    }
    if (r->blocks.size() == 1)
      CHECK(r->blocks[0] != (1u << n) - 1);
  }
  CHECK(irreducible_seen > 5);
}
