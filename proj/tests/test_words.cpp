#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "outfn/word.hpp"

using namespace outfn;

namespace {

FreeWord w(const char *s) { return FreeWord::parse(s); }

FreeWord random_word(std::mt19937 &rng, int rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, 2 * rank - 1);
  std::vector<Letter> raw;
  for (std::size_t i = len(rng); i > 0; --i)
    raw.push_back(Letter::from_order(letter(rng)));
  return FreeWord::reduce(raw);
}

} // namespace

TEST_CASE("free reduction") {
  CHECK(w("abB") == w("a"));
  CHECK(w("aA").empty());
  CHECK(w("abAB").str() == "abAB");
  CHECK(FreeWord().str() == "1");
  CHECK(w("1").empty());
  CHECK_THROWS_AS(FreeWord::parse("ac", 2), std::out_of_range);
  CHECK_THROWS_AS(FreeWord::from_reduced({Letter::gen(1), Letter::gen(0), Letter::gen_inv(1),
                                          Letter::gen(1)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FreeWord::parse("a1"), std::invalid_argument);
}

TEST_CASE("reduce agrees with an independent reduction and is idempotent") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> letter(0, 5);
  for (int t = 0; t < 500; ++t) {
    std::vector<Letter> raw;
    oracle::Word ref;
    for (int i = 0; i < 12; ++i) {
      Letter l = Letter::from_order(letter(rng));
      raw.push_back(l);
      ref.push_back(l.is_inverse() ? -(l.index() + 1) : l.index() + 1);
    }
    FreeWord r = FreeWord::reduce(raw);
    CHECK(oracle::from(r) == oracle::reduce(ref));
    CHECK(FreeWord::reduce(r.letters()) == r);
  }
}

TEST_CASE("group operations") {
  CHECK((w("ab") * w("Ba")).str() == "aa");
  CHECK(w("abC").inverse().str() == "cBA");
  CHECK(w("a").conjugated_by(w("b")).str() == "baB");
  CHECK(w("ab").pow(3).str() == "ababab");
  CHECK(w("ab").pow(-2).str() == "BABA");
  CHECK(w("ab").pow(0).empty());
  CHECK(w("aB") < w("b"));
  CHECK(w("a") < w("A"));
  CHECK(w("a") < w("ab"));
}

TEST_CASE("cyclic reduction") {
  auto r = cyclic_reduce(w("Aba"));
  CHECK(r.core.str() == "b");
  CHECK(r.conjugator.str() == "A");
  auto e = cyclic_reduce(FreeWord());
  CHECK(e.core.empty());
  CHECK(e.conjugator.empty());

  std::mt19937 rng(11);
  for (int t = 0; t < 300; ++t) {
    FreeWord x = random_word(rng, 3, 10);
    auto c = cyclic_reduce(x);
    CHECK(c.core.word().conjugated_by(c.conjugator) == x);
    CHECK(c.core.size() == x.cyclic_length());
    CHECK(c.core.size() <= x.size());
    CHECK((c.core.size() == x.size()) == x.is_cyclically_reduced());
    CHECK(c.core.size() == oracle::cyclic_length(oracle::from(x)));
  }
}

TEST_CASE("canonical rotation is the least rotation") {
  CyclicWord c = CyclicWord::of(w("bab"));
  CHECK(c.str() == "abb");
  CHECK(CyclicWord::of(w("BA")).str() == "AB");
  CHECK(CyclicWord::of(w("abab")).root().str() == "ab");
  CHECK(CyclicWord::of(w("abab")).root_exponent() == 2);
  CHECK(CyclicWord::of(w("abA")).root_exponent() == 1);
}

TEST_CASE("conjugacy matches brute-force conjugation") {
  std::mt19937 rng(3);
  std::vector<FreeWord> short_words{FreeWord()};
  oracle::for_each_reduced_word(2, 6, [&](const oracle::Word &g) {
    short_words.push_back(oracle::to_free(g));
  });
  for (int t = 0; t < 150; ++t) {
    FreeWord u = random_word(rng, 2, 6);
    FreeWord v = t % 2 ? random_word(rng, 2, 6) : u.conjugated_by(random_word(rng, 2, 3));
    bool brute = false;
    for (const FreeWord &g : short_words)
      if (v.conjugated_by(g) == u) {
        brute = true;
        break;
      }
    bool canonical = CyclicWord::of(u) == CyclicWord::of(v);
    CHECK(canonical == brute);
    CHECK(are_conjugate(u, v) == canonical);
    if (!u.empty() && !v.empty()) {
      auto c = word_conjugator(u, v);
      CHECK(c.has_value() == canonical);
      if (c) {
        CHECK(v.conjugated_by(c->conjugator) == u);
        CHECK(v.conjugated_by(c->centralizer * c->conjugator) == u);
      }
    }
  }
}

TEST_CASE("word conjugator examples") {
  auto c = word_conjugator(w("ab"), w("ba"));
  REQUIRE(c);
  CHECK(w("ba").conjugated_by(c->conjugator) == w("ab"));
  CHECK(c->root.str() == "ab");
  CHECK_FALSE(word_conjugator(w("a"), w("b")));
  auto sq = word_conjugator(w("abab"), w("abab"));
  REQUIRE(sq);
  CHECK(sq->root.str() == "ab");
  CHECK(sq->centralizer == w("ab"));
  CHECK_THROWS_AS(word_conjugator(FreeWord(), w("a")), std::invalid_argument);
}
