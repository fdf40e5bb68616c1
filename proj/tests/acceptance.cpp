#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>

#include "oracles.hpp"
#include "outfn/cmt.hpp"
#include "outfn/cvmetric.hpp"
#include "outfn/decide.hpp"
#include "outfn/stallings.hpp"

using namespace outfn;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char *title;
  double budget_s;
  std::function<Outcome()> body;
};

unsigned thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

const CmtSet &gens(int rank) {
  static std::map<int, CmtSet> cache;
  auto it = cache.find(rank);
  if (it == cache.end())
    it = cache.emplace(rank, cmt_generators(rank)).first;
  return it->second;
}

const OuterAut &fib() {
  static const OuterAut f = OuterAut::parse("a->ab, b->a");
  return f;
}

std::vector<Rational> random_lengths(std::size_t edges, std::mt19937 &rng) {
  std::uniform_int_distribution<int> d(1, 9);
  std::vector<Rational> raw;
  Rational total;
  for (std::size_t i = 0; i < edges; ++i) {
    raw.emplace_back(d(rng));
    total += raw.back();
  }
  for (Rational &r : raw)
    r = r / total;
  return raw;
}

MarkedMetricGraph random_graph(int rank, int moves, std::mt19937 &rng) {
  auto shapes = enumerate_rank_graphs(rank);
  const TopGraph &g = shapes[std::uniform_int_distribution<std::size_t>(0, shapes.size() - 1)(rng)];
  MarkedMetricGraph x = MarkedMetricGraph::standard(g, random_lengths(g.edges.size(), rng));
  if (moves == 0)
    return x;
  return x.remarked(oracle::random_automorphism(rank, moves, rng).first);
}

/// Product of 1..max_len random CMT generators, with its inverse.
std::pair<OuterAut, OuterAut> random_cmt_word(const CmtSet &s, int max_len, std::mt19937 &rng) {
  int len = std::uniform_int_distribution<int>(1, max_len)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, s.generators.size() - 1);
  OuterAut f = OuterAut::identity(s.rank), g = OuterAut::identity(s.rank);
  for (int i = 0; i < len; ++i) {
    const CmtGenerator &z = s.generators[pick(rng)];
    f = compose(z.forward, f);
    g = compose(g, z.inverse);
  }
  return {f, g};
}

std::vector<FreeWord> block_words(LetterSet b) {
  std::vector<FreeWord> out;
  for (int i = 0; i < 32; ++i)
    if (b & (LetterSet{1} << i))
      out.push_back(FreeWord::letter(Letter::gen(i)));
  return out;
}

/// Checks disjointness, nonemptiness, properness and the conjugacy chain.
bool valid_reduction(const OuterAut &psi, const VisibleReduction &r) {
  const int n = psi.rank();
  const LetterSet all = (LetterSet{1} << n) - 1;
  LetterSet seen = 0;
  for (LetterSet b : r.blocks) {
    if (b == 0 || (b & ~all) || (b & seen))
      return false;
    seen |= b;
  }
  if (r.blocks.empty() || (r.blocks.size() == 1 && r.blocks[0] == all))
    return false;
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    std::vector<FreeWord> image;
    for (const FreeWord &w : block_words(r.blocks[i]))
      image.push_back(apply(psi.repr(), w));
    auto next = block_words(r.blocks[(i + 1) % r.blocks.size()]);
    if (!conjugate_subgroups(image, next, n))
      return false;
  }
  return true;
}

std::string fmt(const Rational &q) { return q.str(); }

// ---------------------------------------------------------------------------

Outcome norm_vs_brute_force() {
  std::mt19937 rng(101);
  constexpr int kPerRank = 100;
  constexpr int kMaxMoves = 6;
  constexpr std::size_t kMaxLen = 8;
  Outcome o;
  int n_ok = 0;
  for (int rank : {2, 3})
    for (int i = 0; i < kPerRank; ++i) {
      int moves = std::uniform_int_distribution<int>(1, kMaxMoves)(rng);
      Endo phi = oracle::random_automorphism(rank, moves, rng).first;
      Rational got = norm(OuterAut::verify(phi));
      Rational want = oracle::brute_norm(oracle::images_of(phi), kMaxLen);
      if (got == want)
        ++n_ok;
      else if (o.ok) {
        o.ok = false;
        o.detail = "mismatch on " + phi.str() + ": " + fmt(got) + " vs " + fmt(want) + "; ";
      }
    }
  o.detail += std::to_string(n_ok) + "/" + std::to_string(2 * kPerRank) + " agree";
  return o;
}

Outcome rose_displacement_is_norm() {
  std::mt19937 rng(202);
  constexpr int kPerRank = 50;
  Outcome o;
  int n_ok = 0;
  for (int rank : {2, 3}) {
    MarkedMetricGraph rose = MarkedMetricGraph::uniform_rose(rank);
    for (int i = 0; i < kPerRank; ++i) {
      int moves = std::uniform_int_distribution<int>(1, 6)(rng);
      OuterAut phi = OuterAut::verify(oracle::random_automorphism(rank, moves, rng).first);
      if (displacement(rose, phi) == norm(phi))
        ++n_ok;
      else if (o.ok) {
        o.ok = false;
        o.detail = "mismatch on " + phi.str() + "; ";
      }
    }
  }
  o.detail += std::to_string(n_ok) + "/" + std::to_string(2 * kPerRank) + " agree";
  return o;
}

Outcome displacement_vs_brute_force() {
  std::mt19937 rng(303);
  constexpr int kSamples = 50;
  constexpr std::size_t kMaxLen = 8;
  Outcome o;
  int n_ok = 0;
  for (int i = 0; i < kSamples; ++i) {
    MarkedMetricGraph x = random_graph(2, std::uniform_int_distribution<int>(0, 2)(rng), rng);
    Endo phi = oracle::random_automorphism(2, std::uniform_int_distribution<int>(1, 3)(rng), rng).first;
    Rational got = displacement(x, phi);
    Rational want = oracle::brute_displacement(x, oracle::images_of(phi), kMaxLen);
    if (got == want)
      ++n_ok;
    else if (o.ok) {
      o.ok = false;
      o.detail = "mismatch on " + phi.str() + ": " + fmt(got) + " vs " + fmt(want) + "; ";
    }
  }
  o.detail += std::to_string(n_ok) + "/" + std::to_string(kSamples) + " agree";
  return o;
}

Outcome generator_set_properties() {
  Outcome o;
  std::ostringstream d;
  int graphs2 = static_cast<int>(enumerate_rank_graphs(2).size());
  int graphs3 = static_cast<int>(enumerate_rank_graphs(3).size());
  if (graphs2 != 3 || graphs2 != oracle::count_rank_graphs(2) ||
      graphs3 != oracle::count_rank_graphs(3))
    o.ok = false;
  d << "graphs " << graphs2 << "/" << graphs3;
  for (int n : {2, 3}) {
    const CmtSet &s = gens(n);
    std::unordered_set<OuterKey> keys;
    for (const CmtGenerator &z : s.generators)
      keys.insert(OuterKey(z.forward));
    bool whitehead = true, inverses = true, symmetric = true;
    for (const oracle::Pair &p : oracle::whitehead_list(n))
      whitehead = whitehead && keys.count(OuterKey(OuterAut::verify(oracle::to_endo(p.forward))));
    for (const CmtGenerator &z : s.generators) {
      inverses = inverses && keys.count(OuterKey(z.inverse)) &&
                 outer_equal(compose(z.forward, z.inverse), OuterAut::identity(n));
    }
    std::vector<OuterAut> sym;
    for (const oracle::Pair &p : oracle::whitehead_list(n))
      if (std::all_of(p.forward.begin(), p.forward.end(), [](const auto &w) { return w.size() == 1; }))
        sym.push_back(OuterAut::verify(oracle::to_endo(p.forward)));
    for (const CmtGenerator &z : s.generators)
      for (const OuterAut &r : sym)
        symmetric = symmetric && keys.count(OuterKey(compose(r, z.forward))) &&
                    keys.count(OuterKey(compose(z.forward, r)));
    if (!(whitehead && inverses && symmetric))
      o.ok = false;
    d << "; rank " << n << ": " << s.generators.size() << " generators, whitehead "
      << (whitehead ? "ok" : "missing") << ", inverses " << (inverses ? "ok" : "missing")
      << ", symmetries " << (symmetric ? "ok" : "missing");
  }
  o.detail = d.str();
  return o;
}

Outcome conjugacy_of_fibonacci() {
  std::mt19937 rng(505);
  constexpr int kSamples = 20;
  const CmtSet &s = gens(2);
  ClosureOptions opts{thread_count()};
  Outcome o;
  std::size_t max_members = 0;
  int n_ok = 0;
  for (int i = 0; i < kSamples; ++i) {
    auto [z, zi] = random_cmt_word(s, 2, rng);
    OuterAut psi = conjugate(z, zi, fib());
    ConjugacyResult r = conjugacy_irreducible(fib(), psi, std::nullopt, s, opts);
    max_members = std::max(max_members, r.members);
    bool good = r.conjugate && r.conjugator &&
                outer_equal(conjugate(*r.conjugator, invert(*r.conjugator), fib()), psi);
    if (good)
      ++n_ok;
    else if (o.ok) {
      o.ok = false;
      o.detail = "missed " + psi.str() + "; ";
    }
  }
  OuterAut sq = compose(fib(), fib());
  auto t1 = oracle::trace(oracle::abelianization(oracle::images_of(fib().repr())));
  auto t2 = oracle::trace(oracle::abelianization(oracle::images_of(sq.repr())));
  ConjugacyResult neg = conjugacy_irreducible(fib(), sq, std::nullopt, s, opts);
  if (neg.conjugate || t1 == t2)
    o.ok = false;
  o.detail += std::to_string(n_ok) + "/" + std::to_string(kSamples) +
              " conjugates found (largest closure " + std::to_string(max_members) +
              "); square: " + (neg.conjugate ? "YES" : "NO") + " after " +
              std::to_string(neg.members) + " members, cap " + fmt(neg.cap);
  return o;
}

Outcome closure_invariants() {
  const Rational mu(3);
  const CmtSet &s = gens(2);
  Outcome o;
  std::vector<std::vector<OuterKey>> runs;
  for (unsigned threads : {1u, 2u, 4u})
    runs.push_back(closure_set(fib(), mu, s, ClosureOptions{threads}).members());
  const Rational cap = cap_constant(2, mu);
  Rational max_norm;
  for (const OuterKey &k : runs[0]) {
    auto m = oracle::abelianization(oracle::images_of(k.representative()));
    Rational nm = norm(k.outer());
    max_norm = std::max(max_norm, nm);
    if (oracle::trace(m) != 1 || oracle::det(m) != -1 || nm > cap)
      o.ok = false;
  }
  bool same = runs[0] == runs[1] && runs[0] == runs[2];
  if (!same)
    o.ok = false;
  o.detail = std::to_string(runs[0].size()) + " members, max norm " + fmt(max_norm) + ", cap " +
             fmt(cap) + ", threads 1/2/4 " + (same ? "identical" : "differ");
  return o;
}

Outcome irreducibility_detection() {
  std::mt19937 rng(707);
  constexpr int kHidden = 10;
  ClosureOptions opts{thread_count()};
  Outcome o;
  std::ostringstream d;
  auto check_reducible = [&](const OuterAut &phi, const CmtSet &s) {
    IrreducibilityResult r = detect_irreducible(phi, std::nullopt, s, opts);
    if (r.irreducible || !r.witness)
      return false;
    const ReducibleWitness &w = *r.witness;
    return outer_equal(conjugate(w.conjugator, invert(w.conjugator), phi), w.psi) &&
           valid_reduction(w.psi, w.reduction);
  };
  bool swap = check_reducible(OuterAut::parse("a->b, b->a"), gens(2));
  bool rank3 = check_reducible(OuterAut::parse("a->ab, b->a, c->c"), gens(3));
  d << "swap " << (swap ? "reducible" : "MISSED") << ", rank 3 " << (rank3 ? "reducible" : "MISSED");
  if (!swap || !rank3)
    o.ok = false;

  int hidden_ok = 0;
  std::uniform_int_distribution<int> exp(-2, 2), sign(0, 1), kind(0, 1);
  for (int i = 0; i < kHidden; ++i) {
    OuterAut theta = OuterAut::identity(2);
    do {
      int e1 = sign(rng) ? 1 : -1, e2 = sign(rng) ? 1 : -1;
      int k = exp(rng), l = exp(rng);
      auto pw = [](char c, int p) {
        std::string s;
        for (int j = 0; j < std::abs(p); ++j)
          s += p > 0 ? c : static_cast<char>(c - 'a' + 'A');
        return s;
      };
      std::string text =
          kind(rng) ? "a->" + pw('a', e1) + ", b->" + pw('a', k) + pw('b', e2) + pw('a', l)
                    : "a->" + pw('b', e1) + ", b->" + pw('b', k) + pw('a', e2) + pw('b', -k);
      theta = OuterAut::parse(text);
    } while (!visibly_reducible(theta));
    auto [t, ti] = random_cmt_word(gens(2), 2, rng);
    if (check_reducible(conjugate(t, ti, theta), gens(2)))
      ++hidden_ok;
  }
  d << ", hidden " << hidden_ok << "/" << kHidden;
  if (hidden_ok != kHidden)
    o.ok = false;

  bool fib_oracle = oracle::powers_irreducible(oracle::abelianization(oracle::images_of(fib().repr())));
  IrreducibilityResult f = detect_irreducible(fib(), std::nullopt, gens(2), opts);
  d << ", fibonacci " << (f.irreducible ? "irreducible" : "REDUCIBLE") << " (" << f.members
    << " members, " << f.scanned << " scanned)";
  if (!f.irreducible || !fib_oracle)
    o.ok = false;
  o.detail = d.str();
  return o;
}

Outcome rose_comparison() {
  std::mt19937 rng(808);
  constexpr int kSamples = 50;
  constexpr int kRank = 2;
  const std::vector<Rational> epsilons{thinness_constant(kRank, Rational(2)), Rational(1, 20),
                                       Rational(1, 8)};
  Outcome o;
  int n_ok = 0;
  for (int i = 0; i < kSamples; ++i) {
    const Rational &eps = epsilons[static_cast<std::size_t>(i) % epsilons.size()];
    MarkedMetricGraph x = random_graph(kRank, std::uniform_int_distribution<int>(0, 2)(rng), rng);
    while (is_thin(x, eps))
      x = random_graph(kRank, std::uniform_int_distribution<int>(0, 2)(rng), rng);
    auto trees = maximal_trees(x.graph());
    const SpanningTree &t = trees[std::uniform_int_distribution<std::size_t>(0, trees.size() - 1)(rng)];
    MarkedMetricGraph r = adjacent_uniform_rose(x, t);
    Endo phi = oracle::random_automorphism(kRank, std::uniform_int_distribution<int>(1, 4)(rng), rng).first;
    bool good = stretch(x, r) <= Rational(1) / eps && stretch(r, x) <= Rational(kRank) &&
                displacement(r, phi) <= Rational(kRank) / eps * displacement(x, phi);
    if (good)
      ++n_ok;
    else if (o.ok) {
      o.ok = false;
      o.detail = "bound fails on\n" + x.str() + "; ";
    }
  }
  o.detail += std::to_string(n_ok) + "/" + std::to_string(kSamples) + " within bounds";
  return o;
}

Outcome folding_and_conjugacy() {
  std::mt19937 rng(909);
  constexpr int kSubgroups = 10;
  constexpr int kOrders = 10;
  constexpr int kPairs = 100;
  constexpr std::size_t kConjugatorLen = 4;
  Outcome o;
  std::uniform_int_distribution<int> ngen(1, 3), wlen(1, 5), letter(0, 3);
  auto random_word = [&](int len) {
    oracle::Word w;
    while (static_cast<int>(w.size()) < len) {
      int l = letter(rng);
      int x = l < 2 ? l + 1 : -(l - 1);
      if (w.empty() || w.back() != -x)
        w.push_back(x);
    }
    return w;
  };
  auto random_gens = [&] {
    std::vector<oracle::Word> g;
    int k = ngen(rng);
    for (int j = 0; j < k; ++j)
      g.push_back(random_word(wlen(rng)));
    return g;
  };
  auto to_free = [](const std::vector<oracle::Word> &ws) {
    std::vector<FreeWord> out;
    for (const auto &w : ws)
      out.push_back(oracle::to_free(w));
    return out;
  };

  int confluent = 0;
  for (int i = 0; i < kSubgroups; ++i) {
    auto g = random_gens();
    LabeledGraph folded = subgroup_graph(to_free(g), 2);
    oracle::Graph mine;
    mine.vertices = folded.vertex_count();
    mine.base = *folded.base();
    for (const LabeledEdge &e : folded.edges())
      mine.edges.emplace_back(e.origin, e.label, e.terminus);
    auto want = oracle::based_code(mine);
    for (int j = 0; j < kOrders; ++j)
      if (oracle::based_code(oracle::naive_fold(oracle::wedge(g), rng)) == want)
        ++confluent;
  }
  if (confluent != kSubgroups * kOrders)
    o.ok = false;

  int agree = 0, positives = 0;
  for (int i = 0; i < kPairs; ++i) {
    auto u = random_gens();
    std::vector<oracle::Word> v;
    if (i % 2 == 0) {
      auto h = random_word(std::uniform_int_distribution<int>(0, 4)(rng));
      for (const auto &w : u)
        v.push_back(oracle::concat(oracle::concat(h, w), oracle::inverse(h)));
      if (v.size() >= 2)
        v[0] = oracle::concat(v[0], v[1]);
    } else {
      v = random_gens();
    }
    bool got = conjugate_subgroups(to_free(u), to_free(v), 2);
    bool want = oracle::brute_conjugate(u, v, 2, kConjugatorLen);
    positives += want ? 1 : 0;
    if (got == want)
      ++agree;
  }
  if (agree != kPairs)
    o.ok = false;
  o.detail = std::to_string(confluent) + "/" + std::to_string(kSubgroups * kOrders) +
             " fold orders confluent, " + std::to_string(agree) + "/" + std::to_string(kPairs) +
             " conjugacy answers agree (" + std::to_string(positives) + " conjugate)";
  return o;
}

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "norm matches brute force", 60, norm_vs_brute_force},
      {2, "rose displacement equals norm", 60, rose_displacement_is_norm},
      {3, "candidate displacement matches brute force", 300, displacement_vs_brute_force},
      {4, "generator set", 300, generator_set_properties},
      {5, "conjugacy of irreducibles", 1800, conjugacy_of_fibonacci},
      {6, "closure invariants", 600, closure_invariants},
      {7, "irreducibility", 1800, irreducibility_detection},
      {8, "thick graph versus adjacent rose", 300, rose_comparison},
      {9, "folding and subgroup conjugacy", 120, folding_and_conjugacy},
  };
  int failures = 0;
  for (const Criterion &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs <= c.budget_s;
    bool pass = o.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %d %s  %s: %s (%.2fs of %.0fs%s)\n", c.id, pass ? "PASS" : "FAIL",
                c.title, o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
