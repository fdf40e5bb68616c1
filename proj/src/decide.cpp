#include "outfn/decide.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace outfn {

Rational cap_constant(int rank, const Rational &mu) {
  if (rank < 2)
    throw std::domain_error("cap constant needs rank >= 2");
  if (mu <= Rational(1))
    throw std::domain_error("cap constant needs mu > 1");
  return Rational(rank) * Rational(3 * rank - 3) * pow(mu, static_cast<unsigned>(3 * rank - 1));
}

std::optional<std::size_t> ClosureSet::find(const OuterKey &key) const {
  auto [lo, hi] = index_.equal_range(key.hash());
  for (auto it = lo; it != hi; ++it)
    if (members_[it->second] == key)
      return it->second;
  return std::nullopt;
}

bool ClosureSet::insert(OuterKey key, Parent parent, unsigned depth, const Rational &norm) {
  if (find(key))
    return false;
  index_.emplace(key.hash(), members_.size());
  members_.push_back(std::move(key));
  parents_.push_back(parent);
  depth_.push_back(depth);
  if (norm > max_norm_)
    max_norm_ = norm;
  return true;
}

std::vector<std::size_t> ClosureSet::path(std::size_t i) const {
  std::vector<std::size_t> out;
  while (parents_[i].member != kNoParent) {
    out.push_back(parents_[i].generator);
    i = parents_[i].member;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

OuterAut path_conjugator(const std::vector<std::size_t> &path, const CmtSet &gens) {
  OuterAut tau = OuterAut::identity(gens.rank);
  for (std::size_t g : path)
    tau = compose(gens.generators.at(g).forward, tau);
  return tau;
}

namespace {

std::size_t twice_floor(const Rational &cap) {
  Rational twice = cap * Rational(2);
  std::int64_t f = twice.floor();
  return f < 0 ? 0 : static_cast<std::size_t>(f);
}

template <typename Fn> void parallel_for(std::size_t count, unsigned threads, Fn &&fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::jthread> pool;
  pool.reserve(used - 1);
  for (unsigned t = 1; t < used; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += used)
        fn(i);
    });
  for (std::size_t i = 0; i < count; i += used)
    fn(i);
}

Endo conjugate_repr(const CmtGenerator &z, const Endo &sigma) {
  return compose(z.forward.repr(), compose(sigma, z.inverse.repr()));
}

using ScanFn = std::function<std::optional<VisibleReduction>(const Endo &)>;

struct ScanHit {
  Endo psi;
  VisibleReduction reduction;
  std::vector<std::size_t> path;
};

} // namespace

class ClosureBuilder {
public:
  ClosureBuilder(const OuterAut &seed, const Rational &mu, const CmtSet &gens,
                 const ClosureOptions &opts)
      : seed_(seed), gens_(gens), opts_(opts) {
    if (gens.rank != seed.rank())
      throw std::invalid_argument("generator set rank differs from the automorphism rank");
    Rational seed_norm = norm(seed);
    if (mu <= seed_norm)
      throw std::domain_error("mu must exceed the norm " + seed_norm.str());
    set_.rank_ = seed.rank();
    set_.mu_ = mu;
    set_.cap_ = cap_constant(seed.rank(), mu);
    cap2_ = twice_floor(set_.cap_);
  }

  const OuterKey *target = nullptr;
  ScanFn scan;
  std::optional<ScanHit> hit;
  std::size_t scanned = 0;

  ClosureSet run() {
    OuterKey seed_key(seed_);
    set_.insert(seed_key, {}, 0, norm(seed_));
    if (target && *target == seed_key)
      return finish(false);
    if (scan) {
      ++scanned;
      if (auto red = scan(seed_.repr())) {
        hit = ScanHit{seed_.repr(), std::move(*red), {}};
        return finish(false);
      }
    }

    const std::size_t ngen = gens_.generators.size();
    struct Item {
      std::optional<OuterKey> key;
      std::size_t norm2 = 0;
      std::optional<VisibleReduction> flag;
      std::optional<Endo> conj;
    };
    std::vector<Item> items;
    for (std::size_t head = 0; head < set_.size();) {
      const std::size_t stop = std::min(set_.size(), head + std::max<std::size_t>(1, opts_.batch));
      const std::size_t count = (stop - head) * ngen;
      items.assign(count, Item{});
      parallel_for(count, opts_.threads, [&](std::size_t i) {
        const std::size_t m = head + i / ngen;
        const CmtGenerator &z = gens_.generators[i % ngen];
        Endo conj = conjugate_repr(z, set_.members_[m].representative());
        Item &it = items[i];
        it.norm2 = norm_twice(conj);
        if (scan) {
          it.flag = scan(conj);
          if (it.flag)
            it.conj = conj;
        }
        if (it.norm2 <= cap2_)
          it.key = OuterKey::of_trusted(conj);
      });
      for (std::size_t i = 0; i < count; ++i) {
        Item &it = items[i];
        const std::size_t m = head + i / ngen;
        const std::size_t g = i % ngen;
        if (scan) {
          ++scanned;
          if (it.flag) {
            auto p = set_.path(m);
            p.push_back(g);
            hit = ScanHit{std::move(*it.conj), std::move(*it.flag), std::move(p)};
            return finish(false);
          }
        }
        if (!it.key)
          continue;
        bool is_target = target && *target == *it.key;
        bool added = set_.insert(std::move(*it.key), {m, g}, set_.depth_[m] + 1,
                                 Rational(static_cast<std::int64_t>(it.norm2), 2));
        if (added && is_target)
          return finish(false);
      }
      head = stop;
    }
    return finish(true);
  }

private:
  ClosureSet finish(bool complete) {
    set_.complete_ = complete;
    return std::move(set_);
  }

  const OuterAut &seed_;
  const CmtSet &gens_;
  ClosureOptions opts_;
  ClosureSet set_;
  std::size_t cap2_ = 0;
};

ClosureSet closure_set(const OuterAut &phi, const Rational &mu, const CmtSet &gens,
                       const ClosureOptions &opts) {
  return ClosureBuilder(phi, mu, gens, opts).run();
}

std::vector<OuterKey> s_plus(const ClosureSet &s, const CmtSet &gens, const ClosureOptions &opts) {
  const std::size_t ngen = gens.generators.size();
  std::vector<OuterKey> out;
  std::unordered_set<OuterKey> seen;
  std::vector<std::optional<OuterKey>> keys;
  const std::size_t batch = std::max<std::size_t>(1, opts.batch);
  for (std::size_t head = 0; head < s.size(); head += batch) {
    const std::size_t stop = std::min(s.size(), head + batch);
    const std::size_t count = (stop - head) * ngen;
    keys.assign(count, std::nullopt);
    parallel_for(count, opts.threads, [&](std::size_t i) {
      const std::size_t m = head + i / ngen;
      keys[i] = OuterKey::of_trusted(
          conjugate_repr(gens.generators[i % ngen], s.member(m).representative()));
    });
    for (auto &k : keys)
      if (seen.insert(*k).second)
        out.push_back(std::move(*k));
  }
  return out;
}

namespace {

Rational default_mu(const Rational &max_norm) { return max_norm + Rational(1); }

} // namespace

ConjugacyResult conjugacy_irreducible(const OuterAut &phi, const OuterAut &psi,
                                      std::optional<Rational> mu, const CmtSet &gens,
                                      const ClosureOptions &opts) {
  if (phi.rank() != psi.rank())
    throw std::invalid_argument("rank mismatch");
  Rational top = std::max(norm(phi), norm(psi));
  Rational m = mu.value_or(default_mu(top));
  if (m <= top)
    throw std::domain_error("mu must exceed max(norm(phi), norm(psi)) = " + top.str());
  OuterKey target(psi);
  ClosureBuilder builder(phi, m, gens, opts);
  builder.target = &target;
  ClosureSet s = builder.run();

  ConjugacyResult r;
  r.mu = m;
  r.cap = s.cap();
  r.members = s.size();
  r.max_norm = s.max_norm();
  if (auto idx = s.find(target)) {
    r.conjugate = true;
    r.path = s.path(*idx);
    r.conjugator = path_conjugator(r.path, gens);
  }
  return r;
}

IrreducibilityResult detect_irreducible(const OuterAut &phi, std::optional<Rational> mu,
                                        const CmtSet &gens, const ClosureOptions &opts) {
  Rational top = norm(phi);
  Rational m = mu.value_or(default_mu(top));
  ClosureBuilder builder(phi, m, gens, opts);
  builder.scan = [](const Endo &e) { return visibly_reducible(e); };
  ClosureSet s = builder.run();

  IrreducibilityResult r;
  r.mu = m;
  r.cap = s.cap();
  r.members = s.size();
  r.scanned = builder.scanned;
  r.max_norm = s.max_norm();
  if (builder.hit) {
    ScanHit &h = *builder.hit;
    OuterAut tau = path_conjugator(h.path, gens);
    r.witness = ReducibleWitness{OuterKey::of_trusted(h.psi).outer(), std::move(h.reduction),
                                 std::move(h.path), std::move(tau)};
  } else {
    r.irreducible = true;
  }
  return r;
}

} // namespace outfn
