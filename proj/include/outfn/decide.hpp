#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "outfn/autom.hpp"
#include "outfn/cmt.hpp"
#include "outfn/rational.hpp"
#include "outfn/stallings.hpp"

namespace outfn {

/// K = n (3n-3) mu^(3n-1). Throws std::domain_error for n < 2 or mu <= 1.
Rational cap_constant(int rank, const Rational &mu);

struct ClosureOptions {
  unsigned threads = 1;
  /// Members expanded per parallel round; does not affect results.
  std::size_t batch = 32;
};

/// Breadth-first closure of a seed under conjugation by CMT generators,
/// keeping only classes with norm at most the cap.
class ClosureSet {
public:
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

  struct Parent {
    std::size_t member = kNoParent; ///< index of the conjugated member
    std::size_t generator = 0;      ///< index into the generator set
  };

  int rank() const { return rank_; }
  const Rational &mu() const { return mu_; }
  const Rational &cap() const { return cap_; }
  /// False when the expansion stopped early (target found or witness found).
  bool complete() const { return complete_; }

  std::size_t size() const { return members_.size(); }
  const OuterKey &member(std::size_t i) const { return members_[i]; }
  const std::vector<OuterKey> &members() const { return members_; }
  const Parent &parent(std::size_t i) const { return parents_[i]; }
  unsigned depth(std::size_t i) const { return depth_[i]; }
  const Rational &max_norm() const { return max_norm_; }

  std::optional<std::size_t> find(const OuterKey &key) const;
  bool contains(const OuterKey &key) const { return find(key).has_value(); }

  /// Generator indices g_1, ..., g_d with member(i) = z_d ... z_1 seed z_1^-1 ... z_d^-1.
  std::vector<std::size_t> path(std::size_t i) const;

private:
  friend class ClosureBuilder;
  bool insert(OuterKey key, Parent parent, unsigned depth, const Rational &norm);

  int rank_ = 0;
  Rational mu_;
  Rational cap_;
  bool complete_ = false;
  std::vector<OuterKey> members_;
  std::vector<Parent> parents_;
  std::vector<unsigned> depth_;
  std::unordered_multimap<std::size_t, std::size_t> index_;
  Rational max_norm_{0};
};

/// tau = z_d ... z_1 for a generator path.
OuterAut path_conjugator(const std::vector<std::size_t> &path, const CmtSet &gens);

/// The fixpoint S_{phi,mu}. Requires mu > norm(phi) (std::domain_error).
ClosureSet closure_set(const OuterAut &phi, const Rational &mu, const CmtSet &gens,
                       const ClosureOptions &opts = {});

/// S+: every zeta sigma zeta^-1 for sigma in S and zeta a generator, without
/// the norm cap, deduplicated by outer class in breadth-first order.
std::vector<OuterKey> s_plus(const ClosureSet &s, const CmtSet &gens,
                             const ClosureOptions &opts = {});

struct ConjugacyResult {
  bool conjugate = false;
  /// On success: psi = tau phi tau^-1 with tau = path_conjugator(path).
  std::vector<std::size_t> path;
  std::optional<OuterAut> conjugator;
  Rational mu;
  Rational cap;
  std::size_t members = 0;
  Rational max_norm;
};

/// Conjugacy of irreducible outer automorphisms: psi is conjugate to phi iff
/// its class lies in S_{phi,mu}. mu defaults to max(norms) + 1. The
/// expansion stops as soon as psi is reached.
ConjugacyResult conjugacy_irreducible(const OuterAut &phi, const OuterAut &psi,
                                      std::optional<Rational> mu, const CmtSet &gens,
                                      const ClosureOptions &opts = {});

struct ReducibleWitness {
  OuterAut psi;                  ///< visibly reducible member of S+
  VisibleReduction reduction;
  std::vector<std::size_t> path; ///< psi = tau phi tau^-1 with tau from this path
  OuterAut conjugator;
};

struct IrreducibilityResult {
  bool irreducible = false;
  std::optional<ReducibleWitness> witness;
  Rational mu;
  Rational cap;
  std::size_t members = 0;     ///< closure members generated before stopping
  std::size_t scanned = 0;     ///< elements of S+ checked for visible reducibility
  Rational max_norm;
};

/// Scans S+ = s_plus(closure_set(phi, mu)) in breadth-first order for a
/// visibly reducible element. mu defaults to norm(phi) + 1.
IrreducibilityResult detect_irreducible(const OuterAut &phi, std::optional<Rational> mu,
                                        const CmtSet &gens, const ClosureOptions &opts = {});

} // namespace outfn
