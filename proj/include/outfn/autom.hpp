#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "outfn/rational.hpp"
#include "outfn/word.hpp"

namespace outfn {

/// Endomorphism of F_n given by the images of the basis letters.
class Endo {
public:
  Endo() = default;
  /// Throws std::invalid_argument if the number of images differs from
  /// `rank` or an image uses a letter outside the rank.
  Endo(int rank, std::vector<FreeWord> images);

  static Endo identity(int rank);

  /// Text form `a->ab, b->a`. The rank is the number of clauses; the
  /// left-hand sides must be exactly the first `rank` lowercase letters.
  /// Images are reduced on the way in.
  static Endo parse(std::string_view text);

  int rank() const { return rank_; }
  const FreeWord &image(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<FreeWord> &images() const { return images_; }
  std::size_t total_length() const;

  std::string str() const;

  friend bool operator==(const Endo &, const Endo &) = default;
  friend std::strong_ordering operator<=>(const Endo &a, const Endo &b);

private:
  int rank_ = 0;
  std::vector<FreeWord> images_;
};

FreeWord apply(const Endo &phi, std::span<const Letter> w);
FreeWord apply(const Endo &phi, const FreeWord &w);
/// x_i -> phi(psi(x_i)).
Endo compose(const Endo &phi, const Endo &psi);

/// True iff the images generate F_n (and hence form a basis).
bool is_automorphism(const Endo &phi);

/// Twice the norm ||phi||_B, which is always an integer. Meaningful for
/// automorphisms only.
std::size_t norm_twice(const Endo &phi);

/// An endomorphism that has passed is_automorphism, taken up to inner
/// automorphisms. Equality of representatives is NOT outer equality; use
/// outer_equal or canonical_key for that.
class OuterAut {
public:
  /// Throws NotAnAutomorphism when the images do not form a basis.
  static OuterAut verify(Endo e);
  static OuterAut identity(int rank) { return OuterAut(Endo::identity(rank)); }
  static OuterAut parse(std::string_view text) { return verify(Endo::parse(text)); }

  const Endo &repr() const { return repr_; }
  int rank() const { return repr_.rank(); }
  std::string str() const { return repr_.str(); }

  friend OuterAut compose(const OuterAut &phi, const OuterAut &psi);
  friend OuterAut conjugate(const OuterAut &zeta, const OuterAut &zeta_inv,
                            const OuterAut &sigma);
  friend OuterAut invert(const OuterAut &phi);
  friend class OuterKey;

private:
  explicit OuterAut(Endo e) : repr_(std::move(e)) {}
  Endo repr_;
};

class NotAnAutomorphism : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// phi * psi in Out(F_n).
OuterAut compose(const OuterAut &phi, const OuterAut &psi);
/// zeta * sigma * zeta^-1, with the inverse supplied by the caller.
OuterAut conjugate(const OuterAut &zeta, const OuterAut &zeta_inv, const OuterAut &sigma);

/// max over g != 1 of ||phi(g)||_B / ||g||_B, evaluated on cyclic words of
/// length at most two.
Rational norm(const OuterAut &phi);

/// True iff phi and psi differ by an inner automorphism.
bool outer_equal(const OuterAut &phi, const OuterAut &psi);

/// Canonical representative of an outer class: conjugate so that the total
/// image length is minimal, then take the lexicographically least image
/// tuple among all length minimizers.
class OuterKey {
public:
  explicit OuterKey(const OuterAut &phi);
  /// Same as OuterKey(OuterAut) for an endomorphism known to be invertible.
  static OuterKey of_trusted(const Endo &phi);

  const Endo &representative() const { return rep_; }
  OuterAut outer() const { return OuterAut(rep_); }
  std::size_t hash() const { return hash_; }

  friend bool operator==(const OuterKey &a, const OuterKey &b) {
    return a.hash_ == b.hash_ && a.rep_ == b.rep_;
  }
  friend std::strong_ordering operator<=>(const OuterKey &a, const OuterKey &b) {
    return a.rep_ <=> b.rep_;
  }

private:
  OuterKey() = default;
  Endo rep_;
  std::size_t hash_ = 0;
};

inline OuterKey canonical_key(const OuterAut &phi) { return OuterKey(phi); }

/// Conjugates `phi` by single letters while the total image length drops.
/// Returns the conjugated endomorphism (a length minimizer in its outer class).
Endo minimize_inner(const Endo &phi);

std::size_t hash_words(std::span<const FreeWord> words);

} // namespace outfn

template <> struct std::hash<outfn::OuterKey> {
  std::size_t operator()(const outfn::OuterKey &k) const noexcept { return k.hash(); }
};
