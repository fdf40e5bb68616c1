#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace outfn {

/// A basis letter x_i or its inverse. Stored as +(i+1) / -(i+1).
class Letter {
public:
  constexpr Letter() = default;

  static constexpr Letter gen(int index) { return Letter(static_cast<std::int16_t>(index + 1)); }
  static constexpr Letter gen_inv(int index) { return Letter(static_cast<std::int16_t>(-(index + 1))); }
  static constexpr Letter from_code(std::int16_t code) { return Letter(code); }

  constexpr int index() const { return (code_ > 0 ? code_ : -code_) - 1; }
  constexpr bool is_inverse() const { return code_ < 0; }
  constexpr Letter inv() const { return Letter(static_cast<std::int16_t>(-code_)); }
  constexpr std::int16_t code() const { return code_; }

  /// Position in the fixed total order a < A < b < B < ...
  constexpr int order() const { return 2 * index() + (is_inverse() ? 1 : 0); }
  static constexpr Letter from_order(int order) {
    return (order & 1) ? gen_inv(order >> 1) : gen(order >> 1);
  }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr std::strong_ordering operator<=>(Letter a, Letter b) {
    return a.order() <=> b.order();
  }

private:
  constexpr explicit Letter(std::int16_t code) : code_(code) {}
  std::int16_t code_ = 0;
};

/// Lowercase basis letter, uppercase inverse. Only for indices < 26.
char letter_char(Letter l);
/// Inverse of letter_char. Throws std::invalid_argument for non-letters.
Letter letter_from_char(char c);

/// Appends `l` to a freely reduced sequence, cancelling against its tail.
inline void push_reduced(std::vector<Letter> &acc, Letter l) {
  if (!acc.empty() && acc.back() == l.inv())
    acc.pop_back();
  else
    acc.push_back(l);
}

inline void append_reduced(std::vector<Letter> &acc, std::span<const Letter> tail) {
  for (Letter l : tail)
    push_reduced(acc, l);
}

inline void append_inverse_reduced(std::vector<Letter> &acc, std::span<const Letter> w) {
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    push_reduced(acc, it->inv());
}

/// Number of letters cancelled when the reduced words u and v are multiplied.
std::size_t cancellation(std::span<const Letter> u, std::span<const Letter> v);

/// Cyclically reduced length of a freely reduced word.
std::size_t cyclic_length(std::span<const Letter> w);

/// Cyclically reduced length of the product u*v of two reduced words,
/// computed without materializing the product.
std::size_t cyclic_length_of_product(std::span<const Letter> u, std::span<const Letter> v);

/// Freely reduced word in F_n. The empty word is the identity.
class FreeWord {
public:
  FreeWord() = default;

  /// Freely reduces `raw`. If `rank` is given, every letter index must be
  /// below it (std::out_of_range otherwise).
  static FreeWord reduce(std::span<const Letter> raw, std::optional<int> rank = std::nullopt);
  static FreeWord reduce(std::initializer_list<Letter> raw) {
    return reduce(std::span<const Letter>(raw.begin(), raw.size()));
  }
  /// Wraps an already reduced sequence; throws std::invalid_argument if it
  /// contains a cancelling pair.
  static FreeWord from_reduced(std::vector<Letter> letters);
  /// Parses "aBc" style text; "1" and "" are the identity.
  static FreeWord parse(std::string_view text, std::optional<int> rank = std::nullopt);

  static FreeWord letter(Letter l) { return from_reduced({l}); }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  std::span<const Letter> letters() const { return letters_; }
  const std::vector<Letter> &vec() const { return letters_; }

  /// Largest letter index + 1 (0 for the identity).
  int max_rank() const;

  FreeWord inverse() const;
  FreeWord operator*(const FreeWord &o) const;
  FreeWord conjugated_by(const FreeWord &g) const; ///< g * this * g^-1
  FreeWord pow(long k) const;

  bool is_cyclically_reduced() const;
  std::size_t cyclic_length() const { return outfn::cyclic_length(letters_); }

  std::string str() const;

  friend bool operator==(const FreeWord &, const FreeWord &) = default;
  /// Lexicographic under the letter order; a proper prefix sorts first.
  friend std::strong_ordering operator<=>(const FreeWord &a, const FreeWord &b);

private:
  explicit FreeWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

struct CyclicReduction;

/// Cyclically reduced word stored in its canonical (least) rotation.
class CyclicWord {
public:
  CyclicWord() = default;

  /// Canonical form of the conjugacy class of `w`.
  static CyclicWord of(const FreeWord &w);

  std::size_t size() const { return word_.size(); }
  bool empty() const { return word_.empty(); }
  const FreeWord &word() const { return word_; }
  std::span<const Letter> letters() const { return word_.letters(); }
  std::string str() const { return word_.str(); }

  /// Primitive root: the shortest prefix p with word == p^k.
  CyclicWord root() const;
  /// Exponent k with word == root^k (0 for the identity).
  std::size_t root_exponent() const;

  friend bool operator==(const CyclicWord &a, const CyclicWord &b) { return a.word_ == b.word_; }
  friend std::strong_ordering operator<=>(const CyclicWord &a, const CyclicWord &b) {
    return a.word_ <=> b.word_;
  }

private:
  friend CyclicReduction cyclic_reduce(const FreeWord &w);
  explicit CyclicWord(FreeWord w) : word_(std::move(w)) {}
  FreeWord word_;
};

struct CyclicReduction {
  CyclicWord core;
  FreeWord conjugator; ///< w == conjugator * core * conjugator^-1
};

/// Splits a reduced word into its canonical cyclic core and a conjugator.
CyclicReduction cyclic_reduce(const FreeWord &w);

/// Index of the least rotation of `w` under the letter order (Booth).
std::size_t least_rotation(std::span<const Letter> w);

struct WordConjugacy {
  FreeWord conjugator;   ///< u == conjugator * v * conjugator^-1
  CyclicWord root;       ///< primitive root of the cyclic core of u
  FreeWord centralizer;  ///< generator of the centralizer of u
};

/// Finds g with u = g v g^-1, or nullopt if u and v are not conjugate.
/// All conjugators are centralizer^k * conjugator. Both words must be
/// nontrivial (std::invalid_argument otherwise).
std::optional<WordConjugacy> word_conjugator(const FreeWord &u, const FreeWord &v);

bool are_conjugate(const FreeWord &u, const FreeWord &v);

} // namespace outfn
