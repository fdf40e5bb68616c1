#include "outfn/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace outfn {

char letter_char(Letter l) {
  if (l.index() >= 26)
    throw std::out_of_range("letter index beyond text alphabet");
  char base = l.is_inverse() ? 'A' : 'a';
  return static_cast<char>(base + l.index());
}

Letter letter_from_char(char c) {
  if (c >= 'a' && c <= 'z')
    return Letter::gen(c - 'a');
  if (c >= 'A' && c <= 'Z')
    return Letter::gen_inv(c - 'A');
  throw std::invalid_argument(std::string("not a basis letter: '") + c + "'");
}

std::size_t cancellation(std::span<const Letter> u, std::span<const Letter> v) {
  std::size_t c = 0;
  std::size_t limit = std::min(u.size(), v.size());
  while (c < limit && u[u.size() - 1 - c] == v[c].inv())
    ++c;
  return c;
}

std::size_t cyclic_length(std::span<const Letter> w) {
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inv()) {
    ++lo;
    --hi;
  }
  return hi - lo;
}

std::size_t cyclic_length_of_product(std::span<const Letter> u, std::span<const Letter> v) {
  std::size_t c = cancellation(u, v);
  // Reduced product is u[0, nu) v[c, |v|).
  std::size_t nu = u.size() - c;
  std::size_t total = nu + (v.size() - c);
  auto at = [&](std::size_t i) { return i < nu ? u[i] : v[c + (i - nu)]; };
  std::size_t lo = 0, hi = total;
  while (hi - lo >= 2 && at(lo) == at(hi - 1).inv()) {
    ++lo;
    --hi;
  }
  return hi - lo;
}

FreeWord FreeWord::reduce(std::span<const Letter> raw, std::optional<int> rank) {
  std::vector<Letter> acc;
  acc.reserve(raw.size());
  for (Letter l : raw) {
    if (l.code() == 0)
      throw std::invalid_argument("null letter");
    if (rank && l.index() >= *rank)
      throw std::out_of_range("letter index " + std::to_string(l.index()) +
                              " out of range for rank " + std::to_string(*rank));
    push_reduced(acc, l);
  }
  return FreeWord(std::move(acc));
}

FreeWord FreeWord::from_reduced(std::vector<Letter> letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (letters[i].code() == 0)
      throw std::invalid_argument("null letter");
    if (i > 0 && letters[i] == letters[i - 1].inv())
      throw std::invalid_argument("word is not freely reduced");
  }
  return FreeWord(std::move(letters));
}

FreeWord FreeWord::parse(std::string_view text, std::optional<int> rank) {
  if (text == "1")
    return {};
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (char c : text)
    raw.push_back(letter_from_char(c));
  return reduce(raw, rank);
}

int FreeWord::max_rank() const {
  int r = 0;
  for (Letter l : letters_)
    r = std::max(r, l.index() + 1);
  return r;
}

FreeWord FreeWord::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.push_back(it->inv());
  return FreeWord(std::move(out));
}

FreeWord FreeWord::operator*(const FreeWord &o) const {
  std::vector<Letter> acc;
  acc.reserve(letters_.size() + o.letters_.size());
  acc = letters_;
  append_reduced(acc, o.letters_);
  return FreeWord(std::move(acc));
}

FreeWord FreeWord::conjugated_by(const FreeWord &g) const {
  std::vector<Letter> acc = g.letters_;
  append_reduced(acc, letters_);
  append_inverse_reduced(acc, g.letters_);
  return FreeWord(std::move(acc));
}

FreeWord FreeWord::pow(long k) const {
  const FreeWord base = k < 0 ? inverse() : *this;
  long m = k < 0 ? -k : k;
  std::vector<Letter> acc;
  for (long i = 0; i < m; ++i)
    append_reduced(acc, base.letters_);
  return FreeWord(std::move(acc));
}

bool FreeWord::is_cyclically_reduced() const {
  return letters_.size() < 2 || letters_.front() != letters_.back().inv();
}

std::string FreeWord::str() const {
  if (letters_.empty())
    return "1";
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_)
    s.push_back(letter_char(l));
  return s;
}

std::strong_ordering operator<=>(const FreeWord &a, const FreeWord &b) {
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                b.letters_.begin(), b.letters_.end());
}

std::size_t least_rotation(std::span<const Letter> w) {
  const std::size_t n = w.size();
  if (n < 2)
    return 0;
  std::vector<long> fail(2 * n, -1);
  std::size_t k = 0;
  auto at = [&](std::size_t i) { return w[i % n].order(); };
  for (std::size_t j = 1; j < 2 * n; ++j) {
    int sj = at(j);
    long i = fail[j - k - 1];
    while (i != -1 && sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k + static_cast<std::size_t>(i) + 1))
        k = j - static_cast<std::size_t>(i) - 1;
      i = fail[static_cast<std::size_t>(i)];
    }
    if (sj != at(k + static_cast<std::size_t>(i + 1))) {
      // i == -1 here
      if (sj < at(k))
        k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k % n;
}

CyclicReduction cyclic_reduce(const FreeWord &w) {
  auto letters = w.letters();
  std::size_t lo = 0, hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inv()) {
    ++lo;
    --hi;
  }
  auto core = letters.subspan(lo, hi - lo);
  std::size_t r = least_rotation(core);
  std::vector<Letter> rotated;
  rotated.reserve(core.size());
  rotated.insert(rotated.end(), core.begin() + static_cast<long>(r), core.end());
  rotated.insert(rotated.end(), core.begin(), core.begin() + static_cast<long>(r));
  // w = t (p q) t^-1 with core = p q and canonical rotation q p, so the
  // conjugator is the prefix t p of w.
  std::vector<Letter> conj(letters.begin(), letters.begin() + static_cast<long>(lo + r));
  return CyclicReduction{CyclicWord(FreeWord::from_reduced(std::move(rotated))),
                         FreeWord::from_reduced(std::move(conj))};
}

CyclicWord CyclicWord::of(const FreeWord &w) { return cyclic_reduce(w).core; }

namespace {

std::size_t smallest_period(std::span<const Letter> w) {
  const std::size_t n = w.size();
  if (n == 0)
    return 0;
  std::vector<std::size_t> fail(n + 1, 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    while (k > 0 && w[i] != w[k])
      k = fail[k];
    if (w[i] == w[k])
      ++k;
    fail[i + 1] = k;
  }
  std::size_t p = n - fail[n];
  return n % p == 0 ? p : n;
}

} // namespace

CyclicWord CyclicWord::root() const {
  std::size_t p = smallest_period(word_.letters());
  std::vector<Letter> r(word_.begin(), word_.begin() + static_cast<long>(p));
  return CyclicWord(FreeWord::from_reduced(std::move(r)));
}

std::size_t CyclicWord::root_exponent() const {
  std::size_t p = smallest_period(word_.letters());
  return p == 0 ? 0 : word_.size() / p;
}

std::optional<WordConjugacy> word_conjugator(const FreeWord &u, const FreeWord &v) {
  if (u.empty() || v.empty())
    throw std::invalid_argument("word_conjugator needs nontrivial words");
  if (u.cyclic_length() != v.cyclic_length())
    return std::nullopt;
  CyclicReduction cu = cyclic_reduce(u);
  CyclicReduction cv = cyclic_reduce(v);
  if (!(cu.core == cv.core))
    return std::nullopt;
  CyclicWord root = cu.core.root();
  FreeWord centralizer = root.word().conjugated_by(cu.conjugator);
  return WordConjugacy{cu.conjugator * cv.conjugator.inverse(), std::move(root),
                       std::move(centralizer)};
}

bool are_conjugate(const FreeWord &u, const FreeWord &v) {
  if (u.empty() || v.empty())
    return u.empty() && v.empty();
  return CyclicWord::of(u) == CyclicWord::of(v);
}

} // namespace outfn
