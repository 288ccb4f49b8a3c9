#pragma once

// Reduced words in the free group F_k and the combinatorics on them that the
// counting quasimorphisms need.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmlab/errors.hpp"

namespace qmlab {

// A generator or its inverse.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, bool inverted) : code_(inverted ? -(generator + 1) : generator + 1) {}

  constexpr int generator() const { return (code_ > 0 ? code_ : -code_) - 1; }
  constexpr bool inverted() const { return code_ < 0; }
  constexpr int sign() const { return code_ > 0 ? 1 : -1; }
  constexpr Letter inverse() const { return from_code(-code_); }

  // Position in the shortlex letter order a < a^-1 < b < b^-1 < ...
  constexpr int ordinal() const { return 2 * generator() + (inverted() ? 1 : 0); }
  static constexpr Letter from_ordinal(int ordinal) { return Letter(ordinal / 2, ordinal % 2 == 1); }

  friend constexpr bool operator==(Letter, Letter) = default;

 private:
  static constexpr Letter from_code(int code) {
    Letter l;
    l.code_ = code;
    return l;
  }
  int code_ = 1;
};

// Generator names for F_k. "e" is reserved for the identity.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InputError("alphabet must have rank >= 1");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const auto& n = names_[i];
      if (n.empty()) throw InputError("empty generator name");
      if (n == "e") throw InputError("generator name 'e' is reserved for the identity");
      for (char ch : n)
        if (!std::isalpha(static_cast<unsigned char>(ch)) && ch != '_')
          throw InputError("generator name '" + n + "' must be alphabetic");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[j] == n) throw InputError("duplicate generator name '" + n + "'");
    }
  }

  // a, b, c, d, f, g, ... (skipping e).
  static Alphabet standard(int rank = 2) {
    if (rank < 1 || rank > 25) throw InputError("rank must lie in [1, 25]");
    std::vector<std::string> names;
    for (char ch = 'a'; static_cast<int>(names.size()) < rank; ++ch)
      if (ch != 'e') names.emplace_back(1, ch);
    return Alphabet(std::move(names));
  }

  int rank() const { return static_cast<int>(names_.size()); }
  const std::string& name(int generator) const { return names_.at(static_cast<std::size_t>(generator)); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

// A freely reduced word over a rank-k alphabet. Immutable; every constructor
// reduces eagerly.
class Word {
 public:
  explicit Word(int rank = 2) : rank_(rank) {
    if (rank < 1) throw InputError("rank must be >= 1");
  }

  static Word identity(int rank = 2) { return Word(rank); }
  static Word generator(int rank, int index, bool inverted = false) {
    const Letter l(index, inverted);
    return Word(rank, std::span<const Letter>(&l, 1));
  }

  // Validates generator indices and freely reduces.
  Word(int rank, std::span<const Letter> raw) : rank_(rank) {
    if (rank < 1) throw InputError("rank must be >= 1");
    letters_.reserve(raw.size());
    for (Letter l : raw) {
      if (l.generator() < 0 || l.generator() >= rank)
        throw InputError("generator index " + std::to_string(l.generator()) + " outside rank " +
                         std::to_string(rank));
      push_reduced(l);
    }
  }
  Word(int rank, std::initializer_list<Letter> raw) : Word(rank, std::span<const Letter>(raw.begin(), raw.size())) {}

  int rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  bool is_cyclically_reduced() const {
    return letters_.size() < 2 || letters_.front() != letters_.back().inverse();
  }

  friend bool operator==(const Word&, const Word&) = default;

  // Shortlex: length first, then letter ordinals.
  friend std::strong_ordering operator<=>(const Word& u, const Word& v) {
    if (u.rank_ != v.rank_) return u.rank_ <=> v.rank_;
    if (u.size() != v.size()) return u.size() <=> v.size();
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != v[i]) return u[i].ordinal() <=> v[i].ordinal();
    return std::strong_ordering::equal;
  }

 private:
  friend Word multiply(const Word&, const Word&);
  friend Word inverse(const Word&);
  friend struct WordBuilder;

  struct Unchecked {};
  Word(int rank, std::vector<Letter> reduced, Unchecked) : rank_(rank), letters_(std::move(reduced)) {}

  void push_reduced(Letter l) {
    if (!letters_.empty() && letters_.back() == l.inverse())
      letters_.pop_back();
    else
      letters_.push_back(l);
  }

  int rank_;
  std::vector<Letter> letters_;
};

// Accumulates letters with free reduction; used to build products without
// intermediate copies.
struct WordBuilder {
  explicit WordBuilder(int rank) : rank(rank) {}
  void append(Letter l) {
    if (!letters.empty() && letters.back() == l.inverse())
      letters.pop_back();
    else
      letters.push_back(l);
  }
  void append(const Word& w) {
    for (Letter l : w.letters()) append(l);
  }
  Word finish() && { return Word(rank, std::move(letters), Word::Unchecked{}); }

  int rank;
  std::vector<Letter> letters;
};

inline Word reduce(int rank, std::span<const Letter> raw) { return Word(rank, raw); }

inline void require_same_rank(const Word& u, const Word& v) {
  if (u.rank() != v.rank())
    throw InputError("alphabet mismatch: rank " + std::to_string(u.rank()) + " vs " + std::to_string(v.rank()));
}

inline Word multiply(const Word& u, const Word& v) {
  require_same_rank(u, v);
  std::size_t cancel = 0;
  while (cancel < u.size() && cancel < v.size() && u[u.size() - 1 - cancel] == v[cancel].inverse()) ++cancel;
  std::vector<Letter> out;
  out.reserve(u.size() + v.size() - 2 * cancel);
  out.insert(out.end(), u.letters().begin(), u.letters().end() - static_cast<std::ptrdiff_t>(cancel));
  out.insert(out.end(), v.letters().begin() + static_cast<std::ptrdiff_t>(cancel), v.letters().end());
  return Word(u.rank(), std::move(out), Word::Unchecked{});
}

inline Word inverse(const Word& u) {
  std::vector<Letter> out;
  out.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) out.push_back(it->inverse());
  return Word(u.rank(), std::move(out), Word::Unchecked{});
}

inline Word operator*(const Word& u, const Word& v) { return multiply(u, v); }

template <typename... Words>
Word product(const Word& first, const Words&... rest) {
  WordBuilder b(first.rank());
  b.append(first);
  (require_same_rank(first, rest), ...);
  (b.append(rest), ...);
  return std::move(b).finish();
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // u = conjugator * core * conjugator^-1
};

inline CyclicReduction cyclic_reduce(const Word& u) {
  std::size_t k = 0;
  const std::size_t n = u.size();
  while (2 * k + 1 < n && u[k] == u[n - 1 - k].inverse()) ++k;
  const auto letters = u.letters();
  return {Word(u.rank(), letters.subspan(k, n - 2 * k)), Word(u.rank(), letters.first(k))};
}

// u^n. Computed through the cyclic reduction, which makes core^n free of
// cancellation.
inline Word power(const Word& u, long long n) {
  if (n == 0 || u.is_identity()) return Word(u.rank());
  if (n < 0) return power(inverse(u), -n);
  const auto [core, conj] = cyclic_reduce(u);
  WordBuilder b(u.rank());
  b.letters.reserve(2 * conj.size() + core.size() * static_cast<std::size_t>(n));
  b.append(conj);
  for (long long i = 0; i < n; ++i)
    b.letters.insert(b.letters.end(), core.letters().begin(), core.letters().end());
  b.append(inverse(conj));
  return std::move(b).finish();
}

inline Word conjugate(const Word& g, const Word& h) { return product(h, g, inverse(h)); }

namespace detail {

inline std::vector<std::size_t> failure_function(std::span<const Letter> pattern) {
  std::vector<std::size_t> fail(pattern.size(), 0);
  for (std::size_t i = 1, k = 0; i < pattern.size(); ++i) {
    while (k > 0 && pattern[i] != pattern[k]) k = fail[k - 1];
    if (pattern[i] == pattern[k]) ++k;
    fail[i] = k;
  }
  return fail;
}

// Knuth-Morris-Pratt over text(0..length); counts matches whose start index
// lies below start_limit.
template <typename TextAt>
std::size_t kmp_count(std::span<const Letter> pattern, std::size_t length, std::size_t start_limit, TextAt text_at) {
  const auto fail = failure_function(pattern);
  std::size_t count = 0;
  for (std::size_t i = 0, k = 0; i < length; ++i) {
    const Letter c = text_at(i);
    while (k > 0 && c != pattern[k]) k = fail[k - 1];
    if (c == pattern[k]) ++k;
    if (k == pattern.size()) {
      if (i + 1 - pattern.size() < start_limit) ++count;
      k = fail[k - 1];
    }
  }
  return count;
}

}  // namespace detail

// All (possibly overlapping) occurrences of pattern as a subword of target.
inline std::size_t count_occurrences(const Word& pattern, const Word& target) {
  if (pattern.is_identity()) throw InputError("pattern must be nonempty");
  require_same_rank(pattern, target);
  if (pattern.size() > target.size()) return 0;
  const auto t = target.letters();
  return detail::kmp_count(pattern.letters(), t.size(), t.size(), [t](std::size_t i) { return t[i]; });
}

// Occurrences of pattern in base^infinity starting in one period [0, |base|).
inline std::size_t periodic_count(const Word& pattern, const Word& base) {
  if (pattern.is_identity()) throw InputError("pattern must be nonempty");
  if (base.is_identity()) throw InputError("periodic base must be nonempty");
  if (!base.is_cyclically_reduced()) throw InputError("periodic base must be cyclically reduced");
  require_same_rank(pattern, base);
  const auto b = base.letters();
  const std::size_t window = b.size() + pattern.size() - 1;
  return detail::kmp_count(pattern.letters(), window, b.size(), [b](std::size_t i) { return b[i % b.size()]; });
}

// ---------------------------------------------------------------------------
// Text format: juxtaposed generator tokens with optional caret exponents,
// "a b^-1 a^3" or "ab^-1a^3"; "e" or "" is the identity.

inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
  WordBuilder b(alphabet.rank());
  std::size_t i = 0;
  auto token_at = [&](std::size_t start) {
    std::size_t end = start;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    return std::string(text.substr(start, end - start));
  };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    int generator = -1;
    std::size_t best = 0;
    for (int g = 0; g < alphabet.rank(); ++g) {
      const auto& name = alphabet.name(g);
      if (name.size() > best && text.substr(i, name.size()) == name) {
        generator = g;
        best = name.size();
      }
    }
    const bool is_identity = generator < 0 && text[i] == 'e';
    if (generator < 0 && !is_identity) throw InputError("unknown generator in token '" + token_at(start) + "'");
    i += is_identity ? 1 : best;
    long long exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t j = i;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
      const std::size_t digits = j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == digits || j - digits > 9) throw InputError("bad exponent in token '" + token_at(start) + "'");
      exponent = std::stoll(std::string(text.substr(i, j - i)));
      i = j;
    }
    if (is_identity) continue;
    const Letter l(generator, exponent < 0);
    for (long long k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) b.append(l);
  }
  return std::move(b).finish();
}

inline Word parse_word(std::string_view text, int rank = 2) { return parse_word(text, Alphabet::standard(rank)); }

namespace detail {
inline std::string format_word(const Word& w, const Alphabet& alphabet, std::string_view separator) {
  if (w.rank() != alphabet.rank()) throw InputError("alphabet mismatch while printing word");
  if (w.is_identity()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!out.empty()) out += separator;
    out += alphabet.name(w[i].generator());
    const long long run = static_cast<long long>(j - i) * w[i].sign();
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}
}  // namespace detail

// Canonical spaced form, e.g. "a b^-1 a^3".
inline std::string to_string(const Word& w, const Alphabet& alphabet) { return detail::format_word(w, alphabet, " "); }
inline std::string to_string(const Word& w) { return to_string(w, Alphabet::standard(w.rank())); }

// Unspaced form used inside descriptors, e.g. "ab^-1a^3".
inline std::string to_compact_string(const Word& w, const Alphabet& alphabet) {
  return detail::format_word(w, alphabet, "");
}
inline std::string to_compact_string(const Word& w) { return to_compact_string(w, Alphabet::standard(w.rank())); }

// ---------------------------------------------------------------------------
// Enumeration and sampling.

// Every reduced word of length <= radius, in shortlex order.
inline std::vector<Word> ball(int rank, int radius) {
  std::vector<Word> out{Word(rank)};
  std::size_t layer_begin = 0;
  for (int len = 1; len <= radius; ++len) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (int o = 0; o < 2 * rank; ++o) {
        const Letter l = Letter::from_ordinal(o);
        const Word& prefix = out[i];
        if (!prefix.is_identity() && prefix.back() == l.inverse()) continue;
        WordBuilder b(rank);
        b.letters.assign(prefix.letters().begin(), prefix.letters().end());
        b.letters.push_back(l);
        out.push_back(std::move(b).finish());
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

// Number of reduced words of length <= radius in F_rank.
inline std::uint64_t ball_size(int rank, int radius) {
  std::uint64_t total = 1, sphere = 1;
  for (int len = 1; len <= radius; ++len) {
    sphere *= static_cast<std::uint64_t>(len == 1 ? 2 * rank : 2 * rank - 1);
    total += sphere;
  }
  return total;
}

// Uniform bounded integer from a 64-bit engine by rejection; avoids the
// implementation-defined behaviour of std::uniform_int_distribution.
template <typename Engine>
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  static_assert(Engine::min() == 0 && Engine::max() == ~std::uint64_t{0}, "needs a full 64-bit engine");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

// Uniformly random reduced word of exactly the given length.
template <typename Engine>
Word random_word(int rank, std::size_t length, Engine& rng) {
  WordBuilder b(rank);
  b.letters.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (i == 0) {
      b.letters.push_back(Letter::from_ordinal(static_cast<int>(uniform_below(rng, 2 * rank))));
      continue;
    }
    const Letter forbidden = b.letters.back().inverse();
    int o = static_cast<int>(uniform_below(rng, 2 * rank - 1));
    if (o >= forbidden.ordinal()) ++o;
    b.letters.push_back(Letter::from_ordinal(o));
  }
  return std::move(b).finish();
}

// Random reduced word with length uniform in [0, max_length].
template <typename Engine>
Word random_word_up_to(int rank, std::size_t max_length, Engine& rng) {
  return random_word(rank, static_cast<std::size_t>(uniform_below(rng, max_length + 1)), rng);
}

}  // namespace qmlab

template <>
struct std::hash<qmlab::Word> {
  std::size_t operator()(const qmlab::Word& w) const noexcept {
    std::size_t h = static_cast<std::size_t>(w.rank()) * 0x9e3779b97f4a7c15ull;
    for (qmlab::Letter l : w.letters()) h = (h ^ static_cast<std::size_t>(l.ordinal() + 1)) * 0x100000001b3ull;
    return h;
  }
};
