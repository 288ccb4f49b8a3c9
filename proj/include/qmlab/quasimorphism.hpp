#pragma once

// Brooks counting quasimorphisms on free groups, their exact homogenizations,
// rational linear combinations and defect estimates.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qmlab/errors.hpp"
#include "qmlab/rational.hpp"
#include "qmlab/word.hpp"

namespace qmlab {

class Quasimorphism;

enum class DefectProvenance { derived, user_supplied };

struct DefectBound {
  Rational value;
  DefectProvenance provenance;
};

// f_w(g) = #occurrences of w in g - #occurrences of w^-1 in g.
struct BrooksKind {
  Word pattern;
};
// The homogenization of f_w, evaluated through periodic counts on the
// cyclic reduction.
struct HomogenizedBrooksKind {
  Word pattern;
};
struct LinearCombinationKind {
  std::vector<Rational> coefficients;
  std::vector<Quasimorphism> parts;
};
// g -> f(g^depth)/depth, a finite-depth approximation of the homogenization.
struct NumericHomogenizationKind {
  std::shared_ptr<const Quasimorphism> base;
  long long depth;
};

using QuasimorphismKind = std::variant<BrooksKind, HomogenizedBrooksKind, LinearCombinationKind, NumericHomogenizationKind>;

class Quasimorphism {
 public:
  Quasimorphism(int rank, QuasimorphismKind kind, std::optional<DefectBound> defect)
      : impl_(std::make_shared<const Impl>(Impl{rank, std::move(kind), std::move(defect)})) {}

  int rank() const { return impl_->rank; }
  const QuasimorphismKind& kind() const { return impl_->kind; }
  const std::optional<DefectBound>& defect_bound() const { return impl_->defect; }

  // Same evaluator with a caller-asserted upper bound on the defect.
  Quasimorphism with_defect_bound(const Rational& bound) const {
    if (bound < 0) throw InputError("defect bound must be non-negative");
    return Quasimorphism(rank(), kind(), DefectBound{bound, DefectProvenance::user_supplied});
  }

  Rational operator()(const Word& g) const;

  // True for kinds that satisfy f(g^n) = n f(g) exactly.
  bool is_homogeneous() const;

  std::string descriptor() const;

 private:
  struct Impl {
    int rank;
    QuasimorphismKind kind;
    std::optional<DefectBound> defect;
  };
  std::shared_ptr<const Impl> impl_;
};

namespace detail {

inline long long brooks_value(const Word& pattern, const Word& g) {
  return static_cast<long long>(count_occurrences(pattern, g)) -
         static_cast<long long>(count_occurrences(inverse(pattern), g));
}

inline long long homogenized_brooks_value(const Word& pattern, const Word& g) {
  if (g.is_identity()) return 0;
  const Word core = cyclic_reduce(g).core;
  return static_cast<long long>(periodic_count(pattern, core)) -
         static_cast<long long>(periodic_count(inverse(pattern), core));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

inline Rational Quasimorphism::operator()(const Word& g) const {
  if (g.rank() != rank()) throw InputError("alphabet mismatch evaluating quasimorphism");
  return std::visit(
      detail::overloaded{
          [&](const BrooksKind& k) { return Rational(detail::brooks_value(k.pattern, g)); },
          [&](const HomogenizedBrooksKind& k) { return Rational(detail::homogenized_brooks_value(k.pattern, g)); },
          [&](const LinearCombinationKind& k) {
            Rational sum = 0;
            for (std::size_t i = 0; i < k.parts.size(); ++i) sum += k.coefficients[i] * k.parts[i](g);
            return sum;
          },
          [&](const NumericHomogenizationKind& k) { return Rational((*k.base)(power(g, k.depth)) / k.depth); },
      },
      kind());
}

inline bool Quasimorphism::is_homogeneous() const {
  return std::visit(detail::overloaded{
                        [](const BrooksKind&) { return false; },
                        [](const HomogenizedBrooksKind&) { return true; },
                        [](const LinearCombinationKind& k) {
                          for (const auto& p : k.parts)
                            if (!p.is_homogeneous()) return false;
                          return true;
                        },
                        [](const NumericHomogenizationKind&) { return false; },
                    },
                    kind());
}

inline std::string Quasimorphism::descriptor() const {
  const Alphabet alphabet = Alphabet::standard(rank());
  return std::visit(detail::overloaded{
                        [&](const BrooksKind& k) { return "brooks:" + to_compact_string(k.pattern, alphabet); },
                        [&](const HomogenizedBrooksKind& k) {
                          return "hom:brooks:" + to_compact_string(k.pattern, alphabet);
                        },
                        [&](const LinearCombinationKind& k) {
                          if (k.parts.empty()) return std::string("zero");
                          std::string out = "lincomb:";
                          for (std::size_t i = 0; i < k.parts.size(); ++i) {
                            if (i) out += ",";
                            out += to_string(k.coefficients[i]) + "*" + k.parts[i].descriptor();
                          }
                          return out;
                        },
                        [&](const NumericHomogenizationKind& k) {
                          return "numhom:" + std::to_string(k.depth) + ":" + k.base->descriptor();
                        },
                    },
                    kind());
}

// ---------------------------------------------------------------------------
// Constructors.

// Carries the derived bound D(f_w) <= 3(|w| - 1): a product uv = u'v' with
// u = u'c, v = c^-1 v' changes the signed count only through occurrences
// straddling the three junctions, each contributing at most |w| - 1.
inline Quasimorphism brooks(const Word& pattern) {
  if (pattern.is_identity()) throw InputError("Brooks pattern must be nonempty");
  return Quasimorphism(pattern.rank(), BrooksKind{pattern},
                       DefectBound{Rational(3 * (static_cast<long long>(pattern.size()) - 1)),
                                   DefectProvenance::derived});
}

// Exact homogenization of a Brooks quasimorphism; D(fbar) <= 2 D(f).
inline Quasimorphism homogenize_exact(const Quasimorphism& f) {
  const auto* b = std::get_if<BrooksKind>(&f.kind());
  if (!b) throw PreconditionError("exact homogenization needs a Brooks quasimorphism, got '" + f.descriptor() + "'");
  std::optional<DefectBound> bound;
  if (f.defect_bound()) bound = DefectBound{2 * f.defect_bound()->value, f.defect_bound()->provenance};
  return Quasimorphism(f.rank(), HomogenizedBrooksKind{b->pattern}, bound);
}

inline Quasimorphism zero_quasimorphism(int rank = 2) {
  return Quasimorphism(rank, LinearCombinationKind{}, DefectBound{Rational(0), DefectProvenance::derived});
}

inline Quasimorphism linear_combination(std::vector<Rational> coefficients, std::vector<Quasimorphism> parts,
                                        int rank = 2) {
  if (coefficients.size() != parts.size())
    throw InputError("linear combination: " + std::to_string(coefficients.size()) + " coefficients for " +
                     std::to_string(parts.size()) + " parts");
  if (!parts.empty()) rank = parts.front().rank();
  std::optional<DefectBound> bound = DefectBound{Rational(0), DefectProvenance::derived};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].rank() != rank) throw InputError("linear combination: alphabet mismatch");
    const auto& d = parts[i].defect_bound();
    if (!d) {
      bound.reset();
    } else if (bound) {
      bound->value += abs(coefficients[i]) * d->value;
      if (d->provenance == DefectProvenance::user_supplied) bound->provenance = DefectProvenance::user_supplied;
    }
  }
  return Quasimorphism(rank, LinearCombinationKind{std::move(coefficients), std::move(parts)}, bound);
}

inline Quasimorphism numeric_homogenization(const Quasimorphism& f, long long depth) {
  if (depth < 1) throw InputError("homogenization depth must be positive");
  return Quasimorphism(f.rank(), NumericHomogenizationKind{std::make_shared<const Quasimorphism>(f), depth},
                       std::nullopt);
}

struct HomogenizationEstimate {
  Rational estimate;     // f(g^n)/n
  Rational error_bound;  // |fbar(g) - estimate| <= D/n
};

inline HomogenizationEstimate homogenize_numeric(const Quasimorphism& f, const Word& g, long long depth) {
  if (depth < 1) throw InputError("homogenization depth must be positive");
  if (!f.defect_bound()) throw PreconditionError("numeric homogenization needs a defect bound for '" + f.descriptor() + "'");
  return {Rational(f(power(g, depth)) / depth), Rational(f.defect_bound()->value / depth)};
}

// max |f(g1 g2) - f(g1) - f(g2)| over |g1|, |g2| <= radius. Exhaustive when the
// number of pairs fits in sample_budget; otherwise exhaustive on the largest
// radius that fits, plus sample_budget uniformly sampled pairs from the full
// ball. A certified lower bound on D(f), never the defect itself.
inline Rational defect_lower_bound(const Quasimorphism& f, int radius, std::uint64_t sample_budget,
                                   std::uint64_t seed = 0) {
  if (radius < 1) throw InputError("radius must be >= 1");
  if (sample_budget < 1) throw InputError("sample budget must be >= 1");
  const int rank = f.rank();
  auto pair_defect = [&](const Word& x, const Word& y) { return abs(f(x * y) - f(x) - f(y)); };

  int exhaustive_radius = 0;
  while (exhaustive_radius < radius) {
    const std::uint64_t n = ball_size(rank, exhaustive_radius + 1);
    if (n > 0xffffffffull || n * n > sample_budget) break;
    ++exhaustive_radius;
  }
  Rational best = 0;
  const auto inner = ball(rank, exhaustive_radius);
  std::vector<Rational> values;
  values.reserve(inner.size());
  for (const auto& w : inner) values.push_back(f(w));
  for (std::size_t i = 0; i < inner.size(); ++i)
    for (std::size_t j = 0; j < inner.size(); ++j) {
      const Rational d = abs(f(inner[i] * inner[j]) - values[i] - values[j]);
      if (d > best) best = d;
    }
  if (exhaustive_radius == radius) return best;

  // Sample by length first so every sphere is visited in proportion to its size.
  std::mt19937_64 rng(seed);
  const std::uint64_t total = ball_size(rank, radius);
  auto sample = [&] {
    std::uint64_t r = uniform_below(rng, total);
    std::size_t len = 0;
    while (r >= ball_size(rank, static_cast<int>(len))) ++len;
    return random_word(rank, len, rng);
  };
  for (std::uint64_t s = 0; s < sample_budget; ++s) {
    const Word x = sample();
    const Word y = sample();
    const Rational d = pair_defect(x, y);
    if (d > best) best = d;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Descriptor text: brooks:ab, hom:brooks:ab, numhom:16:brooks:ab,
// lincomb:1/2*hom:brooks:ab,-1*hom:brooks:a^2b, zero.

inline Quasimorphism parse_quasimorphism(std::string_view text, const Alphabet& alphabet);

namespace detail {
inline Quasimorphism parse_simple_quasimorphism(std::string_view text, const Alphabet& alphabet) {
  auto strip = [&](std::string_view prefix) {
    if (text.substr(0, prefix.size()) != prefix) return false;
    text.remove_prefix(prefix.size());
    return true;
  };
  const std::string original(text);
  if (text == "zero") return zero_quasimorphism(alphabet.rank());
  if (strip("brooks:")) return brooks(parse_word(text, alphabet));
  if (strip("hom:")) {
    if (text.substr(0, 7) != "brooks:")
      throw InputError("'hom:' applies only to Brooks descriptors, got '" + original + "'");
    return homogenize_exact(parse_simple_quasimorphism(text, alphabet));
  }
  if (strip("numhom:")) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InputError("expected numhom:<depth>:<descriptor> in '" + original + "'");
    const Rational depth = parse_rational(text.substr(0, colon));
    if (boost::multiprecision::denominator(depth) != 1 || depth < 1 || depth > 1000000)
      throw InputError("bad depth in '" + original + "'");
    return numeric_homogenization(parse_simple_quasimorphism(text.substr(colon + 1), alphabet),
                                  static_cast<long long>(boost::multiprecision::numerator(depth)));
  }
  throw InputError("unknown quasimorphism descriptor '" + original + "'");
}
}  // namespace detail

inline Quasimorphism parse_quasimorphism(std::string_view text, const Alphabet& alphabet) {
  constexpr std::string_view lincomb = "lincomb:";
  if (text.substr(0, lincomb.size()) != lincomb) return detail::parse_simple_quasimorphism(text, alphabet);
  text.remove_prefix(lincomb.size());
  std::vector<Rational> coefficients;
  std::vector<Quasimorphism> parts;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view term = text.substr(0, comma);
    const auto star = term.find('*');
    if (star == std::string_view::npos) throw InputError("expected <coefficient>*<descriptor> in '" + std::string(term) + "'");
    coefficients.push_back(parse_rational(term.substr(0, star)));
    parts.push_back(detail::parse_simple_quasimorphism(term.substr(star + 1), alphabet));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw InputError("trailing comma in linear combination");
  }
  return linear_combination(std::move(coefficients), std::move(parts), alphabet.rank());
}

inline Quasimorphism parse_quasimorphism(std::string_view text, int rank = 2) {
  return parse_quasimorphism(text, Alphabet::standard(rank));
}

}  // namespace qmlab
