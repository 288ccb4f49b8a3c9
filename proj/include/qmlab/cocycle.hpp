#pragma once

// Bounded 2-cocycles on free groups in the homogeneous model, the bar
// resolution converters, and exact checkers for the identities they satisfy.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "qmlab/errors.hpp"
#include "qmlab/quasimorphism.hpp"
#include "qmlab/rational.hpp"
#include "qmlab/subgroup.hpp"
#include "qmlab/word.hpp"

namespace qmlab {

enum class CocycleProperty : unsigned {
  invariant = 1u << 0,
  alternating = 1u << 1,
  restriction_homogeneous = 1u << 2,
};

class CocyclePropertySet {
 public:
  constexpr CocyclePropertySet() = default;
  constexpr CocyclePropertySet(std::initializer_list<CocycleProperty> ps) {
    for (auto p : ps) bits_ |= static_cast<unsigned>(p);
  }
  constexpr bool has(CocycleProperty p) const { return (bits_ & static_cast<unsigned>(p)) != 0; }
  friend constexpr bool operator==(CocyclePropertySet, CocyclePropertySet) = default;

 private:
  unsigned bits_ = 0;
};

using TripleEvaluator = std::function<Rational(const Word&, const Word&, const Word&)>;
using InhomogeneousCochain = std::function<Rational(const Word&, const Word&)>;

class BoundedCocycle {
 public:
  // provenance: "coboundary-of:<descriptor>" or "external[:<note>]".
  BoundedCocycle(int rank, TripleEvaluator evaluator, std::string provenance, CocyclePropertySet claimed)
      : rank_(rank), evaluator_(std::move(evaluator)), provenance_(std::move(provenance)), claimed_(claimed) {}

  Rational operator()(const Word& g0, const Word& g1, const Word& g2) const { return evaluator_(g0, g1, g2); }

  int rank() const { return rank_; }
  const std::string& provenance() const { return provenance_; }
  CocyclePropertySet claimed_properties() const { return claimed_; }
  bool claims(CocycleProperty p) const { return claimed_.has(p); }

 private:
  int rank_;
  TripleEvaluator evaluator_;
  std::string provenance_;
  CocyclePropertySet claimed_;
};

// c_f(g0, g1, g2) = f(g0^-1 g1) + f(g1^-1 g2) + f(g2^-1 g0).
inline BoundedCocycle coboundary_cocycle(const Quasimorphism& f) {
  if (!f.is_homogeneous())
    throw PreconditionError("cocycle needs a homogeneous quasimorphism; wrap Brooks descriptors as 'hom:" +
                            f.descriptor() + "'");
  return BoundedCocycle(
      f.rank(),
      [f](const Word& g0, const Word& g1, const Word& g2) {
        return f(inverse(g0) * g1) + f(inverse(g1) * g2) + f(inverse(g2) * g0);
      },
      "coboundary-of:" + f.descriptor(),
      {CocycleProperty::invariant, CocycleProperty::alternating, CocycleProperty::restriction_homogeneous});
}

// c_f for an arbitrary quasimorphism, homogeneous or not. Still a cocycle and
// G-invariant; alternating and restriction-homogeneous only when f is
// homogeneous, so nothing beyond invariance is claimed.
inline BoundedCocycle raw_coboundary_cocycle(const Quasimorphism& f) {
  return BoundedCocycle(
      f.rank(),
      [f](const Word& g0, const Word& g1, const Word& g2) {
        return f(inverse(g0) * g1) + f(inverse(g1) * g2) + f(inverse(g2) * g0);
      },
      "coboundary-of:" + f.descriptor(), {CocycleProperty::invariant});
}

// Adversarial fixture: c plus 1 whenever g0 = e. Keeps c's claims, which it
// then violates.
inline BoundedCocycle corrupt_at_identity(const BoundedCocycle& c) {
  return BoundedCocycle(
      c.rank(),
      [c](const Word& g0, const Word& g1, const Word& g2) {
        return c(g0, g1, g2) + (g0.is_identity() ? Rational(1) : Rational(0));
      },
      "external:corrupt:" + c.provenance(), c.claimed_properties());
}

inline BoundedCocycle zero_cocycle(int rank = 2) {
  return BoundedCocycle(
      rank, [](const Word&, const Word&, const Word&) { return Rational(0); }, "external:zero",
      {CocycleProperty::invariant, CocycleProperty::alternating, CocycleProperty::restriction_homogeneous});
}

// Accepts a homogeneous quasimorphism descriptor, optionally prefixed with
// "corrupt:" for the adversarial fixture.
inline BoundedCocycle parse_cocycle(std::string_view text, const Alphabet& alphabet) {
  constexpr std::string_view corrupt = "corrupt:";
  if (text.substr(0, corrupt.size()) == corrupt)
    return corrupt_at_identity(parse_cocycle(text.substr(corrupt.size()), alphabet));
  return coboundary_cocycle(parse_quasimorphism(text, alphabet));
}
inline BoundedCocycle parse_cocycle(std::string_view text, int rank = 2) {
  return parse_cocycle(text, Alphabet::standard(rank));
}

// ---------------------------------------------------------------------------
// Bar resolution.

// h(g1, g2) = c(e, g1, g1 g2).
inline InhomogeneousCochain to_inhomogeneous(const BoundedCocycle& c) {
  return [c](const Word& g1, const Word& g2) { return c(Word(g1.rank()), g1, g1 * g2); };
}

// c(g0, g1, g2) = h(g0^-1 g1, g1^-1 g2).
inline BoundedCocycle from_inhomogeneous(InhomogeneousCochain h, int rank = 2) {
  return BoundedCocycle(
      rank, [h = std::move(h)](const Word& g0, const Word& g1, const Word& g2) { return h(inverse(g0) * g1, inverse(g1) * g2); },
      "external:inhomogeneous", {CocycleProperty::invariant});
}

// ---------------------------------------------------------------------------
// Checkers. Each returns an exact residual or verdict; none of them throw on
// a cocycle that fails its claims.

// d c(g0, g1, g2, g3) = c(g1,g2,g3) - c(g0,g2,g3) + c(g0,g1,g3) - c(g0,g1,g2).
inline Rational cocycle_identity_residual(const BoundedCocycle& c, const Word& g0, const Word& g1, const Word& g2,
                                          const Word& g3) {
  return c(g1, g2, g3) - c(g0, g2, g3) + c(g0, g1, g3) - c(g0, g1, g2);
}

// True iff c(g_s(0), g_s(1), g_s(2)) = sign(s) c(g0, g1, g2) for all six s.
inline bool check_alternating(const BoundedCocycle& c, const Word& g0, const Word& g1, const Word& g2) {
  const Rational base = c(g0, g1, g2);
  return c(g1, g0, g2) == -base && c(g0, g2, g1) == -base && c(g2, g1, g0) == -base && c(g1, g2, g0) == base &&
         c(g2, g0, g1) == base;
}

// c(h g0, h g1, h g2) - c(g0, g1, g2).
inline Rational invariance_residual(const BoundedCocycle& c, const Word& h, const Word& g0, const Word& g1,
                                    const Word& g2) {
  return c(h * g0, h * g1, h * g2) - c(g0, g1, g2);
}

// c(e, g^n, g^m) == 0.
inline bool check_restriction_homogeneous(const BoundedCocycle& c, const Word& g, long long n, long long m) {
  return c(Word(g.rank()), power(g, n), power(g, m)) == 0;
}

// c(g^{-N-1}, h, e) - sum_{i=0}^{N} c(g^-1, g^i h, e); zero for
// restriction-homogeneous c.
inline Rational homogeneous_sum_residual(const BoundedCocycle& c, const Word& g, const Word& h, long long N) {
  if (N < 0) throw InputError("N must be non-negative");
  const Word e(g.rank());
  const Word g_inv = inverse(g);
  Rational sum = 0;
  Word gi_h = h;
  for (long long i = 0; i <= N; ++i) {
    sum += c(g_inv, gi_h, e);
    gi_h = g * gi_h;
  }
  return c(power(g, -N - 1), h, e) - sum;
}

// (|c(h,y,e)| + |c(g^-1 h, g^-1 y, e)|) - |c(g,y,e) - c(g,h,e)|; non-negative
// for invariant alternating cocycles.
inline Rational tetrahedron_gap(const BoundedCocycle& c, const Word& g, const Word& h, const Word& y) {
  const Word e(g.rank());
  const Word g_inv = inverse(g);
  return abs(c(h, y, e)) + abs(c(g_inv * h, g_inv * y, e)) - abs(c(g, y, e) - c(g, h, e));
}

// Given |c(g0,g1,g2)| >= 3 eps, returns the first face among (g1,g2,h),
// (g0,g2,h), (g0,g1,h) with |c| >= eps. The cocycle identity on
// (g0,g1,g2,h) forces one to exist, so nullopt exposes a broken cocycle.
inline std::optional<int> propagate_twist(const BoundedCocycle& c, const std::array<Word, 3>& triple, const Word& h,
                                          const Rational& epsilon) {
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");
  const auto& [g0, g1, g2] = triple;
  if (abs(c(g0, g1, g2)) < 3 * epsilon) throw PreconditionError("triple is not 3*epsilon-twisted");
  if (abs(c(g1, g2, h)) >= epsilon) return 0;
  if (abs(c(g0, g2, h)) >= epsilon) return 1;
  if (abs(c(g0, g1, h)) >= epsilon) return 2;
  return std::nullopt;
}

// A twisted triangle based at the identity and the threshold it yields.
struct TwistWitness {
  Word g0;
  Word h0;
  Rational value;    // c(g0, h0, e)
  Rational epsilon;  // |value| / 3
};

// First pair (g0, h0) in shortlex x shortlex order over the radius-R ball with
// c(g0, h0, e) != 0.
inline std::optional<TwistWitness> find_twist_witness(const BoundedCocycle& c, int radius) {
  if (radius < 1) throw InputError("radius must be >= 1");
  const auto words = ball(c.rank(), radius);
  const Word e(c.rank());
  for (const Word& g0 : words)
    for (const Word& h0 : words) {
      const Rational v = c(g0, h0, e);
      if (v != 0) return TwistWitness{g0, h0, v, abs(v) / 3};
    }
  return std::nullopt;
}

struct RestrictionWitness {
  Word u, v, w;          // elements of H with c(u, v, w) != 0
  Word u_in_h, v_in_h;   // the same elements as words in the H-generators (x = a, y = b)
  Rational value;
};

// Evaluates the word `in_h` over the free basis {a, b} at (x, y).
inline Word substitute(const Word& in_h, const Word& x, const Word& y) {
  WordBuilder b(x.rank());
  const Word x_inv = inverse(x), y_inv = inverse(y);
  for (Letter l : in_h.letters()) {
    const Word& img = l.generator() == 0 ? (l.inverted() ? x_inv : x) : (l.inverted() ? y_inv : y);
    b.append(img);
  }
  return std::move(b).finish();
}

// Looks for a triple of H = <x, y> on which c does not vanish: first
// (x, y, e), then (u, v, e) for H-words u, v of length <= radius in shortlex
// order. By invariance this covers every triple (u, v, w) with w^-1 u and
// w^-1 v of H-length <= radius. A witness certifies [c|_H] != 0; nullopt only
// means none was found up to the radius.
inline std::optional<RestrictionWitness> restriction_nontrivial(const BoundedCocycle& c, const SubgroupGraph& h_graph,
                                                                const std::pair<Word, Word>& generators, int radius) {
  const auto& [x, y] = generators;
  require_same_rank(x, y);
  if (!h_graph.contains(x) || !h_graph.contains(y)) throw InputError("generators do not lie in the subgroup graph");
  const Word e(x.rank());
  const Word ha = Word::generator(2, 0), hb = Word::generator(2, 1);
  if (const Rational v = c(x, y, e); v != 0) return RestrictionWitness{x, y, e, ha, hb, v};
  const auto h_words = ball(2, radius);
  std::vector<Word> images;
  images.reserve(h_words.size());
  for (const Word& w : h_words) images.push_back(substitute(w, x, y));
  for (std::size_t i = 0; i < h_words.size(); ++i)
    for (std::size_t j = 0; j < h_words.size(); ++j) {
      const Rational v = c(images[i], images[j], e);
      if (v != 0) return RestrictionWitness{images[i], images[j], e, h_words[i], h_words[j], v};
    }
  return std::nullopt;
}

}  // namespace qmlab
