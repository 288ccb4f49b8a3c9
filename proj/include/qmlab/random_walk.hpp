#pragma once

// Lazy simple random walks on F_k: uniform steps from a finite symmetric set
// containing the identity, with per-stream deterministic seeding.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qmlab/errors.hpp"
#include "qmlab/word.hpp"

namespace qmlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed of stream `stream` under master seed `seed`.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0xd1b54a32d192ed03ull));
}

struct WalkConfig {
  std::vector<Word> steps;
  std::uint64_t seed = 0;
  bool check_laziness = true;

  // {e, a, a^-1, b, b^-1, ...} on the standard alphabet.
  static WalkConfig standard(int rank = 2, std::uint64_t seed = 0) {
    WalkConfig c;
    c.steps.emplace_back(rank);
    for (int g = 0; g < rank; ++g) {
      c.steps.push_back(Word::generator(rank, g));
      c.steps.push_back(Word::generator(rank, g, true));
    }
    c.seed = seed;
    return c;
  }

  int rank() const { return steps.empty() ? 2 : steps.front().rank(); }

  void validate() const {
    if (steps.empty()) throw ConfigError("step set is empty");
    for (const Word& s : steps)
      if (s.rank() != steps.front().rank()) throw ConfigError("step set mixes alphabets");
    if (check_laziness && std::none_of(steps.begin(), steps.end(), [](const Word& s) { return s.is_identity(); }))
      throw ConfigError("step set must contain the identity");
    for (const Word& s : steps) {
      const Word inv = inverse(s);
      if (std::find(steps.begin(), steps.end(), inv) == steps.end())
        throw ConfigError("step set is not symmetric: missing inverse of " + to_string(s));
    }
  }
};

struct Trajectory {
  std::vector<Word> positions;   // x_0 = e, ..., x_n
  std::vector<Word> increments;  // g_1, ..., g_n
};

// Single-owner iterator over one stream of uniform draws from S.
class Walker {
 public:
  Walker(const WalkConfig& config, std::uint64_t stream)
      : steps_(config.steps), rng_(derive_stream_seed(config.seed, stream)) {
    config.validate();
  }

  const Word& draw() { return steps_[uniform_below(rng_, steps_.size())]; }

  // x_n from fresh draws: the reduced product of the next n increments.
  Word sample_position(std::size_t n) {
    WordBuilder b(steps_.front().rank());
    for (std::size_t i = 0; i < n; ++i) b.append(draw());
    return std::move(b).finish();
  }

  Trajectory trajectory(std::size_t n) {
    Trajectory t;
    t.positions.reserve(n + 1);
    t.increments.reserve(n);
    t.positions.emplace_back(steps_.front().rank());
    for (std::size_t i = 0; i < n; ++i) {
      t.increments.push_back(draw());
      t.positions.push_back(t.positions.back() * t.increments.back());
    }
    return t;
  }

 private:
  std::vector<Word> steps_;
  std::mt19937_64 rng_;
};

inline Walker make_walker(const WalkConfig& config, std::uint64_t stream) { return Walker(config, stream); }

inline Word sample_position(Walker& walker, std::size_t n) { return walker.sample_position(n); }

// x_n from stream 2t, y_m from stream 2t + 1.
inline std::pair<Word, Word> sample_pair(const WalkConfig& config, std::uint64_t trial, std::size_t n, std::size_t m) {
  Walker wx(config, 2 * trial);
  Walker wy(config, 2 * trial + 1);
  Word x = wx.sample_position(n);
  Word y = wy.sample_position(m);
  return {std::move(x), std::move(y)};
}

// One position per line in word text format.
inline std::string trajectory_log(const Trajectory& t, const Alphabet& alphabet) {
  std::string out;
  for (const Word& w : t.positions) {
    out += to_string(w, alphabet);
    out += '\n';
  }
  return out;
}

}  // namespace qmlab
