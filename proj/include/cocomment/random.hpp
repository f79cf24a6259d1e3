#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cocomment {

// Portable seeded generator. std::mt19937_64 has a fully specified output
// sequence; the std distributions do not, so all derived draws are done
// here with fixed arithmetic:
//   uniform01()  top 53 bits of one engine output, scaled by 2^-53
//   below(n)     Lemire's multiply-shift with rejection
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Draws indices from a fixed categorical distribution by binary search on
// the cumulative weights.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> weights);

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// Zipf weights k^-s for ranks k = 1..n (unnormalised).
std::vector<double> zipf_weights(std::size_t n, double exponent);

}  // namespace cocomment
