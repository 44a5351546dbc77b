#include "subscan/random.hpp"

#include <cmath>
#include <numeric>

#include "subscan/errors.hpp"

namespace subscan {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("Rng::below: bound must be positive");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t population,
                                                         std::size_t count) {
  if (count > population) {
    throw ValidationError("cannot draw " + std::to_string(count) +
                          " distinct items from a population of " + std::to_string(population));
  }
  // Partial Fisher-Yates.
  std::vector<std::size_t> items(population);
  std::iota(items.begin(), items.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(population - i));
    std::swap(items[i], items[j]);
  }
  items.resize(count);
  return items;
}

std::vector<std::size_t> Rng::sample_with_replacement(std::size_t population,
                                                      std::size_t count) {
  if (population == 0 && count > 0) throw ValidationError("cannot draw from an empty population");
  std::vector<std::size_t> items(count);
  for (auto& item : items) item = static_cast<std::size_t>(below(population));
  return items;
}

}  // namespace subscan
