#include "manetsim/rng.hpp"

#include <stdexcept>

namespace manetsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view stream_id)
    : stream_id_(stream_id) {
  std::uint64_t mix = master_seed ^ fnv1a(stream_id);
  engine_.seed(splitmix64(mix));
}

std::uint64_t RngStream::next_raw() {
  ++draws_;
  return engine_();
}

double RngStream::uniform(double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("uniform: lo > hi");
  // 53-bit mantissa mapping gives u in [0, 1) identically on all platforms.
  double u = static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_raw());  // full range
  std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
  std::uint64_t raw;
  do {
    raw = next_raw();
  } while (raw >= limit);
  return lo + static_cast<std::int64_t>(raw % span);
}

}  // namespace manetsim
