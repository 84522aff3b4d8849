#ifndef MANETSIM_RNG_HPP
#define MANETSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace manetsim {

// A named random stream derived from (master_seed, stream_id). Streams are
// independent by construction: interleaving draws on one stream never
// changes the sequence of another. Uniform deviates are mapped from raw
// mt19937_64 output here instead of going through std::uniform_*
// distributions, whose output is implementation defined.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view stream_id);

  // Uniform double in [lo, hi]. Degenerate intervals return lo.
  double uniform(double lo, double hi);

  // Uniform integer in [lo, hi], inclusive, via rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  const std::string& stream_id() const { return stream_id_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t next_raw();

  std::string stream_id_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace manetsim

#endif
