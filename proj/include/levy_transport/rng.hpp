#pragma once

#include <cstdint>
#include <random>

namespace levy_transport {

// One reproducible random stream, identified by (master_seed, stream_index).
// Equal pairs give bit-identical sequences; distinct indices give
// statistically independent streams. All variate transforms are spelled out
// explicitly, so sequences are portable across standard libraries
// (std::mt19937_64 itself is fully specified by the standard, the std
// distributions are not).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform01();
  double uniform(double a, double b);
  // Unit-rate exponential.
  double exponential();
  // Standard normal via Box-Muller. Two uniforms per call, no caching, so
  // the call sequence alone determines the output.
  double gaussian();

 private:
  std::mt19937_64 engine_;
  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_index_ = 0;
};

}  // namespace levy_transport
