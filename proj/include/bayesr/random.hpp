#pragma once

#include <cstdint>
#include <random>

#include "bayesr/image.hpp"

namespace bayesr {

// Standard-normal stream over mt19937_64 with a fixed Box-Muller transform,
// so draws are identical across standard library implementations. The seed is
// scrambled before it reaches the engine, so neighbouring seeds give unrelated
// streams.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed);

  double next();
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  std::uint64_t next_u64() { return engine_(); }

  // Plane of i.i.d. N(0, 1) draws in row-major order.
  ImagePlane standard_normal(Shape shape);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Seed for an independent sub-stream (e.g. one image channel): the SplitMix64
// finalizer of base + golden-ratio increments.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace bayesr
