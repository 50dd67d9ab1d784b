#pragma once

#include <cstdint>
#include <vector>

#include "bayesr/image.hpp"
#include "bayesr/vb_solver.hpp"

namespace bayesr {

struct RestorationSet {
  ImagePlane deterministic;
  std::vector<ImagePlane> samples;
  std::uint64_t seed = 0;
};

// mu_x + mu_z, unclamped.
ImagePlane deterministic_restore(const VariationalState& state);

// n draws of x + z with x ~ N(mu_x, sigma_x2), z ~ N(mu_z, sigma_z2); sample
// k uses its own stream seeded with seed + k.
RestorationSet sample_restorations(const VariationalState& state, int n = 10,
                                   std::uint64_t seed = 0);

// Mean over pixels of the population standard deviation across samples,
// times 255. Needs at least two samples.
double diversity_score(const RestorationSet& set);

}  // namespace bayesr
