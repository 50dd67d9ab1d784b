#include <cmath>

#include "bayesr/error.hpp"
#include "bayesr/random.hpp"
#include "bayesr/restore.hpp"

namespace bayesr {

ImagePlane deterministic_restore(const VariationalState& state) {
  require_same_shape(state.mu_x, state.mu_z, "deterministic_restore");
  return state.mu_x + state.mu_z;
}

RestorationSet sample_restorations(const VariationalState& state, int n,
                                   std::uint64_t seed) {
  if (n < 1) throw InvalidInput("sample_restorations: n must be >= 1");
  require_same_shape(state.mu_x, state.sigma_x2, "sample_restorations");
  require_same_shape(state.mu_z, state.sigma_z2, "sample_restorations");
  for (const ImagePlane* v : {&state.sigma_x2, &state.sigma_z2}) {
    for (double x : v->values()) {
      if (!(x >= 0.0)) {
        throw InvalidInput("sample_restorations: negative variance");
      }
    }
  }
  RestorationSet set;
  set.seed = seed;
  set.deterministic = deterministic_restore(state);
  set.samples.reserve(n);
  const std::size_t size = set.deterministic.size();
  for (int k = 0; k < n; ++k) {
    GaussianSource eps(seed + static_cast<std::uint64_t>(k));
    ImagePlane u(state.hr_shape());
    for (std::size_t i = 0; i < size; ++i) {
      u[i] = state.mu_x[i] + std::sqrt(state.sigma_x2[i]) * eps.next();
    }
    for (std::size_t i = 0; i < size; ++i) {
      u[i] += state.mu_z[i] + std::sqrt(state.sigma_z2[i]) * eps.next();
    }
    set.samples.push_back(std::move(u));
  }
  return set;
}

double diversity_score(const RestorationSet& set) {
  const std::size_t n = set.samples.size();
  if (n < 2) throw InvalidInput("diversity_score: need at least two samples");
  const ImagePlane& first = set.samples.front();
  for (const ImagePlane& s : set.samples) {
    require_same_shape(first, s, "diversity_score");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    double m = 0.0;
    for (const ImagePlane& s : set.samples) m += s[i];
    m /= static_cast<double>(n);
    double v = 0.0;
    for (const ImagePlane& s : set.samples) v += (s[i] - m) * (s[i] - m);
    total += std::sqrt(v / static_cast<double>(n));
  }
  return 255.0 * total / static_cast<double>(first.size());
}

}  // namespace bayesr
