#include "cacc/comm.hpp"

#include <cmath>

#include "cacc/errors.hpp"

namespace cacc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t step,
                       std::uint64_t vehicle, std::uint64_t slot) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ step);
  h = splitmix64(h ^ ((vehicle << 8) | slot));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t step,
                      std::uint64_t vehicle, std::uint64_t slot) {
  // Box-Muller; 1 - u1 lies in (0, 1] so the log stays finite.
  const double u1 = counter_uniform(seed, step, vehicle, slot);
  const double u2 = counter_uniform(seed, step, vehicle, slot + 1);
  const double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(two_pi * u2);
}

double link_success_prob(const LinkModel& model, double distance) {
  if (model.kind == LinkModelKind::BernoulliFixed) {
    return model.p_max;
  }
  // Normalized so the probability at zero distance is exactly p_max.
  const double k = model.steepness;
  return model.p_max * logistic(-k * (distance - model.d_half)) /
         logistic(k * model.d_half);
}

CommTopology sample_topology(const LinkModel& model,
                             const std::vector<double>& positions,
                             std::uint64_t seed, long step) {
  CommTopology topo;
  topo.step = step;
  if (positions.size() < 2) {
    return topo;
  }
  const std::size_t n_followers = positions.size() - 1;
  topo.links.resize(n_followers);
  for (std::size_t i = 1; i <= n_followers; ++i) {
    const double d1 = positions[i - 1] - positions[i];
    if (d1 <= 0.0) {
      throw SimError("collision: topology undefined");
    }
    LinkState& ls = topo.links[i - 1];
    const auto k = static_cast<std::uint64_t>(step);
    ls.alpha = counter_uniform(seed, k, i, 0) < link_success_prob(model, d1);
    if (i >= 2) {
      const double d2 = positions[i - 2] - positions[i];
      ls.beta = counter_uniform(seed, k, i, 1) < link_success_prob(model, d2);
    }
  }
  return topo;
}

}  // namespace cacc
