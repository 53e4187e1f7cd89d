#pragma once

#include <cstdint>
#include <vector>

namespace cacc {

// Packet-delivery model for a V2V link.
//   DistanceLogistic: success probability decays with distance as a
//     logistic curve, normalized so p(0) = p_max exactly.
//   BernoulliFixed: distance-independent success probability p_max.
enum class LinkModelKind { DistanceLogistic, BernoulliFixed };

struct LinkModel {
  LinkModelKind kind = LinkModelKind::DistanceLogistic;
  double p_max = 0.95;      // success probability at zero distance
  double d_half = 150.0;    // m; distance where the probability halves
  double steepness = 0.05;  // 1/m; logistic decay rate

  bool operator==(const LinkModel&) const = default;
};

// Link indicators for one follower at one step: alpha is the link from the
// immediate predecessor, beta the link from the second predecessor.
struct LinkState {
  bool alpha = false;
  bool beta = false;

  bool operator==(const LinkState&) const = default;
};

// Per-step link indicators for every follower; links[i-1] belongs to
// follower i. Follower 1 has a single predecessor, so its beta is always 0.
struct CommTopology {
  long step = 0;
  std::vector<LinkState> links;
};

// Deterministic counter-based uniform draw in [0, 1). Every
// (seed, step, vehicle, slot) tuple indexes an independent stream element,
// so draws never depend on evaluation order. Slots 0/1 are the alpha/beta
// link draws; higher slots are reserved for measurement noise.
double counter_uniform(std::uint64_t seed, std::uint64_t step,
                       std::uint64_t vehicle, std::uint64_t slot);

// Standard-normal draw built from the uniform stream at (slot, slot + 1).
double counter_normal(std::uint64_t seed, std::uint64_t step,
                      std::uint64_t vehicle, std::uint64_t slot);

// Success probability of one packet at the given distance (m).
double link_success_prob(const LinkModel& model, double distance);

// Samples all followers' link indicators from the previous-step positions
// (leader first, strictly decreasing). Throws cacc::SimError
// ("collision: topology undefined") if adjacent positions overlap.
CommTopology sample_topology(const LinkModel& model,
                             const std::vector<double>& positions,
                             std::uint64_t seed, long step);

}  // namespace cacc
