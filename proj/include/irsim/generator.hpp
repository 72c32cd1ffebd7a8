#pragma once

#include <cstddef>
#include <cstdint>

#include "irsim/engine.hpp"

namespace irsim {

struct GenOptions {
  std::size_t tiers = 3;
  std::size_t max_top = 3;        // size of the top-tier peering clique
  std::size_t max_providers = 2;  // per non-top AS
  double peer_probability = 0.3;  // between same-tier non-top ASes
  double sibling_probability = 0.0;
};

/// Random hierarchy with ids 1..n: a top-tier peer clique, every other AS
/// buying transit from 1..max_providers ASes in strictly higher tiers, and
/// optional same-tier peer/sibling links. The seed fully determines the
/// result.
AsGraph generate_topology(std::size_t n, std::uint64_t seed, const GenOptions& options = {});

/// A single-link-failure experiment: `dest` originates at tick 0, `link`
/// fails at `fail_time`, and every AS that still has a policy-compliant
/// route after the failure probes `dest` each tick from the failure until
/// the control plane is idle.
struct FailureCase {
  AsId dest;
  LinkKey link;
  Tick fail_time = 0;
  Scenario scenario;
};

/// Chooses dest and failed link from `seed`. Requires at least one link.
FailureCase random_failure_case(const AsGraph& graph, std::uint64_t seed, Tick fail_time = 1000);

}  // namespace irsim
