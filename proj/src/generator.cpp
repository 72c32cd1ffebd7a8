#include "irsim/generator.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace irsim {

namespace {

// Plain modulo keeps sequences identical across standard libraries.
std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() % 1000000) < p * 1000000.0;
}

}  // namespace

AsGraph generate_topology(std::size_t n, std::uint64_t seed, const GenOptions& options) {
  if (n == 0) throw ValidationError("topology size must be positive");
  if (options.tiers < 2 && n > 1) throw ValidationError("need at least two tiers");
  std::mt19937_64 rng(seed);
  AsGraph g;
  for (std::size_t i = 1; i <= n; ++i) g.add_node(AsId(static_cast<std::uint32_t>(i)));
  if (n == 1) return g;

  const std::size_t top = 1 + below(rng, std::min<std::size_t>(std::max<std::size_t>(options.max_top, 1), n - 1));
  std::vector<std::size_t> tier(n + 1, 0);
  std::vector<std::size_t> lower;
  for (std::size_t i = top + 1; i <= n; ++i) lower.push_back(1 + below(rng, options.tiers - 1));
  std::sort(lower.begin(), lower.end());
  for (std::size_t i = top + 1; i <= n; ++i) tier[i] = lower[i - top - 1];

  auto id = [](std::size_t i) { return AsId(static_cast<std::uint32_t>(i)); };

  for (std::size_t a = 1; a <= top; ++a) {
    for (std::size_t b = a + 1; b <= top; ++b) g.add_link(id(a), id(b), RelKind::Peer);
  }
  for (std::size_t c = top + 1; c <= n; ++c) {
    std::vector<std::size_t> above;
    for (std::size_t p = 1; p < c; ++p) {
      if (tier[p] < tier[c]) above.push_back(p);
    }
    const std::size_t want = 1 + below(rng, std::max<std::size_t>(options.max_providers, 1));
    for (std::size_t k = 0; k < want && !above.empty(); ++k) {
      const std::size_t pick = below(rng, above.size());
      g.add_link(id(above[pick]), id(c), RelKind::ProviderToCustomer);
      above.erase(above.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  for (std::size_t a = top + 1; a <= n; ++a) {
    for (std::size_t b = a + 1; b <= n; ++b) {
      if (tier[a] != tier[b] || g.has_link(id(a), id(b))) continue;
      if (chance(rng, options.peer_probability)) {
        g.add_link(id(a), id(b), RelKind::Peer);
      } else if (chance(rng, options.sibling_probability)) {
        g.add_link(id(a), id(b), RelKind::Sibling);
      }
    }
  }
  return g;
}

namespace {

// ASes holding a policy-compliant route to `dest` once `graph` has settled.
std::set<AsId> settled_sources(const AsGraph& graph, AsId dest) {
  Simulator sim(graph, SimConfig{});
  sim.schedule(ScenarioEvent{0, OriginateEvent{dest}});
  sim.run();
  std::set<AsId> out;
  for (AsId as : graph.nodes()) {
    if (as != dest && sim.speaker(as).best(dest)) out.insert(as);
  }
  return out;
}

}  // namespace

FailureCase random_failure_case(const AsGraph& graph, std::uint64_t seed, Tick fail_time) {
  const auto links = graph.links();
  if (links.empty()) throw ValidationError("graph has no links to fail");
  std::mt19937_64 rng(seed);
  const std::vector<AsId> nodes(graph.nodes().begin(), graph.nodes().end());

  FailureCase fc;
  fc.dest = nodes[below(rng, nodes.size())];
  const Link& l = links[below(rng, links.size())];
  fc.link = LinkKey(l.a, l.b);
  fc.fail_time = fail_time;
  fc.scenario.events.push_back(ScenarioEvent{0, OriginateEvent{fc.dest}});
  fc.scenario.events.push_back(ScenarioEvent{fail_time, LinkEvent{l.a, l.b, false}});
  // Measured pairs: sources that still have a route after the failure.
  AsGraph failed = graph;
  failed.set_link_state(l.a, l.b, false);
  ProbeSampling sampling;
  for (AsId src : settled_sources(failed, fc.dest)) sampling.pairs.emplace_back(src, fc.dest);
  sampling.start = fail_time;
  fc.scenario.sampling = std::move(sampling);
  return fc;
}

}  // namespace irsim
