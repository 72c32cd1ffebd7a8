#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "irsim/engine.hpp"
#include "irsim/generator.hpp"
#include "irsim/report.hpp"
#include "oracle.hpp"

using namespace irsim;
using testing::raw;

namespace {

/// Providers always have a lower id than their customers, so the
/// customer-provider graph is acyclic; peers are sprinkled on top.
AsGraph random_hierarchy(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AsGraph g;
  g.add_node(AsId(1));
  for (std::uint32_t c = 2; c <= n; ++c) {
    const std::uint32_t providers = 1 + rng() % 2;
    for (std::uint32_t k = 0; k < providers; ++k) {
      const AsId p(1 + rng() % (c - 1));
      if (!g.has_link(p, AsId(c))) g.add_link(p, AsId(c), RelKind::ProviderToCustomer);
    }
  }
  for (std::uint32_t a = 1; a <= n; ++a) {
    for (std::uint32_t b = a + 1; b <= n; ++b) {
      if (!g.has_link(AsId(a), AsId(b)) && rng() % 5 == 0) g.add_link(AsId(a), AsId(b), RelKind::Peer);
    }
  }
  return g;
}

std::vector<AsGraph> sample_graphs() {
  std::vector<AsGraph> out;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    out.push_back(random_hierarchy(3 + seed % 7, seed));
    out.push_back(generate_topology(3 + seed % 8, 1000 + seed));
  }
  return out;
}

AsId pick_dest(const AsGraph& g, std::uint64_t seed) {
  auto it = g.nodes().begin();
  std::advance(it, seed % g.size());
  return *it;
}

void check_matches_oracle(const Simulator& sim, AsId dest) {
  const auto stable = oracle::stable_routes(sim.graph(), dest.value);
  for (AsId as : sim.graph().nodes()) {
    const auto got = sim.speaker(as).best(dest);
    const auto& want = stable.at(as.value);
    REQUIRE_MESSAGE(got.has_value() == want.has_value(), "AS " << as.value);
    if (got) CHECK_MESSAGE(raw(got->as_path) == *want, "AS " << as.value);
  }
}

}  // namespace

TEST_CASE("property: quiescent default routes equal the stable solution") {
  std::uint64_t seed = 0;
  for (const AsGraph& g : sample_graphs()) {
    const AsId dest = pick_dest(g, seed++);
    for (Protocol p : {Protocol::Bgp, Protocol::Rbgp, Protocol::Miro, Protocol::Yamr}) {
      SimConfig cfg;
      cfg.protocol = p;
      Simulator sim(g, cfg);
      sim.schedule({0, OriginateEvent{dest}});
      sim.run();
      REQUIRE(sim.converged());
      check_matches_oracle(sim, dest);
    }
  }
}

TEST_CASE("property: selected paths are simple, valley-free and consistent") {
  std::uint64_t seed = 0;
  for (const AsGraph& g : sample_graphs()) {
    const AsId dest = pick_dest(g, seed++);
    Simulator sim(g, SimConfig{});
    sim.schedule({0, OriginateEvent{dest}});
    sim.run();
    const oracle::Relations rel(g);
    for (AsId as : g.nodes()) {
      const auto r = sim.speaker(as).best(dest);
      if (!r) continue;
      const auto hops = raw(r->as_path);
      CHECK(hops.front() == as.value);
      CHECK(hops.back() == dest.value);
      CHECK(std::set<std::uint32_t>(hops.begin(), hops.end()).size() == hops.size());
      CHECK(oracle::valley_free(rel, hops));
      if (auto nh = r->next_hop()) {
        const auto tail = sim.speaker(*nh).best(dest);
        REQUIRE(tail.has_value());
        CHECK(Path(r->as_path.begin() + 1, r->as_path.end()) == tail->as_path);
      }
    }
  }
}

TEST_CASE("property: after a single failure the network reconverges to the new stable solution") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const AsGraph g = seed % 2 ? random_hierarchy(4 + seed % 6, seed) : generate_topology(4 + seed % 8, seed);
    const FailureCase fc = random_failure_case(g, seed);
    for (Protocol p : {Protocol::Bgp, Protocol::Rbgp, Protocol::Yamr}) {
      SimConfig cfg;
      cfg.protocol = p;
      Simulator sim(g, cfg);
      sim.load(fc.scenario);
      sim.run();
      REQUIRE(sim.converged());
      CHECK_FALSE(sim.graph().link_up(fc.link.lo, fc.link.hi));
      check_matches_oracle(sim, fc.dest);
    }
  }
}

TEST_CASE("property: identical inputs give byte-identical reports") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AsGraph g = generate_topology(6 + seed % 6, seed);
    const FailureCase fc = random_failure_case(g, seed);
    for (Protocol p : {Protocol::Bgp, Protocol::Rbgp, Protocol::Miro, Protocol::Yamr, Protocol::YamrHiding}) {
      SimConfig cfg;
      cfg.protocol = p;
      CHECK(report_json(run(g, cfg, fc.scenario)) == report_json(run(g, cfg, fc.scenario)));
    }
  }
}

TEST_CASE("property: every sent message is delivered or voided exactly once") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const AsGraph g = random_hierarchy(5 + seed % 6, seed);
    const FailureCase fc = random_failure_case(g, seed);
    for (Protocol p : {Protocol::Bgp, Protocol::Rbgp, Protocol::YamrHiding}) {
      SimConfig cfg;
      cfg.protocol = p;
      cfg.record_trace = true;
      cfg.default_delay = 1 + seed % 3;
      Simulator sim(g, cfg);
      sim.load(fc.scenario);
      sim.run();
      const MetricsReport r = sim.report();
      CHECK(sim.trace().size() == r.message_total);
      std::uint64_t voided = 0;
      for (const TraceEntry& t : sim.trace()) {
        voided += t.voided ? 1 : 0;
        CHECK(t.time >= t.sent + (t.voided ? 0 : cfg.default_delay));
      }
      CHECK(voided == r.voided);
    }
  }
}

TEST_CASE("property: probes terminate and report consistent outcomes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AsGraph g = generate_topology(5 + seed % 8, seed);
    const FailureCase fc = random_failure_case(g, seed);
    for (Protocol p : {Protocol::Bgp, Protocol::Rbgp, Protocol::Yamr, Protocol::YamrHiding}) {
      SimConfig cfg;
      cfg.protocol = p;
      Simulator sim(g, cfg);
      sim.load(fc.scenario);
      sim.run();
      for (const ProbeResult& r : sim.probes()) {
        CHECK(r.traversed.size() <= 2 * g.size() + 1);
        CHECK(r.traversed.front() == r.src);
        CHECK(r.traversed.back() == r.at);
        CHECK(r.delivered() == (r.at == r.dst));
        CHECK((r.reason == ProbeResult::Reason::None) == r.delivered());
      }
    }
  }
}

TEST_CASE("property: labeled alternatives avoid their link and end at the destination") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AsGraph g = random_hierarchy(4 + seed % 7, seed);
    const FailureCase fc = random_failure_case(g, seed);
    for (Protocol p : {Protocol::Yamr, Protocol::YamrHiding}) {
      SimConfig cfg;
      cfg.protocol = p;
      Simulator sim(g, cfg);
      sim.load(fc.scenario);
      sim.run_until(fc.fail_time - 1);
      auto check_tables = [&] {
        for (AsId as : g.nodes()) {
          for (const auto& [label, r] : sim.speaker_as<YamrSpeaker>(as).table(fc.dest)) {
            CHECK(r.as_path.front() == as);
            CHECK(r.as_path.back() == fc.dest);
            if (label.avoid) CHECK_FALSE(path_contains_link(r.as_path, *label.avoid));
          }
        }
      };
      check_tables();
      sim.run();
      check_tables();
    }
  }
}

TEST_CASE("oracle self-checks") {
  const AsGraph g = load_topology("1|2|-1\n1|3|-1\n2|3|0\n3|4|-1\n");
  const oracle::Relations rel(g);
  CHECK(rel.kind(1, 2) == 0);
  CHECK(rel.kind(2, 1) == 3);
  CHECK(rel.kind(2, 3) == 2);
  CHECK(oracle::simple_paths(rel, 2, 4).size() == 2);
  const auto stable = oracle::stable_routes(g, 4);
  CHECK(*stable.at(2) == std::vector<std::uint32_t>{2, 3, 4});
  CHECK(*stable.at(1) == std::vector<std::uint32_t>{1, 3, 4});
  CHECK(oracle::shared_suffix({1, 2, 3}, {5, 2, 3}) == 2);
}
