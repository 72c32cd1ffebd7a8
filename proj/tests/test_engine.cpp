#include <doctest.h>

#include "helpers.hpp"
#include "irsim/engine.hpp"
#include "irsim/fixtures.hpp"
#include "irsim/report.hpp"

using namespace irsim;
using testing::P;

TEST_CASE("per-link delays drive delivery times") {
  SimConfig cfg;
  cfg.default_delay = 3;
  cfg.link_delays[LinkKey(AsId(5), AsId(6))] = 10;
  cfg.record_trace = true;
  Simulator sim(load_fixture("fig1"), cfg);
  sim.schedule({0, OriginateEvent{AsId(6)}});
  sim.run();
  for (const TraceEntry& t : sim.trace()) {
    const Tick expect = LinkKey(t.msg.sender, t.msg.receiver) == LinkKey(AsId(5), AsId(6)) ? 10 : 3;
    CHECK(t.time - t.sent == expect);
  }
  CHECK(sim.report().quiescence_time > 0);
}

TEST_CASE("the run ends when the queue drains") {
  Simulator sim(load_fixture("fig1"), SimConfig{});
  CHECK(sim.idle());
  sim.schedule({0, OriginateEvent{AsId(6)}});
  CHECK_FALSE(sim.idle());
  sim.run();
  CHECK(sim.idle());
  CHECK(sim.converged());
  const MetricsReport r = sim.report();
  CHECK(r.converged);
  std::uint64_t by_kind = 0;
  for (const auto& [kind, n] : r.messages) by_kind += n;
  CHECK(r.message_total == by_kind);
  CHECK(r.end_time == r.quiescence_time);
}

TEST_CASE("run_until stops at the requested tick") {
  Simulator sim(load_fixture("fig1"), SimConfig{});
  sim.schedule({0, OriginateEvent{AsId(6)}});
  sim.run_until(1);
  CHECK(sim.now() <= 1);
  CHECK(sim.speaker(AsId(5)).best(AsId(6)).has_value());
  CHECK_FALSE(sim.speaker(AsId(1)).best(AsId(6)).has_value());
  sim.run();
  CHECK(sim.speaker(AsId(1)).best(AsId(6)).has_value());
}

TEST_CASE("probe walks the forwarding state") {
  Simulator sim(load_fixture("fig1"), SimConfig{});
  sim.schedule({0, OriginateEvent{AsId(6)}});
  ProbeResult early = sim.probe(AsId(1), AsId(6));
  CHECK_FALSE(early.delivered());
  CHECK(early.reason == ProbeResult::Reason::NoRoute);
  CHECK(early.at == AsId(1));
  sim.run();
  const ProbeResult r = sim.probe(AsId(1), AsId(6));
  CHECK(r.delivered());
  CHECK(r.traversed == P({1, 2, 5, 6}));
  CHECK(r.at == AsId(6));
  CHECK(sim.probe(AsId(6), AsId(6)).traversed == P({6}));
}

TEST_CASE("link failure drops in-flight messages and probes see the gap") {
  SimConfig cfg;
  cfg.record_trace = true;
  Simulator sim(load_fixture("fig1"), cfg);
  sim.schedule({0, OriginateEvent{AsId(6)}});
  sim.inject_failure(0, AsId(5), AsId(6));
  sim.run();
  const MetricsReport r = sim.report();
  CHECK(r.voided >= 1);
  CHECK(r.first_failure == Tick{0});
  CHECK(sim.speaker(AsId(1)).best(AsId(6))->as_path == P({1, 2, 3, 6}));
  CHECK_THROWS_AS(sim.inject_failure(5, AsId(1), AsId(6)), ValidationError);
}

TEST_CASE("link events that do not change state are ignored") {
  SimConfig cfg;
  cfg.record_trace = true;
  Simulator sim(load_fixture("fig1"), cfg);
  sim.schedule({0, OriginateEvent{AsId(6)}});
  sim.run();
  const auto before = sim.report().message_total;
  sim.schedule({100, LinkEvent{AsId(5), AsId(6), true}});
  sim.run();
  CHECK(sim.report().message_total == before);
  sim.schedule({200, LinkEvent{AsId(5), AsId(6), false}});
  sim.schedule({200, LinkEvent{AsId(6), AsId(5), false}});
  sim.schedule({300, LinkEvent{AsId(5), AsId(6), true}});
  sim.run();
  CHECK(sim.speaker(AsId(1)).best(AsId(6))->as_path == P({1, 2, 5, 6}));
}

TEST_CASE("sampling probes each pair every tick until idle") {
  Simulator sim(load_fixture("fig3"), SimConfig{});
  const AsId mit = fixture_as("fig3", "MIT");
  const AsId hari = fixture_as("fig3", "Hari");
  Scenario sc;
  sc.events.push_back({0, OriginateEvent{mit}});
  sc.events.push_back({100, LinkEvent{hari, mit, false}});
  sc.sampling = ProbeSampling{{{hari, mit}}, 100, std::nullopt, 1};
  sim.load(sc);
  sim.run();
  const MetricsReport r = sim.report();
  REQUIRE(r.probes >= 2);
  CHECK(r.probes == r.delivered + r.dropped);
  CHECK(r.dropped == r.dropped_loop + r.dropped_no_route);
  const PairStats& ps = r.pairs.at({hari, mit});
  CHECK(ps.probes == r.probes);
  CHECK(sim.probes().front().time == 100);
  CHECK(sim.probes().back().time == r.end_time);
  for (std::size_t i = 1; i < sim.probes().size(); ++i) {
    CHECK(sim.probes()[i].time == sim.probes()[i - 1].time + 1);
  }
}

TEST_CASE("bounded sampling") {
  Simulator sim(load_fixture("fig1"), SimConfig{});
  Scenario sc;
  sc.events.push_back({0, OriginateEvent{AsId(6)}});
  sc.sampling = ProbeSampling{{{AsId(1), AsId(6)}, {AsId(4), AsId(6)}}, 10, Tick{20}, 5};
  sim.load(sc);
  sim.run();
  CHECK(sim.report().probes == 6);
  CHECK(sim.report().delivered == 6);
  CHECK(sim.report().end_time == 20);
}

TEST_CASE("quiesce limit halts a run that keeps going") {
  SimConfig cfg;
  cfg.quiesce_limit = 2;
  cfg.default_delay = 5;
  Simulator sim(load_fixture("fig1"), cfg);
  sim.schedule({0, OriginateEvent{AsId(6)}});
  sim.run();
  CHECK_FALSE(sim.converged());
  CHECK_FALSE(sim.report().converged);
}

TEST_CASE("speakers match the configured protocol") {
  for (Protocol p : {Protocol::Bgp, Protocol::Rbgp, Protocol::Miro, Protocol::Yamr, Protocol::YamrHiding}) {
    SimConfig cfg;
    cfg.protocol = p;
    Simulator sim(load_fixture("fig1"), cfg);
    sim.schedule({0, OriginateEvent{AsId(6)}});
    sim.run();
    CHECK(sim.converged());
    CHECK(sim.probe(AsId(1), AsId(6)).traversed == P({1, 2, 5, 6}));
    CHECK(sim.report().protocol == std::string(to_string(p)));
  }
  Simulator sim(load_fixture("fig1"), SimConfig{});
  CHECK_THROWS_AS(sim.speaker_as<YamrSpeaker>(AsId(1)), ValidationError);
  CHECK_THROWS_AS(sim.speaker(AsId(42)), ValidationError);
}

TEST_CASE("scheduling validates events") {
  Simulator sim(load_fixture("fig1"), SimConfig{});
  CHECK_THROWS_AS(sim.schedule({0, OriginateEvent{AsId(42)}}), ValidationError);
  CHECK_THROWS_AS(sim.schedule({0, LinkEvent{AsId(1), AsId(6), false}}), ValidationError);
}

TEST_CASE("report formats") {
  const MetricsReport r = run(load_fixture("fig1"), SimConfig{}, Scenario{{{0, OriginateEvent{AsId(6)}}}, {}});
  const std::string json = report_json(r);
  CHECK(json.back() == '\n');
  CHECK(json.find("\"protocol\": \"bgp\"") != std::string::npos);
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("metric,value\n", 0) == 0);
  CHECK(csv.find("converged,1\n") != std::string::npos);
  CHECK(csv.find("messages.total,") != std::string::npos);
  CHECK_THROWS_AS(compare_csv({r}), ValidationError);
  SimConfig other;
  other.protocol = Protocol::Rbgp;
  const MetricsReport r2 = run(load_fixture("fig1"), other, Scenario{{{0, OriginateEvent{AsId(6)}}}, {}});
  const std::string table = compare_csv({r, r2});
  CHECK(table.rfind("metric,bgp,rbgp\n", 0) == 0);
  CHECK(compare_json({r, r2}).find("\"protocols\"") != std::string::npos);
}
