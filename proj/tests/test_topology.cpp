#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "irsim/fixtures.hpp"
#include "irsim/topology.hpp"

using namespace irsim;
using testing::P;

TEST_CASE("parse relationship records") {
  const AsGraph g = load_topology("# comment\n1|2|-1\n\n2|3|0  # trailing\n3|4|2\n");
  CHECK(g.size() == 4);
  CHECK(g.link_count() == 3);
  CHECK(g.relation(AsId(1), AsId(2)) == Relation::Customer);
  CHECK(g.relation(AsId(2), AsId(1)) == Relation::Provider);
  CHECK(g.relation(AsId(2), AsId(3)) == Relation::Peer);
  CHECK(g.relation(AsId(3), AsId(2)) == Relation::Peer);
  CHECK(g.relation(AsId(4), AsId(3)) == Relation::Sibling);
  CHECK(rel_from_perspective(g, AsId(3), AsId(4)) == Relation::Sibling);
  CHECK(g.neighbors(AsId(2)) == P({1, 3}));
}

TEST_CASE("malformed topology lines report their line number") {
  auto line_of = [](const char* text) {
    try {
      load_topology(text);
    } catch (const TopologyError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("1|2|-1\n1|3\n") == 2);
  CHECK(line_of("1|2|5\n") == 1);
  CHECK(line_of("1|x|0\n") == 1);
  CHECK(line_of("0|2|0\n") == 1);
  CHECK(line_of("1|1|0\n") == 1);
  CHECK(line_of("1|2|-1\n\n2|1|0\n") == 3);
  CHECK(line_of("1|2|0|7\n") == 1);
  CHECK_THROWS_AS(load_topology("1|2"), ValidationError);
}

TEST_CASE("re-adding an identical link is a no-op") {
  const AsGraph g = load_topology("1|2|-1\n1|2|-1\n2|3|0\n3|2|0\n");
  CHECK(g.link_count() == 2);
}

TEST_CASE("serialization round-trips") {
  for (const Fixture& f : fixtures()) {
    const AsGraph g = load_topology(f.text);
    const std::string text = serialize_topology(g);
    CHECK(load_topology(text) == g);
    CHECK(serialize_topology(load_topology(text)) == text);
  }
}

TEST_CASE("link state") {
  AsGraph g = load_fixture("fig3");
  const AsId mit = fixture_as("fig3", "MIT");
  const AsId hari = fixture_as("fig3", "Hari");
  CHECK(g.link_up(hari, mit));
  g.set_link_state(mit, hari, false);
  CHECK_FALSE(g.link_up(hari, mit));
  set_link_state(g, hari, mit, false);  // idempotent
  CHECK_FALSE(g.link_up(mit, hari));
  g.set_link_state(hari, mit, true);
  CHECK(g.link_up(mit, hari));
  CHECK_THROWS_AS(g.set_link_state(mit, fixture_as("fig3", "Peter"), false), ValidationError);
  CHECK_FALSE(g.has_link(mit, fixture_as("fig3", "Peter")));
}

TEST_CASE("shortest up path") {
  AsGraph g = load_fixture("fig1");
  CHECK(shortest_up_path(g, AsId(1), AsId(6)) == P({1, 2, 3, 6}));  // ties go to the lower id
  g.set_link_state(AsId(3), AsId(6), false);
  CHECK(shortest_up_path(g, AsId(1), AsId(6)) == P({1, 2, 5, 6}));
  CHECK(shortest_up_path(g, AsId(4), AsId(4)) == P({4}));
  g.set_link_state(AsId(5), AsId(6), false);
  CHECK(shortest_up_path(g, AsId(1), AsId(6)).empty());
  CHECK(shortest_up_path(g, AsId(1), AsId(99)).empty());
}

TEST_CASE("topology files") {
  const auto dir = std::filesystem::temp_directory_path() / "irsim_topology_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "g.txt";
  {
    std::ofstream(path) << "1|2|-1\n";
  }
  CHECK(load_topology_file(path).size() == 2);
  CHECK_THROWS_AS(load_topology_file(dir / "missing.txt"), IoError);
}

TEST_CASE("bundled fixture texts match the files on disk") {
  for (const Fixture& f : fixtures()) {
    const auto path = std::filesystem::path(IRSIM_SOURCE_DIR) / "fixtures" / (f.name + ".txt");
    CHECK_MESSAGE(load_topology_file(path) == load_topology(f.text), f.name);
  }
  CHECK_THROWS_AS(fixture("fig9"), ValidationError);
  CHECK_THROWS_AS(fixture_as("fig3", "Nobody"), ValidationError);
}

TEST_CASE("path helpers") {
  CHECK(path_contains(P({1, 2, 3}), AsId(2)));
  CHECK_FALSE(path_contains(P({1, 2, 3}), AsId(4)));
  CHECK(path_contains_link(P({1, 2, 3}), LinkKey(AsId(3), AsId(2))));
  CHECK_FALSE(path_contains_link(P({1, 2, 3}), LinkKey(AsId(1), AsId(3))));
  CHECK(common_suffix(P({1, 2, 5, 6}), P({3, 5, 6})) == 2);
  CHECK(common_suffix(P({1, 6}), P({3, 5})) == 0);
  CHECK(LinkKey(AsId(5), AsId(2)) == LinkKey(AsId(2), AsId(5)));
  CHECK(to_string(LinkKey(AsId(5), AsId(2))) == "2-5");
}
