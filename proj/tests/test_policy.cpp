#include <doctest.h>

#include "helpers.hpp"
#include "irsim/policy.hpp"
#include "irsim/route.hpp"

using namespace irsim;
using testing::P;

TEST_CASE("import ranking prefers customers, then siblings, peers, providers") {
  CHECK(import_rank(Relation::Customer).value == 0);
  CHECK(import_rank(Relation::Sibling).value == 1);
  CHECK(import_rank(Relation::Peer).value == 2);
  CHECK(import_rank(Relation::Provider).value == 3);
}

TEST_CASE("export table") {
  const Relation all[] = {Relation::Customer, Relation::Sibling, Relation::Peer, Relation::Provider};
  for (Relation to : all) {
    CHECK(export_allowed(Learned::Self, to));
    CHECK(export_allowed(Learned::Customer, to));
    CHECK(export_allowed(Learned::Sibling, to));
  }
  for (Learned from : {Learned::Peer, Learned::Provider}) {
    CHECK(export_allowed(from, Relation::Customer));
    CHECK(export_allowed(from, Relation::Sibling));
    CHECK_FALSE(export_allowed(from, Relation::Peer));
    CHECK_FALSE(export_allowed(from, Relation::Provider));
  }
}

TEST_CASE("sibling edges pass the sender's class through") {
  CHECK(learned_via(Relation::Customer, Learned::Provider) == Learned::Customer);
  CHECK(learned_via(Relation::Peer, Learned::Self) == Learned::Peer);
  CHECK(learned_via(Relation::Sibling, Learned::Provider) == Learned::Provider);
  CHECK(learned_via(Relation::Sibling, Learned::Self) == Learned::Sibling);
}

TEST_CASE("valley-free paths") {
  // 1 provides 2 and 3; 2 and 3 peer; 4 is 3's customer; 5 is 4's sibling.
  const AsGraph g = load_topology("1|2|-1\n1|3|-1\n2|3|0\n3|4|-1\n4|5|2\n");
  CHECK(valley_free(P({2, 1, 3, 4}), g));   // up, down, down
  CHECK(valley_free(P({2, 3, 4}), g));      // peer, down
  CHECK(valley_free(P({4, 3, 2}), g));      // up, peer
  CHECK_FALSE(valley_free(P({3, 2, 1}), g));  // peer then up
  CHECK_FALSE(valley_free(P({1, 2, 3}), g));  // down then peer
  CHECK_FALSE(valley_free(P({1, 3, 2}), g));
  CHECK(valley_free(P({5, 4, 3}), g));      // sibling is neutral
  CHECK(valley_free(P({3, 4, 5}), g));
  CHECK(valley_free(P({7}), g));
  CHECK_THROWS_AS(valley_free(P({2, 4}), g), ValidationError);
}

TEST_CASE("decision order is rank, then length, then next hop") {
  Route a = self_route(AsId(9));
  a.as_path = P({9, 3, 1});
  a.rank = PrefRank{2};
  Route b = a;
  b.as_path = P({9, 4, 5, 1});
  b.rank = PrefRank{0};
  Route c = a;
  c.as_path = P({9, 2, 1});
  const std::vector<Route> all{a, b, c};
  CHECK(decide(all)->as_path == b.as_path);
  const std::vector<Route> peers{a, c};
  CHECK(decide(peers)->as_path == c.as_path);
  CHECK_FALSE(decide(std::vector<Route>{}).has_value());
  CHECK(preferred(c, a));
  CHECK_FALSE(preferred(a, c));
  CHECK_FALSE(preferred(a, a));
}

TEST_CASE("labels") {
  CHECK(parse_label("d")->is_default());
  CHECK(parse_label("5-2") == PathLabel::avoiding(LinkKey(AsId(2), AsId(5))));
  CHECK(to_string(*parse_label("5-2")) == "2-5");
  CHECK_FALSE(parse_label("x").has_value());
  CHECK_FALSE(parse_label("2-2").has_value());
  CHECK_FALSE(parse_label("0-2").has_value());
  CHECK_FALSE(parse_label("2-").has_value());
  CHECK(PathLabel{} < PathLabel::avoiding(LinkKey(AsId(1), AsId(2))));
}

TEST_CASE("avoidance") {
  Avoidance av;
  av.ases.insert(AsId(5));
  CHECK_FALSE(av.permits(P({2, 5, 6})));
  CHECK(av.permits(P({2, 3, 6})));
  av.links.insert(LinkKey(AsId(3), AsId(6)));
  CHECK_FALSE(av.permits(P({2, 3, 6})));
  CHECK(av.permits(P({2, 3, 4, 6})));
  CHECK(Avoidance{}.empty());
}
