#include "irsim/fixtures.hpp"

namespace irsim {

namespace {

// Generated at configure time from fixtures/*.txt.
#include "irsim_fixture_texts.inc"

std::map<std::string, AsId> labels(std::initializer_list<std::pair<const char*, std::uint32_t>> list) {
  std::map<std::string, AsId> out;
  for (const auto& [name, id] : list) out.emplace(name, AsId(id));
  return out;
}

}  // namespace

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = {
      {"fig1", kFig1, labels({{"A", 1}, {"B", 2}, {"C", 3}, {"D", 4}, {"E", 5}, {"F", 6}})},
      {"fig3", kFig3, labels({{"MIT", 1}, {"Sprint", 2}, {"Hari", 3}, {"ATT", 4}, {"Peter", 5}})},
      {"fig4", kFig4,
       labels({{"MIT", 1}, {"Sprint", 2}, {"Hari", 3}, {"ATT", 4}, {"David", 5}, {"Peter", 6}})},
      {"fig5", kFig5, labels({{"A", 1}, {"B", 2}, {"C", 3}, {"D", 4}, {"E", 5}, {"F", 6}})},
      {"fig6", kFig6, labels({{"N", 1}, {"O", 2}, {"D", 3}, {"I", 4}, {"G", 5}, {"L", 6}})},
  };
  return all;
}

const Fixture& fixture(std::string_view name) {
  for (const Fixture& f : fixtures()) {
    if (f.name == name) return f;
  }
  throw ValidationError("unknown fixture '" + std::string(name) + "'");
}

AsGraph load_fixture(std::string_view name) { return load_topology(fixture(name).text); }

AsId fixture_as(std::string_view fixture_name, std::string_view as_name) {
  const Fixture& f = fixture(fixture_name);
  auto it = f.names.find(std::string(as_name));
  if (it == f.names.end()) {
    throw ValidationError("fixture " + f.name + " has no AS named '" + std::string(as_name) + "'");
  }
  return it->second;
}

}  // namespace irsim
