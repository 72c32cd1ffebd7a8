#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "irsim/topology.hpp"

namespace irsim {

/// A named example topology shipped with the library (same text as
/// fixtures/<name>.txt).
struct Fixture {
  std::string name;
  std::string text;
  std::map<std::string, AsId> names;  // AS labels used in the figures
};

const std::vector<Fixture>& fixtures();

/// Throws ValidationError for an unknown fixture name.
const Fixture& fixture(std::string_view name);
AsGraph load_fixture(std::string_view name);
AsId fixture_as(std::string_view fixture_name, std::string_view as_name);

}  // namespace irsim
